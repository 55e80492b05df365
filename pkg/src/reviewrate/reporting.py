"""Serialising evaluation and sweep reports as JSON or CSV."""

import csv
import io
import json

from .evaluation import EvalReport, SweepReport

SWEEP_CSV_HEADER = ("fraction", "model", "task", "accuracy", "train_seconds", "total_seconds")


def report_to_json(report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def report_from_json(text: str):
    d = json.loads(text)
    return SweepReport.from_dict(d) if "reports" in d else EvalReport.from_dict(d)


def report_to_csv(report) -> str:
    """One row per run; fraction as an integer percent, accuracy to 4 places."""
    rows = report.reports if isinstance(report, SweepReport) else [report]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for r in rows:
        writer.writerow([
            round(r.data_fraction * 100),
            r.model,
            r.task,
            f"{r.accuracy:.4f}",
            f"{r.train_seconds:.2f}",
            f"{r.total_seconds:.2f}",
        ])
    return buf.getvalue()


def write_report(report, format="json", path=None, stream=None) -> None:
    """Write ``report`` to ``path``, or to ``stream`` when no path is given."""
    if format == "json":
        text = report_to_json(report)
    elif format == "csv":
        text = report_to_csv(report)
    else:
        raise ValueError(f"format must be 'json' or 'csv', got {format!r}")
    if path is None:
        stream.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
