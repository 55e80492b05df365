"""Command-line interface: ``reviewrate {train,evaluate,sweep,predict}``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .corpus import count_lines, load_data, prefix_size, read_text_lines, split_contiguous
from .evaluation import fraction_sweep, run_experiment
from .exceptions import (DegenerateInput, FormatError, ParseError, RangeError,
                         UsageError)
from .models.pipeline import MODEL_KINDS, TextClassifier
from .persistence import load_model, save_model
from .reporting import write_report


@dataclass
class RunConfig:
    command: str
    data_path: Optional[str] = None
    task: str = "posneg"
    models: list = field(default_factory=lambda: ["nb"])
    train_fraction: float = 0.7
    data_fraction: float = 1.0
    grid: list = field(default_factory=lambda: [k / 10 for k in range(1, 11)])
    seed: int = 42
    stopwords_path: Optional[str] = None
    model_path: Optional[str] = None
    model_format: str = "binary"
    output_path: Optional[str] = None
    output_format: str = "json"
    on_error: str = "skip"
    jobs: int = 1
    alpha: float = 1.0
    l2: Optional[float] = None
    epochs: int = 5
    tol: float = 1e-6
    max_iter: int = 1000

    @property
    def hyper(self) -> dict:
        return dict(alpha=self.alpha, l2=self.l2, epochs=self.epochs, tol=self.tol,
                    max_iter=self.max_iter, random_state=self.seed)

    @property
    def stop_words(self):
        return self.stopwords_path or "english"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def parse_grid(text: str) -> list:
    """``"start:stop:step"`` in percent (inclusive) or a comma list of percents."""
    try:
        if ":" in text:
            start, stop, step = (int(p) for p in text.split(":"))
            if step <= 0:
                raise ValueError
            percents = list(range(start, stop + 1, step))
        else:
            percents = [int(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --grid {text!r}; expected start:stop:step in percent") from None
    if not percents or percents[0] <= 0 or percents[-1] > 100:
        raise UsageError(f"--grid {text!r} must stay within (0, 100]")
    if any(b <= a for a, b in zip(percents, percents[1:])):
        raise UsageError(f"--grid {text!r} must be strictly ascending")
    return [p / 100 for p in percents]


def _fraction(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"fraction must lie in (0, 1], got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reviewrate",
                     description="Review polarity / star-rating classification.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_opts(p, model_list=False):
        p.add_argument("--data", required=True, help="JSON-lines review file")
        p.add_argument("--task", choices=["posneg", "stars"], default="posneg")
        if model_list:
            p.add_argument("--model", default="nb,svm,lr",
                           help="comma-separated subset of nb,svm,lr")
        else:
            p.add_argument("--model", choices=MODEL_KINDS, default="nb")
        p.add_argument("--train-fraction", type=_fraction, default=0.7)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--stopwords", help="stop-word file (default: bundled English list)")
        p.add_argument("--on-error", choices=["skip", "abort"], default="skip")
        p.add_argument("--alpha", type=float, default=1.0, help="naive Bayes smoothing")
        p.add_argument("--l2", type=float, default=None, help="linear model L2 strength")
        p.add_argument("--epochs", type=int, default=5, help="SGD epochs (svm)")
        p.add_argument("--max-iter", type=int, default=1000, help="iteration cap (lr)")
        p.add_argument("--tol", type=float, default=1e-6, help="gradient tolerance (lr)")
        p.add_argument("--output", help="write the report here instead of stdout")

    p = sub.add_parser("train", help="fit a model and save it")
    data_opts(p)
    p.add_argument("--data-fraction", type=_fraction, default=1.0)
    p.add_argument("--save", required=True, help="model file to write")
    p.add_argument("--format", choices=["binary", "json"], default="binary",
                   help="model file format")

    p = sub.add_parser("evaluate", help="train on the leading split, report test accuracy")
    data_opts(p)
    p.add_argument("--data-fraction", type=_fraction, default=1.0)
    p.add_argument("--output-format", choices=["json", "csv"], default="json")

    p = sub.add_parser("sweep", help="accuracy and timing over data fractions")
    data_opts(p, model_list=True)
    p.add_argument("--grid", default="10:100:10", help="percent grid start:stop:step")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output-format", choices=["json", "csv"], default="json")

    p = sub.add_parser("predict", help="label bare-text reviews, one per line")
    p.add_argument("--load", required=True, help="model file from `train`")
    p.add_argument("--data", help="file of review texts (default: stdin)")
    p.add_argument("--output", help="write labels here instead of stdout")
    return parser


def parse_args(argv) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command, data_path=ns.data, output_path=ns.output)
    if ns.command == "predict":
        cfg.model_path = ns.load
        return cfg
    cfg.task = ns.task
    cfg.train_fraction = ns.train_fraction
    cfg.seed = ns.seed
    cfg.stopwords_path = ns.stopwords
    cfg.on_error = ns.on_error
    cfg.alpha, cfg.l2, cfg.epochs = ns.alpha, ns.l2, ns.epochs
    cfg.max_iter, cfg.tol = ns.max_iter, ns.tol
    if ns.command == "sweep":
        models = [m.strip() for m in ns.model.split(",") if m.strip()]
        bad = [m for m in models if m not in MODEL_KINDS]
        if bad or not models:
            raise UsageError(f"unknown model(s) {bad or ns.model!r}; choose from {MODEL_KINDS}")
        cfg.models = models
        cfg.grid = parse_grid(ns.grid)
        if ns.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        cfg.jobs = ns.jobs
    else:
        cfg.models = [ns.model]
        cfg.data_fraction = ns.data_fraction
    if ns.command == "train":
        cfg.model_path = ns.save
        cfg.model_format = ns.format
    if ns.command in ("evaluate", "sweep"):
        cfg.output_format = ns.output_format
    return cfg


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_train(cfg: RunConfig) -> None:
    n_lines = count_lines(cfg.data_path)
    corpus = load_data(cfg.data_path, 1, max(prefix_size(n_lines, cfg.data_fraction), 1),
                       cfg.task, cfg.on_error)
    if cfg.train_fraction < 1:
        corpus = corpus.subset(split_contiguous(len(corpus), cfg.train_fraction)[0])
    clf = TextClassifier(model=cfg.models[0], stop_words=cfg.stop_words, task=cfg.task,
                         **cfg.hyper)
    start = time.perf_counter()
    clf.fit(corpus.texts, corpus.labels)
    seconds = time.perf_counter() - start
    save_model(clf, cfg.model_path, format=cfg.model_format)
    summary = {
        "task": cfg.task,
        "model": cfg.models[0],
        "n_train": len(corpus),
        "skipped_lines": corpus.skipped_count,
        "vocabulary_size": len(clf.vocabulary_),
        "stop_list_id": clf.stop_list_id_,
        "seed": cfg.seed,
        "train_seconds": seconds,
        "model_path": str(cfg.model_path),
    }
    _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", cfg.output_path)


def cmd_evaluate(cfg: RunConfig) -> None:
    report = run_experiment(cfg.data_path, cfg.task, cfg.models[0], cfg.hyper,
                            cfg.train_fraction, cfg.data_fraction, cfg.on_error,
                            cfg.stop_words)
    write_report(report, cfg.output_format, cfg.output_path, sys.stdout)


def cmd_sweep(cfg: RunConfig) -> None:
    report = fraction_sweep(cfg.data_path, cfg.task, cfg.models, cfg.hyper, cfg.grid,
                            cfg.train_fraction, cfg.on_error, cfg.stop_words, cfg.jobs)
    write_report(report, cfg.output_format, cfg.output_path, sys.stdout)


def cmd_predict(cfg: RunConfig) -> None:
    clf = load_model(cfg.model_path)
    texts = list(read_text_lines(cfg.data_path if cfg.data_path else sys.stdin))
    labels = clf.predict(texts) if texts else []
    _emit("".join(f"{label}\n" for label in labels), cfg.output_path)


COMMANDS = {"train": cmd_train, "evaluate": cmd_evaluate, "sweep": cmd_sweep,
            "predict": cmd_predict}


def main(argv=None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    try:
        COMMANDS[cfg.command](cfg)
    except (OSError, FormatError, ParseError, RangeError, DegenerateInput, ValueError) as exc:
        print(f"reviewrate {cfg.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
