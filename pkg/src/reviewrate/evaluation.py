"""Accuracy, confusion matrices, timed train/test runs and data-fraction sweeps."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .corpus import NEGATIVE, POSITIVE, Task, count_lines, load_data, prefix_size, split_contiguous
from .models.pipeline import TextClassifier

DEFAULT_GRID = tuple(k / 10 for k in range(1, 11))


def task_classes(task) -> list:
    """Full ordered label set for a task."""
    if Task.coerce(task) is Task.STARS:
        return [1, 2, 3, 4, 5]
    return [NEGATIVE, POSITIVE]


def accuracy(predicted, truth) -> float:
    predicted, truth = list(predicted), list(truth)
    if len(predicted) != len(truth):
        raise ValueError(f"{len(predicted)} predictions for {len(truth)} labels")
    if not truth:
        raise ValueError("accuracy of an empty set is undefined")
    return sum(p == t for p, t in zip(predicted, truth)) / len(truth)


def confusion_matrix(predicted, truth, classes) -> np.ndarray:
    """``cm[t, p]`` counts items with true class ``t`` predicted as ``p``."""
    index = {c: k for k, c in enumerate(classes)}
    cm = np.zeros((len(classes), len(classes)), dtype=np.int64)
    predicted, truth = list(predicted), list(truth)
    if len(predicted) != len(truth):
        raise ValueError(f"{len(predicted)} predictions for {len(truth)} labels")
    for p, t in zip(predicted, truth):
        try:
            cm[index[t], index[p]] += 1
        except KeyError as exc:
            raise ValueError(f"label {exc.args[0]!r} not among classes {list(classes)}") from None
    return cm


def _plain(value):
    return value.item() if isinstance(value, np.generic) else value


@dataclass
class EvalReport:
    task: str
    model: str
    n_train: int
    n_test: int
    accuracy: float
    classes: list
    confusion: list
    train_seconds: float
    total_seconds: float
    data_fraction: float
    train_fraction: float
    seed: int
    skipped_lines: int = 0
    hyper: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        return cls(**d)


@dataclass
class SweepReport:
    task: str
    models: list
    grid: list
    seed: int
    jobs: int
    reports: list

    def to_dict(self) -> dict:
        d = asdict(self)
        d["reports"] = [r.to_dict() for r in self.reports]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SweepReport":
        d = dict(d)
        d["reports"] = [EvalReport.from_dict(r) for r in d["reports"]]
        return cls(**d)


def run_experiment(source, task="posneg", model="nb", hyper=None, train_fraction=0.7,
                   data_fraction=1.0, on_error="abort", stop_words="english",
                   n_lines=None) -> EvalReport:
    """Fit on the leading part of a data prefix, score on the rest.

    The first ``ceil(data_fraction * n_lines)`` lines of ``source`` are loaded,
    then split contiguously at ``floor(train_fraction * n_records)``.
    ``train_seconds`` covers fitting the whole pipeline; ``total_seconds``
    adds prediction and scoring.
    """
    task = Task.coerce(task)
    hyper = dict(hyper or {})
    if n_lines is None:
        n_lines = count_lines(source)
    corpus = load_data(source, 1, max(prefix_size(n_lines, data_fraction), 1), task, on_error)
    train_rows, test_rows = split_contiguous(len(corpus), train_fraction)
    train, test = corpus.subset(train_rows), corpus.subset(test_rows)

    clf = TextClassifier(model=model, stop_words=stop_words, task=task.value, **hyper)
    start = time.perf_counter()
    clf.fit(train.texts, train.labels)
    fitted = time.perf_counter()
    predicted = [_plain(p) for p in clf.predict(test.texts)]
    classes = task_classes(task)
    cm = confusion_matrix(predicted, test.labels, classes)
    acc = accuracy(predicted, test.labels)
    done = time.perf_counter()

    return EvalReport(
        task=task.value,
        model=model,
        n_train=len(train),
        n_test=len(test),
        accuracy=acc,
        classes=classes,
        confusion=cm.tolist(),
        train_seconds=fitted - start,
        total_seconds=done - start,
        data_fraction=float(data_fraction),
        train_fraction=float(train_fraction),
        seed=int(hyper.get("random_state", 42)),
        skipped_lines=corpus.skipped_count,
        hyper=hyper,
    )


def _run_point(kwargs):
    return run_experiment(**kwargs)


def fraction_sweep(source, task="posneg", models=("nb", "svm", "lr"), hyper=None,
                   grid=DEFAULT_GRID, train_fraction=0.7, on_error="abort",
                   stop_words="english", jobs=1) -> SweepReport:
    """One :func:`run_experiment` per (fraction, model), fraction-major order."""
    grid = [float(f) for f in grid]
    if not grid:
        raise ValueError("grid must not be empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"grid must be strictly ascending, got {grid}")
    if not (0 < grid[0] and grid[-1] <= 1):
        raise ValueError(f"grid fractions must lie in (0, 1], got {grid}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    task = Task.coerce(task)
    hyper = dict(hyper or {})
    n_lines = count_lines(source)
    points = [
        dict(source=source, task=task, model=m, hyper=hyper, train_fraction=train_fraction,
             data_fraction=f, on_error=on_error, stop_words=stop_words, n_lines=n_lines)
        for f in grid
        for m in models
    ]
    if jobs == 1:
        reports = [_run_point(p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_point, points))
    return SweepReport(task=task.value, models=list(models), grid=grid,
                       seed=int(hyper.get("random_state", 42)), jobs=jobs, reports=reports)


def format_accuracy(acc: float) -> str:
    """Percentage with two decimals, e.g. ``0.929 -> '92.90%'``."""
    return f"{acc * 100:.2f}%"


def format_seconds(seconds: float) -> str:
    return f"{seconds:.2f}"
