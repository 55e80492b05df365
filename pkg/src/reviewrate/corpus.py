"""Reading JSON-lines review dumps into labelled corpora.

Each line of a review file holds one JSON object; only ``text`` and ``stars``
are used, every other key is ignored. Records are addressed by their 1-based
physical line number so that disjoint line ranges give disjoint corpora.
"""

from __future__ import annotations

import enum
import io
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import BinaryIO, Iterator, TextIO, Union

from .exceptions import ParseError, RangeError

POSITIVE = "positive"
NEGATIVE = "negative"


class Task(str, enum.Enum):
    """Which labelling of the star rating to learn."""

    POSNEG = "posneg"
    STARS = "stars"

    @classmethod
    def coerce(cls, value) -> "Task":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class ReviewRecord:
    text: str
    stars: int
    source_line: int


@dataclass(frozen=True)
class LabeledCorpus:
    """Parallel texts and labels loaded from one line range."""

    texts: tuple
    labels: tuple
    task: Task
    source_lines: tuple = ()
    skipped_count: int = 0

    def __post_init__(self):
        if len(self.texts) != len(self.labels):
            raise ValueError("texts and labels differ in length")

    def __len__(self):
        return len(self.texts)

    def subset(self, rows: range) -> "LabeledCorpus":
        lines = self.source_lines[rows.start:rows.stop] if self.source_lines else ()
        return LabeledCorpus(
            self.texts[rows.start:rows.stop],
            self.labels[rows.start:rows.stop],
            self.task,
            lines,
        )


def _as_stars(value, line_number):
    # bool is an int subclass in Python; JSON true/false is not a rating
    if isinstance(value, bool):
        raise ParseError("BadStars", f"stars is {value!r}", line_number)
    if isinstance(value, float):
        if not math.isfinite(value) or not value.is_integer():
            raise ParseError("BadStars", f"stars {value!r} is not integral", line_number)
        value = int(value)
    if not isinstance(value, int) or not 1 <= value <= 5:
        raise ParseError("BadStars", f"stars {value!r} not an integer in [1, 5]", line_number)
    return value


def parse_review_line(line: str, line_number: int) -> ReviewRecord:
    """Parse one JSON-lines review; raises :class:`ParseError` on bad input."""
    try:
        obj = json.loads(line)
    except (json.JSONDecodeError, RecursionError) as exc:
        raise ParseError("MalformedJson", str(exc), line_number) from None
    if not isinstance(obj, dict):
        raise ParseError("MalformedJson", "line is not a JSON object", line_number)
    for key in ("text", "stars"):
        if key not in obj:
            raise ParseError("MissingField", f"no {key!r} field", line_number)
    text = obj["text"]
    if not isinstance(text, str):
        raise ParseError("MissingField", "'text' is not a string", line_number)
    return ReviewRecord(text, _as_stars(obj["stars"], line_number), line_number)


def map_label(stars: int, task) -> Union[str, int]:
    """Map a star rating to the label for ``task``.

    Ratings of 3 and above are positive for the polarity task; the 5-star task
    keeps the rating itself.
    """
    if Task.coerce(task) is Task.STARS:
        return int(stars)
    return POSITIVE if stars >= 3 else NEGATIVE


def _iter_lines(source) -> Iterator[str]:
    """Yield lines without terminators from a path or an open stream.

    Undecodable byte lines are yielded as the :class:`UnicodeDecodeError`.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            yield from _iter_lines(fh)
        return
    for raw in source:
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                yield exc
                continue
        yield raw.rstrip("\r\n")


def iter_records(source, start_line=1, end_line=None, on_error="abort"):
    """Stream ``(line_number, record_or_error)`` pairs within a line range.

    With ``on_error="abort"`` the first :class:`ParseError` is raised; with
    ``"skip"`` the error object is yielded in place of the record.
    """
    if on_error not in ("abort", "skip"):
        raise ValueError(f"on_error must be 'abort' or 'skip', got {on_error!r}")
    for number, line in enumerate(_iter_lines(source), start=1):
        if number < start_line:
            continue
        if end_line is not None and number > end_line:
            break
        try:
            if isinstance(line, UnicodeDecodeError):
                raise ParseError("MalformedJson", f"invalid UTF-8: {line}", number)
            yield number, parse_review_line(line, number)
        except ParseError as exc:
            if on_error == "abort":
                raise
            yield number, exc


def load_data(
    source: Union[str, os.PathLike, BinaryIO, TextIO],
    start_line: int,
    end_line: int,
    task="posneg",
    on_error: str = "abort",
) -> LabeledCorpus:
    """Load reviews from lines ``start_line..end_line`` (inclusive, 1-based).

    Parameters
    ----------
    source : path or stream
        A JSON-lines file path, or an open binary/text stream.
    start_line, end_line : int
        Inclusive physical line range. Lines beyond the end of the file are
        simply absent from the result.
    task : {"posneg", "stars"} or Task
    on_error : {"abort", "skip"}
        ``"skip"`` drops malformed lines and counts them in
        ``skipped_count``; ``"abort"`` raises the first :class:`ParseError`.
    """
    if start_line < 1:
        raise RangeError(f"start_line must be >= 1, got {start_line}")
    if start_line > end_line:
        raise RangeError(f"start_line {start_line} > end_line {end_line}")
    task = Task.coerce(task)
    texts, labels, lines = [], [], []
    skipped = 0
    for number, rec in iter_records(source, start_line, end_line, on_error):
        if isinstance(rec, ParseError):
            skipped += 1
            continue
        texts.append(rec.text)
        labels.append(map_label(rec.stars, task))
        lines.append(number)
    return LabeledCorpus(tuple(texts), tuple(labels), task, tuple(lines), skipped)


def count_lines(path) -> int:
    """Number of physical lines in a file (a final unterminated line counts)."""
    n = 0
    last = b"\n"
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            n += chunk.count(b"\n")
            last = chunk[-1:]
    return n + (last != b"\n")


def _exact(fraction) -> Fraction:
    # 0.7 as a binary float is slightly below 7/10; go through its decimal repr
    if isinstance(fraction, Fraction):
        return fraction
    if isinstance(fraction, float):
        return Fraction(repr(fraction))
    return Fraction(fraction)


def split_contiguous(n_records: int, train_fraction) -> tuple[range, range]:
    """Split ``range(n_records)`` into a leading train block and trailing test block.

    The boundary is ``floor(train_fraction * n_records)`` computed exactly.
    """
    frac = _exact(train_fraction)
    if not 0 < frac < 1:
        raise RangeError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    if n_records < 2:
        raise RangeError(f"need at least 2 records to split, got {n_records}")
    cut = math.floor(frac * n_records)
    if cut == 0 or cut == n_records:
        raise RangeError(
            f"train_fraction {train_fraction} leaves an empty side for n={n_records}"
        )
    return range(0, cut), range(cut, n_records)


def prefix_size(n: int, data_fraction) -> int:
    """``ceil(data_fraction * n)``, the number of leading lines a run uses."""
    frac = _exact(data_fraction)
    if not 0 < frac <= 1:
        raise RangeError(f"data_fraction must lie in (0, 1], got {data_fraction}")
    return math.ceil(frac * n)


def read_text_lines(source) -> Iterator[str]:
    """Bare-text input for prediction: one document per line."""
    if isinstance(source, io.TextIOBase) or not isinstance(source, (str, os.PathLike)):
        for line in source:
            if isinstance(line, bytes):
                line = line.decode("utf-8", errors="replace")
            yield line.rstrip("\r\n")
        return
    with open(source, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            yield line.rstrip("\r\n")
