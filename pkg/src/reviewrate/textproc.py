"""Text normalisation, tokenisation and stop-word filtering.

A token is a maximal run of two or more word characters, where a word
character is a Unicode letter (``str.isalpha``) or decimal digit
(``str.isdecimal``). Underscore and every other character separate tokens.
"""

from __future__ import annotations

import functools
import re
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

DEFAULT_STOPLIST_ID = "english-318-v1"

# U+0130 is the one code point whose full lowercase mapping is two characters;
# map it to its simple lowercase form so normalisation never changes length.
_SIMPLE_FOLD = {0x0130: "i"}


def normalize(text: str) -> str:
    """Lowercase ``text``; everything else is left to the tokenizer."""
    return text.translate(_SIMPLE_FOLD).lower()


@functools.lru_cache(maxsize=None)
def _token_pattern() -> re.Pattern:
    ranges = []
    start = None
    for cp in range(sys.maxunicode + 2):
        ok = cp <= sys.maxunicode and (chr(cp).isalpha() or chr(cp).isdecimal())
        if ok and start is None:
            start = cp
        elif not ok and start is not None:
            ranges.append((start, cp - 1))
            start = None
    parts = []
    for lo, hi in ranges:
        parts.append(re.escape(chr(lo)) if lo == hi else f"{re.escape(chr(lo))}-{re.escape(chr(hi))}")
    return re.compile("[" + "".join(parts) + "]{2,}")


def tokenize(text: str) -> list[str]:
    """Return the maximal word-character runs of length >= 2, in order."""
    return _token_pattern().findall(text)


@dataclass(frozen=True)
class StopList:
    words: frozenset
    list_id: str

    @property
    def word_count(self) -> int:
        return len(self.words)

    def __contains__(self, word):
        return word in self.words

    @classmethod
    def from_words(cls, words: Iterable[str], list_id: str = "custom") -> "StopList":
        return cls(frozenset(w.lower() for w in words), list_id)


EMPTY_STOPLIST = StopList(frozenset(), "none")


def _parse_stoplist(lines: Iterable[str], default_id: str) -> StopList:
    words = set()
    list_id = default_id
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*list_id:\s*(\S+)", line)
            if m:
                list_id = m.group(1)
            continue
        words.add(normalize(line))
    return StopList(frozenset(words), list_id)


def load_stoplist(path) -> StopList:
    """Read a stop-word file: one word per line, ``#`` starts a comment line.

    A ``# list_id: <id>`` comment names the list; otherwise the file name is used.
    """
    with open(path, encoding="utf-8") as fh:
        return _parse_stoplist(fh, default_id=str(path).rsplit("/", 1)[-1])


@functools.lru_cache(maxsize=None)
def default_stoplist() -> StopList:
    text = resources.files("reviewrate").joinpath("data/english_stopwords.txt").read_text("utf-8")
    return _parse_stoplist(text.splitlines(), DEFAULT_STOPLIST_ID)


def resolve_stoplist(value) -> StopList:
    """Turn a user-facing stop-word setting into a :class:`StopList`.

    ``"english"`` is the bundled list, ``None`` disables filtering, a
    :class:`StopList` passes through, any other string is a file path, and
    other iterables are taken as the words themselves.
    """
    if value is None:
        return EMPTY_STOPLIST
    if isinstance(value, StopList):
        return value
    if isinstance(value, str):
        return default_stoplist() if value == "english" else load_stoplist(value)
    return StopList.from_words(value)


def remove_stopwords(tokens: list[str], stoplist: StopList) -> list[str]:
    words = stoplist.words
    return [t for t in tokens if t not in words]


def analyze(text: str, stoplist: StopList = EMPTY_STOPLIST) -> list[str]:
    """Full preprocessing chain: normalize, tokenize, drop stop words."""
    return remove_stopwords(tokenize(normalize(text)), stoplist)
