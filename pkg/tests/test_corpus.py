import io
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from reviewrate.corpus import (NEGATIVE, POSITIVE, Task, count_lines, load_data, map_label,
                               parse_review_line, prefix_size, split_contiguous)
from reviewrate.exceptions import ParseError, RangeError

FIGURE2_LIKE = {
    "votes": {"funny": 0, "useful": 2, "cool": 1},
    "user_id": "Xqd0DzHaiyRqVH3WRG7hzg",
    "review_id": "15SdjuK7DmYqUAj6rjGowg",
    "stars": 5,
    "date": "2007-05-17",
    "text": "Gr8 for a fast lunch. Friendly staff and the best sandwiches around.",
    "type": "review",
    "business_id": "vcNAWiLM4dR7D2nwwJ7nCA",
}


def _lines(objs):
    return "".join((o if isinstance(o, str) else json.dumps(o)) + "\n" for o in objs)


def _stream(objs):
    return io.BytesIO(_lines(objs).encode("utf-8"))


class TestParseReviewLine:
    def test_yelp_object(self):
        rec = parse_review_line(json.dumps(FIGURE2_LIKE), 1)
        assert rec.stars == 5
        assert rec.text == FIGURE2_LIKE["text"]
        assert rec.source_line == 1

    def test_minimal_object_with_empty_text(self):
        rec = parse_review_line('{"stars": 3, "text": ""}', 4)
        assert (rec.stars, rec.text, rec.source_line) == (3, "", 4)

    @pytest.mark.parametrize("line, kind", [
        ('{"stars": 0, "text": "bad"}', "BadStars"),
        ('{"stars": 6, "text": "bad"}', "BadStars"),
        ('{"stars": 4.5, "text": "meh"}', "BadStars"),
        ('{"stars": "5", "text": "meh"}', "BadStars"),
        ('{"stars": true, "text": "meh"}', "BadStars"),
        ('{"text": "no rating"}', "MissingField"),
        ('{"stars": 2}', "MissingField"),
        ('{"stars": 2, "text": null}', "MissingField"),
        ('{"stars": 2, "text": "unterminated', "MalformedJson"),
        ("[1, 2, 3]", "MalformedJson"),
        ("", "MalformedJson"),
    ])
    def test_errors(self, line, kind):
        with pytest.raises(ParseError) as info:
            parse_review_line(line, 7)
        assert info.value.kind == kind
        assert info.value.line_number == 7

    def test_integral_float_stars_accepted(self):
        assert parse_review_line('{"stars": 5.0, "text": "x"}', 1).stars == 5

    @given(extra=st.dictionaries(
        st.text(min_size=1).filter(lambda k: k not in ("text", "stars")),
        st.one_of(st.none(), st.integers(), st.text(), st.lists(st.integers())),
        max_size=5,
    ))
    def test_other_fields_never_matter(self, extra):
        base = {"stars": 2, "text": "fine"}
        assert parse_review_line(json.dumps({**extra, **base}), 1) == \
            parse_review_line(json.dumps(base), 1)


class TestMapLabel:
    @pytest.mark.parametrize("stars, expected", [
        (1, NEGATIVE), (2, NEGATIVE), (3, POSITIVE), (4, POSITIVE), (5, POSITIVE),
    ])
    def test_polarity_threshold(self, stars, expected):
        assert map_label(stars, Task.POSNEG) == expected

    def test_stars_passthrough(self):
        assert map_label(4, "stars") == 4

    def test_polarity_monotone(self):
        positive = [map_label(s, "posneg") == POSITIVE for s in range(1, 6)]
        assert positive == sorted(positive)


class TestLoadData:
    def _ten(self):
        return [{"stars": (i % 5) + 1, "text": f"review {i}"} for i in range(10)]

    def test_disjoint_ranges(self):
        src = _lines(self._ten()).encode()
        train = load_data(io.BytesIO(src), 1, 7, "posneg")
        test = load_data(io.BytesIO(src), 8, 10, "posneg")
        assert len(train) == 7 and len(test) == 3
        assert set(train.source_lines).isdisjoint(test.source_lines)

    def test_single_line_range(self):
        corpus = load_data(_stream(self._ten()), 5, 5, "stars")
        assert corpus.texts == ("review 4",)
        assert corpus.labels == (5,)

    def test_skip_malformed(self):
        objs = [{"stars": 1, "text": "a"}, "{not json", {"stars": 4, "text": "b"},
                {"stars": 5, "text": "c"}]
        corpus = load_data(_stream(objs), 1, 4, "posneg", on_error="skip")
        assert len(corpus) == 3
        assert corpus.skipped_count == 1
        assert corpus.source_lines == (1, 3, 4)

    def test_abort_propagates_first_error(self):
        objs = [{"stars": 1, "text": "a"}, '{"stars": 9, "text": "x"}', "{bad"]
        with pytest.raises(ParseError) as info:
            load_data(_stream(objs), 1, 3, "posneg", on_error="abort")
        assert info.value.kind == "BadStars" and info.value.line_number == 2

    def test_range_errors(self):
        with pytest.raises(RangeError):
            load_data(_stream(self._ten()), 5, 4)
        with pytest.raises(RangeError):
            load_data(_stream(self._ten()), 0, 4)

    def test_crlf_and_path_source(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_bytes(b'{"stars": 2, "text": "x"}\r\n{"stars": 3, "text": "y"}\r\n')
        corpus = load_data(path, 1, 100, "posneg")
        assert corpus.labels == (NEGATIVE, POSITIVE)
        assert count_lines(path) == 2

    def test_invalid_utf8_is_malformed(self):
        src = io.BytesIO(b'{"stars": 2, "text": "\xff"}\n{"stars": 3, "text": "ok"}\n')
        corpus = load_data(src, 1, 2, "stars", on_error="skip")
        assert corpus.labels == (3,) and corpus.skipped_count == 1

    def test_text_stream(self):
        corpus = load_data(io.StringIO(_lines(self._ten())), 2, 3, "stars")
        assert corpus.labels == (2, 3)

    @given(st.lists(st.integers(1, 9), min_size=1, max_size=6), st.booleans())
    def test_partition_union_equals_whole(self, sizes, with_garbage):
        objs = []
        for i in range(sum(sizes)):
            objs.append("{oops" if with_garbage and i % 4 == 3 else
                        {"stars": (i % 5) + 1, "text": f"t{i}"})
        src = _lines(objs).encode()
        whole = load_data(io.BytesIO(src), 1, sum(sizes), "stars", "skip")
        pieces, start = [], 1
        for size in sizes:
            part = load_data(io.BytesIO(src), start, start + size - 1, "stars", "skip")
            pieces.extend(zip(part.source_lines, part.texts, part.labels))
            start += size
        assert pieces == list(zip(whole.source_lines, whole.texts, whole.labels))


def test_count_lines_unterminated(tmp_path):
    path = tmp_path / "x"
    path.write_bytes(b"a\nb\nc")
    assert count_lines(path) == 3
    path.write_bytes(b"")
    assert count_lines(path) == 0


class TestSplitContiguous:
    @pytest.mark.parametrize("n, frac, cut", [
        (10, 0.7, 7),
        (3, 0.7, 2),
        (1_569_264, 0.7, 1_098_484),
    ])
    def test_examples(self, n, frac, cut):
        train, test = split_contiguous(n, frac)
        assert train == range(0, cut) and test == range(cut, n)

    @pytest.mark.parametrize("n, frac", [(1, 0.5), (2, 0.4), (10, 0.05), (10, 1.0), (10, 0.0)])
    def test_empty_side_rejected(self, n, frac):
        with pytest.raises(RangeError):
            split_contiguous(n, frac)

    @given(st.integers(2, 10**7), st.integers(1, 99))
    def test_disjoint_exhaustive(self, n, pct):
        frac = pct / 100
        cut = n * pct // 100
        if cut in (0, n):
            with pytest.raises(RangeError):
                split_contiguous(n, frac)
            return
        train, test = split_contiguous(n, frac)
        assert train.stop == test.start == cut
        assert len(train) + len(test) == n and train.start == 0 and test.stop == n


def test_prefix_size_exact():
    assert prefix_size(10, 0.3) == 3
    assert prefix_size(10, 0.31) == 4
    assert prefix_size(7, 1.0) == 7
    assert prefix_size(1_569_264, Fraction(1, 10)) == math.ceil(156926.4)
    with pytest.raises(RangeError):
        prefix_size(10, 0)
