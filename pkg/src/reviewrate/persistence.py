"""Saving and loading fitted :class:`TextClassifier` objects.

Binary layout (all integers little-endian)::

    magic      8 bytes  b"RRMODEL\\n"
    version    u32
    sections   repeated until EOF:
        tag     4 ASCII bytes
        length  u64
        payload `length` bytes
        crc32   u32 of payload

Sections: ``META`` (UTF-8 JSON), ``STOP`` and ``VOCB`` (UTF-8, one word per
line) and one ``ARRY`` per numeric array (u16 name length, name, u8 ndim,
u64 dims, float64 data). The JSON variant holds the same content in one object.
"""

from __future__ import annotations

import datetime
import json
import struct
import zlib

import numpy as np

from .exceptions import FormatError
from .features import CountVectorizer, TfidfTransformer, Vocabulary
from .models.pipeline import TextClassifier, make_classifier
from .textproc import StopList

MAGIC = b"RRMODEL\n"
FORMAT_VERSION = 1

_ARRAYS = {
    "nb": ("class_count_", "feature_count_", "class_log_prior_", "feature_log_prob_"),
    "svm": ("coef_", "intercept_"),
    "lr": ("coef_", "intercept_"),
}
_SCALARS = {"lr": ("n_iter_", "converged_")}


def _params_for_file(clf):
    params = clf.get_params()
    sw = params["stop_words"]
    if sw is not None and not isinstance(sw, str):
        params["stop_words"] = sorted(clf.vectorizer_.stoplist_.words)
    return params


def _collect(clf: TextClassifier):
    if not hasattr(clf, "classifier_"):
        raise ValueError("cannot save an unfitted TextClassifier")
    model = clf.model
    classes = [c.item() if isinstance(c, np.generic) else c for c in clf.classes_]
    meta = {
        "format_version": FORMAT_VERSION,
        "task": clf.task,
        "model": model,
        "params": _params_for_file(clf),
        "stop_list_id": clf.vectorizer_.stoplist_.list_id,
        "classes": classes,
        "n_features": len(clf.vocabulary_),
        "n_docs_fitted": int(clf.tfidf_.n_docs_fitted_),
        "scalars": {k: _plain(getattr(clf.classifier_, k)) for k in _SCALARS.get(model, ())},
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }
    arrays = {"idf_": clf.tfidf_.idf_}
    arrays.update({k: getattr(clf.classifier_, k) for k in _ARRAYS[model]})
    stop_words = sorted(clf.vectorizer_.stoplist_.words)
    return meta, stop_words, list(clf.vocabulary_.id_to_token), arrays


def _plain(value):
    return value.item() if isinstance(value, np.generic) else value


def _rebuild(meta, stop_words, tokens, arrays) -> TextClassifier:
    try:
        model = meta["model"]
        params = dict(meta["params"])
        if isinstance(params.get("stop_words"), list):
            params["stop_words"] = tuple(params["stop_words"])
        clf = TextClassifier(**params)
        if len(tokens) != meta["n_features"]:
            raise FormatError("CorruptSection",
                              f"vocabulary has {len(tokens)} tokens, expected {meta['n_features']}")

        vect = CountVectorizer(stop_words=clf.stop_words)
        vect.stoplist_ = StopList(frozenset(stop_words), meta["stop_list_id"])
        vect.vocabulary_ = Vocabulary(tuple(tokens))

        tfidf = TfidfTransformer()
        tfidf.idf_ = arrays["idf_"]
        tfidf.n_docs_fitted_ = meta["n_docs_fitted"]
        tfidf.n_features_in_ = len(tokens)

        est = make_classifier(model, **clf._hyper())
        for name in _ARRAYS[model]:
            setattr(est, name, arrays[name])
        for name, value in meta.get("scalars", {}).items():
            setattr(est, name, value)
        est.classes_ = np.asarray(meta["classes"])
        est.n_features_in_ = len(tokens)
    except KeyError as exc:
        raise FormatError("CorruptSection", f"missing entry {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise FormatError("CorruptSection", str(exc)) from None

    if arrays["idf_"].shape != (len(tokens),):
        raise FormatError("CorruptSection", "idf length disagrees with vocabulary")
    for name in _ARRAYS[model]:
        arr = arrays[name]
        if arr.ndim == 2 and arr.shape[1] != len(tokens):
            raise FormatError("CorruptSection", f"{name} width disagrees with vocabulary")
    clf.vectorizer_, clf.tfidf_, clf.classifier_ = vect, tfidf, est
    clf.classes_ = est.classes_
    return clf


def _section(tag: bytes, payload: bytes) -> bytes:
    return tag + struct.pack("<Q", len(payload)) + payload + struct.pack("<I", zlib.crc32(payload))


def _encode_array(name: str, arr) -> bytes:
    arr = np.ascontiguousarray(arr, dtype="<f8")
    raw_name = name.encode("utf-8")
    head = struct.pack("<H", len(raw_name)) + raw_name + struct.pack("<B", arr.ndim)
    head += struct.pack(f"<{arr.ndim}Q", *arr.shape)
    return head + arr.tobytes()


def _decode_array(payload: bytes):
    try:
        (name_len,) = struct.unpack_from("<H", payload, 0)
        pos = 2
        name = payload[pos:pos + name_len].decode("utf-8")
        pos += name_len
        (ndim,) = struct.unpack_from("<B", payload, pos)
        pos += 1
        shape = struct.unpack_from(f"<{ndim}Q", payload, pos)
        pos += 8 * ndim
    except (struct.error, UnicodeDecodeError) as exc:
        raise FormatError("CorruptSection", f"bad array header: {exc}") from None
    count = int(np.prod(shape, dtype=np.int64))
    if len(payload) - pos != 8 * count:
        raise FormatError("CorruptSection", f"array {name!r} payload has wrong length")
    arr = np.frombuffer(payload, dtype="<f8", offset=pos, count=count).astype(np.float64)
    return name, arr.reshape(shape)


def _dump_binary(meta, stop_words, tokens, arrays) -> bytes:
    parts = [MAGIC, struct.pack("<I", FORMAT_VERSION)]
    parts.append(_section(b"META", json.dumps(meta, sort_keys=True).encode("utf-8")))
    parts.append(_section(b"STOP", "\n".join(stop_words).encode("utf-8")))
    parts.append(_section(b"VOCB", "\n".join(tokens).encode("utf-8")))
    for name in sorted(arrays):
        parts.append(_section(b"ARRY", _encode_array(name, arrays[name])))
    return b"".join(parts)


def _lines(payload: bytes):
    text = payload.decode("utf-8")
    return text.split("\n") if text else []


def _load_binary(blob: bytes):
    if len(blob) < 12:
        raise FormatError("CorruptSection", "file too short for a header")
    (version,) = struct.unpack_from("<I", blob, 8)
    if version != FORMAT_VERSION:
        raise FormatError("VersionMismatch",
                          f"file format version {version}, this reader supports {FORMAT_VERSION}")
    pos = 12
    sections = {}
    arrays = {}
    while pos < len(blob):
        if pos + 12 > len(blob):
            raise FormatError("CorruptSection", f"truncated section header at byte {pos}")
        tag = blob[pos:pos + 4]
        (length,) = struct.unpack_from("<Q", blob, pos + 4)
        start, end = pos + 12, pos + 12 + length
        if end + 4 > len(blob):
            raise FormatError("CorruptSection", f"section {tag!r} is truncated")
        payload = blob[start:end]
        (crc,) = struct.unpack_from("<I", blob, end)
        if crc != zlib.crc32(payload):
            raise FormatError("CorruptSection", f"checksum mismatch in section {tag!r}")
        if tag == b"ARRY":
            name, arr = _decode_array(payload)
            arrays[name] = arr
        else:
            sections[tag] = payload
        pos = end + 4
    for tag in (b"META", b"STOP", b"VOCB"):
        if tag not in sections:
            raise FormatError("CorruptSection", f"missing section {tag.decode()}")
    try:
        meta = json.loads(sections[b"META"].decode("utf-8"))
        stop_words = _lines(sections[b"STOP"])
        tokens = _lines(sections[b"VOCB"])
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError("CorruptSection", str(exc)) from None
    return meta, stop_words, tokens, arrays


def _dump_json(meta, stop_words, tokens, arrays) -> bytes:
    doc = {
        "magic": MAGIC.decode("ascii").strip(),
        "format_version": FORMAT_VERSION,
        "meta": meta,
        "stop_words": stop_words,
        "vocabulary": tokens,
        "arrays": {k: {"shape": list(np.shape(v)), "data": np.ravel(v).tolist()}
                   for k, v in sorted(arrays.items())},
    }
    return json.dumps(doc, sort_keys=True).encode("utf-8")


def _load_json(blob: bytes):
    try:
        doc = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError("CorruptSection", f"unreadable JSON model: {exc}") from None
    if not isinstance(doc, dict) or doc.get("magic") != MAGIC.decode("ascii").strip():
        raise FormatError("BadMagic", "JSON document is not a model file")
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError("VersionMismatch",
                          f"file format version {doc.get('format_version')}, "
                          f"this reader supports {FORMAT_VERSION}")
    try:
        arrays = {k: np.asarray(v["data"], dtype=np.float64).reshape(v["shape"])
                  for k, v in doc["arrays"].items()}
        return doc["meta"], doc["stop_words"], doc["vocabulary"], arrays
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("CorruptSection", str(exc)) from None


def save_model(clf: TextClassifier, path, format="binary") -> None:
    """Write a fitted classifier to ``path`` (``format`` is "binary" or "json")."""
    parts = _collect(clf)
    if format == "binary":
        blob = _dump_binary(*parts)
    elif format == "json":
        blob = _dump_json(*parts)
    else:
        raise ValueError(f"format must be 'binary' or 'json', got {format!r}")
    with open(path, "wb") as fh:
        fh.write(blob)


def load_model(path) -> TextClassifier:
    """Read a model written by :func:`save_model`; the format is detected."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob.startswith(MAGIC):
        parts = _load_binary(blob)
    elif blob.lstrip()[:1] == b"{":
        parts = _load_json(blob)
    else:
        raise FormatError("BadMagic", f"{path} is not a model file")
    return _rebuild(*parts)
