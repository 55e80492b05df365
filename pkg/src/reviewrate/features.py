"""Bag-of-words counts and tf-idf weighting over a frozen vocabulary.

Count and weight matrices are ``scipy.sparse.csr_matrix`` objects with sorted
column indices and no stored zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import textproc
from ._validation import as_csr, as_documents
from .exceptions import EmptyCorpus


@dataclass(frozen=True)
class Vocabulary:
    """Token <-> column id map; ids follow code-point order of the tokens."""

    id_to_token: tuple
    token_to_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "token_to_id", {tok: j for j, tok in enumerate(self.id_to_token)}
        )

    def __len__(self):
        return len(self.id_to_token)

    def __contains__(self, token):
        return token in self.token_to_id


def fit_vocabulary(token_lists: Iterable[Sequence[str]]) -> Vocabulary:
    seen = set()
    for tokens in token_lists:
        seen.update(tokens)
    return Vocabulary(tuple(sorted(seen)))


def count_transform(token_lists: Iterable[Sequence[str]], vocab: Vocabulary) -> sp.csr_matrix:
    """Occurrence counts of each vocabulary token per document.

    Tokens missing from ``vocab`` are dropped.
    """
    lookup = vocab.token_to_id
    indices = []
    indptr = [0]
    for tokens in token_lists:
        indices.extend(lookup[t] for t in tokens if t in lookup)
        indptr.append(len(indices))
    indices = np.asarray(indices, dtype=np.int64)
    data = np.ones(indices.shape[0], dtype=np.int64)
    X = sp.csr_matrix(
        (data, indices, np.asarray(indptr, dtype=np.int64)),
        shape=(len(indptr) - 1, len(vocab)),
    )
    # merges repeated tokens and sorts columns within each row
    X.sum_duplicates()
    return X


def fit_idf(counts) -> np.ndarray:
    """Smoothed inverse document frequency, ``ln((1 + N) / (1 + df)) + 1``."""
    counts = as_csr(counts)
    n_docs = counts.shape[0]
    if n_docs == 0:
        raise EmptyCorpus()
    df = np.bincount(counts.indices, minlength=counts.shape[1])
    return np.log((1.0 + n_docs) / (1.0 + df)) + 1.0


def tfidf_transform(counts, idf: np.ndarray) -> sp.csr_matrix:
    """Length-normalised term frequency times idf, each row scaled to unit L2 norm."""
    idf = np.asarray(idf, dtype=np.float64)
    counts = as_csr(counts, n_features=idf.shape[0])
    n_rows = counts.shape[0]
    row_of = np.repeat(np.arange(n_rows), np.diff(counts.indptr))
    totals = np.bincount(row_of, weights=counts.data, minlength=n_rows)
    weights = counts.data / totals[row_of] * idf[counts.indices]
    norms = np.sqrt(np.bincount(row_of, weights=weights * weights, minlength=n_rows))
    weights = weights / norms[row_of]
    return sp.csr_matrix(
        (weights, counts.indices.copy(), counts.indptr.copy()), shape=counts.shape
    )


class CountVectorizer(TransformerMixin, BaseEstimator):
    """Raw review text to a sparse document-by-token count matrix.

    Parameters
    ----------
    stop_words : "english", None, str path, or iterable of str, default="english"
        Words dropped before counting. ``"english"`` uses the bundled list.

    Attributes
    ----------
    vocabulary_ : Vocabulary
    stoplist_ : textproc.StopList
    """

    def __init__(self, stop_words="english"):
        self.stop_words = stop_words

    def _analyze_all(self, raw_documents):
        stoplist = self.stoplist_
        return [textproc.analyze(doc, stoplist) for doc in as_documents(raw_documents)]

    def fit(self, raw_documents, y=None):
        self.fit_transform(raw_documents)
        return self

    def fit_transform(self, raw_documents, y=None):
        self.stoplist_ = textproc.resolve_stoplist(self.stop_words)
        token_lists = self._analyze_all(raw_documents)
        self.vocabulary_ = fit_vocabulary(token_lists)
        return count_transform(token_lists, self.vocabulary_)

    def transform(self, raw_documents):
        check_is_fitted(self, "vocabulary_")
        return count_transform(self._analyze_all(raw_documents), self.vocabulary_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vocabulary_")
        return np.asarray(self.vocabulary_.id_to_token, dtype=object)


class TfidfTransformer(TransformerMixin, BaseEstimator):
    """Reweight a count matrix by tf-idf and L2-normalise each row.

    Term frequency is the count divided by the document's retained token
    total. Empty rows stay empty.

    Attributes
    ----------
    idf_ : ndarray of shape (n_features,)
    n_docs_fitted_ : int
    """

    def fit(self, X, y=None):
        X = as_csr(X)
        self.idf_ = fit_idf(X)
        self.n_docs_fitted_ = X.shape[0]
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "idf_")
        return tfidf_transform(X, self.idf_)
