"""Input checks shared by the estimators."""

import numpy as np
import scipy.sparse as sp
from sklearn.utils.validation import check_array

from .exceptions import DegenerateInput, DimensionMismatch


def as_csr(X, n_features=None, nonnegative=True):
    """Validate ``X`` and return it as a float64 CSR matrix with sorted indices.

    Dense input is accepted and converted. Explicit zeros are dropped so that
    stored entries are exactly the nonzeros.
    """
    X = check_array(X, accept_sparse="csr", dtype=np.float64, ensure_min_samples=0,
                    ensure_min_features=0)
    if not sp.issparse(X):
        X = sp.csr_matrix(X)
    elif not X.has_sorted_indices or np.any(X.data == 0):
        X = X.copy()
        X.sum_duplicates()
        X.eliminate_zeros()
    if nonnegative and X.nnz and X.data.min() < 0:
        raise ValueError("feature values must be nonnegative")
    if n_features is not None and X.shape[1] != n_features:
        raise DimensionMismatch(
            f"X has {X.shape[1]} features, model was fitted with {n_features}"
        )
    return X


def as_documents(raw_documents):
    """Reject a bare string (a common mistake) and materialise the iterable."""
    if isinstance(raw_documents, (str, bytes)):
        raise ValueError("expected an iterable of documents, got a single string")
    return list(raw_documents)


def encode_labels(y, n_samples):
    """Return ``(classes, y_index)`` with classes sorted ascending."""
    y = np.asarray(list(y) if not isinstance(y, np.ndarray) else y)
    if y.ndim != 1:
        raise ValueError(f"y must be one-dimensional, got shape {y.shape}")
    if y.shape[0] != n_samples:
        raise ValueError(f"X has {n_samples} rows but y has {y.shape[0]} labels")
    if n_samples == 0:
        raise DegenerateInput("EmptyCorpus", "cannot fit on zero documents")
    classes, y_index = np.unique(y, return_inverse=True)
    if classes.shape[0] < 2:
        raise DegenerateInput(
            "SingleClass", f"need at least two classes, got {classes.tolist()}"
        )
    return classes, y_index.astype(np.intp)
