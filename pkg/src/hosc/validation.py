"""Input validation helpers shared by the estimators and functional API."""

import numbers

import numpy as np

from .exceptions import InvalidGraph, KOutOfRange, LengthMismatch, NotSymmetric


def as_weight_matrix(X):
    """Return the dense weight matrix behind `X`.

    Accepts a :class:`~hosc.graph.WeightedGraph`, a
    :class:`~hosc.motif.MotifMatrix`, a scipy sparse matrix or any array-like.
    """
    values = getattr(X, "weights", None)
    if values is None:
        values = getattr(X, "values", None)
    if values is None:
        values = X.toarray() if hasattr(X, "toarray") else X
    return np.asarray(values, dtype=float)


def check_symmetric_matrix(A, tol=1e-10):
    """Validate a real symmetric square matrix and return it as float64."""
    A = as_weight_matrix(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NotSymmetric("matrix contains non-finite entries")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.size and np.max(np.abs(A - A.T)) > tol * scale:
        raise NotSymmetric("matrix is not symmetric")
    return A


def check_adjacency(W):
    """Validate a weighted adjacency matrix.

    The matrix must be square, exactly symmetric, non-negative, finite and
    have a zero diagonal.
    """
    W = as_weight_matrix(W)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise InvalidGraph(f"adjacency must be square, got shape {W.shape}")
    if W.shape[0] == 0:
        raise InvalidGraph("adjacency has no nodes")
    if not np.all(np.isfinite(W)):
        raise InvalidGraph("adjacency contains non-finite weights")
    if np.any(W < 0):
        raise InvalidGraph("adjacency contains negative weights")
    if np.any(np.diag(W) != 0):
        raise InvalidGraph("adjacency has non-zero diagonal (self-loops)")
    if not np.array_equal(W, W.T):
        raise InvalidGraph("adjacency is not symmetric")
    return W


def check_labels(labels, n=None, name="labels"):
    """Return `labels` as a 1-D int64 array, optionally checking its length."""
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise ValueError(f"{name} must be integers")
        arr = as_int
    arr = arr.astype(np.int64, copy=False)
    if n is not None and arr.shape[0] != n:
        raise LengthMismatch(f"{name} has length {arr.shape[0]}, expected {n}")
    return arr


def check_n_clusters(K, n):
    if not isinstance(K, numbers.Integral) or isinstance(K, bool):
        raise KOutOfRange(f"K must be an integer, got {K!r}")
    if not 1 <= K <= n:
        raise KOutOfRange(f"K={K} outside [1, {n}]")
    return int(K)
