"""Weighted graph and community label representations."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidGraph
from .validation import check_adjacency, check_labels


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected weighted graph stored as a dense symmetric matrix.

    Sorted neighbor lists are kept alongside the matrix in CSR form
    (``indptr``, ``indices``) so motif enumeration can intersect them.
    The object is immutable after construction.

    Parameters
    ----------
    weights : array-like of shape (n, n)
        Symmetric, non-negative, zero-diagonal weight matrix.
    node_ids : array-like of shape (n,), optional
        External identifiers of the nodes, defaults to ``0..n-1``.
    """

    weights: np.ndarray
    node_ids: np.ndarray = None
    indptr: np.ndarray = field(init=False, repr=False)
    indices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        W = check_adjacency(self.weights).copy()
        W.flags.writeable = False
        n = W.shape[0]
        ids = np.arange(n) if self.node_ids is None else np.asarray(self.node_ids, dtype=np.int64).copy()
        if ids.shape != (n,):
            raise InvalidGraph(f"node_ids has shape {ids.shape}, expected ({n},)")
        if np.unique(ids).size != n:
            raise InvalidGraph("node_ids must be unique")
        ids.flags.writeable = False
        rows, cols = np.nonzero(W)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        indices = cols.astype(np.int64)
        indptr.flags.writeable = False
        indices.flags.writeable = False
        object.__setattr__(self, "weights", W)
        object.__setattr__(self, "node_ids", ids)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)

    @classmethod
    def from_edges(cls, n, u, v, w, node_ids=None):
        """Build a graph on ``n`` nodes from parallel arrays of edges."""
        W = np.zeros((n, n))
        W[u, v] = w
        W[v, u] = w
        return cls(W, node_ids=node_ids)

    @property
    def n(self):
        return self.weights.shape[0]

    @property
    def n_edges(self):
        return self.indices.size // 2

    def neighbors(self, i):
        """Sorted array of the neighbors of node ``i``."""
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degrees(self):
        return np.diff(self.indptr)

    def strengths(self):
        return self.weights.sum(axis=1)

    def edges(self):
        """Return ``(u, v, w)`` arrays for every edge with ``u < v``."""
        u, v = np.nonzero(np.triu(self.weights, 1))
        return u, v, self.weights[u, v]

    def adjacency(self):
        """Binary adjacency pattern as a float matrix."""
        return (self.weights > 0).astype(float)


def labels_to_membership(labels, K=None):
    """Membership matrix with a single 1 per row.

    Parameters
    ----------
    labels : array-like of int in ``0..K-1``
    K : int, optional
        Number of communities; defaults to ``max(labels) + 1``.

    Returns
    -------
    ndarray of shape (n, K), dtype int
    """
    labels = check_labels(labels)
    if K is None:
        K = int(labels.max()) + 1 if labels.size else 0
    if labels.size and (labels.min() < 0 or labels.max() >= K):
        raise ValueError(f"labels must lie in [0, {K - 1}]")
    theta = np.zeros((labels.size, K), dtype=np.int64)
    theta[np.arange(labels.size), labels] = 1
    return theta


def community_sizes(labels, K=None):
    labels = check_labels(labels)
    if K is None:
        K = int(labels.max()) + 1
    return np.bincount(labels, minlength=K)


def relabel_consecutive(labels):
    """Map arbitrary integer labels onto ``0..k-1`` in order of first value."""
    _, inverse = np.unique(check_labels(labels), return_inverse=True)
    return inverse.astype(np.int64)
