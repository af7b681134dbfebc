"""Spectral clustering: top-K eigenvectors followed by Lloyd's k-means.

Applied to the weighted adjacency this is edge-based spectral clustering;
applied to a motif matrix it is the higher-order variant.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegeneratePoints, KOutOfRange
from .validation import check_n_clusters, check_symmetric_matrix

EIGEN_ORDERS = ("algebraic", "magnitude")


@dataclass(frozen=True, eq=False)
class EigenPairs:
    values: np.ndarray
    vectors: np.ndarray


def _fix_signs(V):
    # largest-magnitude entry of each column made positive; argmax takes the lowest index on ties
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.where(V[idx, np.arange(V.shape[1])] < 0, -1.0, 1.0)
    return V * signs


def top_k_eigen(A, K, which="algebraic"):
    """Leading ``K`` eigenpairs of a symmetric matrix.

    Parameters
    ----------
    A : array-like of shape (n, n)
        Symmetric matrix (tolerance 1e-10 relative to its largest entry).
    K : int
    which : {"algebraic", "magnitude"}
        ``"algebraic"`` keeps the K largest eigenvalues, ``"magnitude"`` the K
        largest in absolute value. Values are returned in that order,
        descending.

    Returns
    -------
    EigenPairs
        Columns of ``vectors`` are orthonormal; each column's largest-magnitude
        entry is positive.
    """
    if which not in EIGEN_ORDERS:
        raise ValueError(f"which must be one of {EIGEN_ORDERS}, got {which!r}")
    A = check_symmetric_matrix(A)
    K = check_n_clusters(K, A.shape[0])
    vals, vecs = np.linalg.eigh((A + A.T) / 2)
    vals, vecs = vals[::-1], vecs[:, ::-1]
    if which == "magnitude":
        order = np.argsort(-np.abs(vals), kind="stable")
        vals, vecs = vals[order], vecs[:, order]
    return EigenPairs(vals[:K].copy(), _fix_signs(vecs[:, :K]))


# --------------------------------------------------------------------------
# k-means

@dataclass(frozen=True, eq=False)
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    objective: float
    restarts_used: int
    n_iter: int
    history: tuple = field(repr=False, default=())


def _sq_dists(X, C):
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def _objective(X, labels, K):
    centers = _centers(X, labels, K)
    return centers, float(((X - centers[labels]) ** 2).sum())


def _centers(X, labels, K):
    counts = np.bincount(labels, minlength=K).astype(float)
    sums = np.zeros((K, X.shape[1]))
    np.add.at(sums, labels, X)
    return sums / counts[:, None]


def _kmeanspp(X, K, rng):
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = _sq_dists(X, X[chosen]).min(axis=1)
    for _ in range(1, K):
        total = d2.sum()
        nxt = int(rng.choice(n, p=d2 / total))
        chosen.append(nxt)
        d2 = np.minimum(d2, _sq_dists(X, X[[nxt]])[:, 0])
    return X[chosen].copy()


def _assign(X, centers):
    d2 = _sq_dists(X, centers)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(X.shape[0]), labels]


def _repair_empty(X, labels, dist, K):
    """Move the point farthest from its center into each empty cluster."""
    labels = labels.copy()
    dist = dist.copy()
    for c in range(K):
        counts = np.bincount(labels, minlength=K)
        if counts[c]:
            continue
        movable = counts[labels] > 1
        far = int(np.argmax(np.where(movable, dist, -np.inf)))
        labels[far] = c
        dist[far] = 0.0
    return labels


def _lloyd_run(X, K, rng, max_iter):
    centers = _kmeanspp(X, K, rng)
    labels, dist = _assign(X, centers)
    labels = _repair_empty(X, labels, dist, K)
    centers, obj = _objective(X, labels, K)
    history = [obj]
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        new, dist = _assign(X, centers)
        new = _repair_empty(X, new, dist, K)
        if np.array_equal(new, labels):
            break
        labels = new
        centers, obj = _objective(X, labels, K)
        history.append(obj)
    return labels, centers, obj, n_iter, tuple(history)


def lloyd_kmeans(points, K, restarts=20, seed=0, max_iter=300):
    """Best of ``restarts`` k-means++ seeded Lloyd runs.

    Each run iterates until the assignment stops changing or ``max_iter``
    iterations pass. Restart ``r`` draws from a generator keyed by
    ``(seed, r)``, so the result depends only on the arguments.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim != 2:
        raise ValueError("points must be a 2-D array")
    n = X.shape[0]
    if not 1 <= K <= n:
        raise KOutOfRange(f"K={K} outside [1, {n}]")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if np.unique(X, axis=0).shape[0] < K:
        raise DegeneratePoints(f"fewer than K={K} distinct points")
    best = None
    for r in range(restarts):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), r])))
        run = _lloyd_run(X, K, rng, max_iter)
        if best is None or run[2] < best[2]:
            best = run
    labels, centers, obj, n_iter, history = best
    return KMeansResult(labels.astype(np.int64), centers, obj, restarts, n_iter, history)


# --------------------------------------------------------------------------

def spectral_embedding(A, K, which="algebraic"):
    A = check_symmetric_matrix(A)
    if not np.any(A):
        raise DegeneratePoints("input matrix is identically zero")
    return top_k_eigen(A, K, which=which)


def spectral_cluster(A, K, restarts=20, seed=0, which="algebraic"):
    """Cluster the nodes of a symmetric affinity matrix into ``K`` groups.

    Returns the integer labels ``0..K-1`` found by k-means on the rows of the
    top-``K`` eigenvector matrix.
    """
    pairs = spectral_embedding(A, K, which=which)
    return lloyd_kmeans(pairs.vectors, K, restarts=restarts, seed=seed).labels
