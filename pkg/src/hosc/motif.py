"""Weighted motif adjacency matrices.

For a motif instance (a triangle, a wedge or a 4-clique found in the graph) the
total weight of its edges is added to the entry of every unordered node pair
inside the instance. For triangles this is exactly

    M[i, j] = sum_k 1(W_ij > 0, W_ik > 0, W_jk > 0) * (W_ij + W_ik + W_jk).

Wedges (two distinct edges sharing a node) also credit the pair of leaves,
which need not be adjacent.

The fast builders walk sorted neighbor lists; the brute-force builders loop
over node tuples. Both visit instances in the same lexicographic order and
add the same floating point terms, so their outputs agree bit for bit.
"""

import enum
import itertools
from dataclasses import dataclass

import numba
import numpy as np

from .exceptions import TooLarge
from .graph import WeightedGraph

BRUTEFORCE_MAX_N = 200

# an outdated system TBB only produces warnings; prefer OpenMP
numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]


class MotifKind(str, enum.Enum):
    TRIANGLE = "triangle"
    WEDGE = "wedge"
    CLIQUE4 = "clique4"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown motif {value!r}; expected one of {[m.value for m in cls]}") from None


@dataclass(frozen=True, eq=False)
class MotifMatrix:
    kind: MotifKind
    values: np.ndarray

    @property
    def source_n(self):
        return self.values.shape[0]


def _as_graph(g):
    return g if isinstance(g, WeightedGraph) else WeightedGraph(g)


# --------------------------------------------------------------------------
# fast kernels; accumulate into the upper triangle only

@numba.njit(cache=True, parallel=True)
def _triangle_kernel(W, indptr, indices):
    n = W.shape[0]
    M = np.zeros((n, n))
    # row i owns M[i, j > i]: writes are disjoint across threads
    for i in numba.prange(n):
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if j <= i:
                continue
            wij = W[i, j]
            acc = 0.0
            a, a_end = indptr[i], indptr[i + 1]
            b, b_end = indptr[j], indptr[j + 1]
            while a < a_end and b < b_end:
                ka, kb = indices[a], indices[b]
                if ka < kb:
                    a += 1
                elif kb < ka:
                    b += 1
                else:
                    acc += wij + W[i, ka] + W[j, ka]
                    a += 1
                    b += 1
            M[i, j] = acc
    return M


@numba.njit(cache=True)
def _add_pair(M, u, v, w):
    if u < v:
        M[u, v] += w
    else:
        M[v, u] += w


@numba.njit(cache=True)
def _wedge_kernel(W, indptr, indices):
    n = W.shape[0]
    M = np.zeros((n, n))
    for c in range(n):
        for p in range(indptr[c], indptr[c + 1]):
            a = indices[p]
            for q in range(p + 1, indptr[c + 1]):
                b = indices[q]
                w = W[c, a] + W[c, b]
                _add_pair(M, a, b, w)
                _add_pair(M, a, c, w)
                _add_pair(M, b, c, w)
    return M


@numba.njit(cache=True)
def _clique4_kernel(W, indptr, indices):
    n = W.shape[0]
    M = np.zeros((n, n))
    common = np.empty(n, dtype=np.int64)
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if j <= i:
                continue
            # common neighbors of i and j above j, ascending
            m = 0
            a, a_end = indptr[i], indptr[i + 1]
            b, b_end = indptr[j], indptr[j + 1]
            while a < a_end and b < b_end:
                ka, kb = indices[a], indices[b]
                if ka < kb:
                    a += 1
                elif kb < ka:
                    b += 1
                else:
                    if ka > j:
                        common[m] = ka
                        m += 1
                    a += 1
                    b += 1
            for s in range(m):
                k = common[s]
                for t in range(s + 1, m):
                    l = common[t]
                    if W[k, l] > 0:
                        w = W[i, j] + W[i, k] + W[i, l] + W[j, k] + W[j, l] + W[k, l]
                        M[i, j] += w
                        M[i, k] += w
                        M[i, l] += w
                        M[j, k] += w
                        M[j, l] += w
                        M[k, l] += w
    return M


_KERNELS = {
    MotifKind.TRIANGLE: _triangle_kernel,
    MotifKind.WEDGE: _wedge_kernel,
    MotifKind.CLIQUE4: _clique4_kernel,
}


def _symmetrize_upper(M):
    upper = np.triu(M, 1)
    return upper + upper.T


def build_motif_matrix(g, kind="triangle"):
    """Weighted motif adjacency matrix of ``g``.

    Parameters
    ----------
    g : WeightedGraph or array-like of shape (n, n)
    kind : {"triangle", "wedge", "clique4"} or MotifKind

    Returns
    -------
    MotifMatrix
    """
    kind = MotifKind.parse(kind)
    g = _as_graph(g)
    M = _KERNELS[kind](np.ascontiguousarray(g.weights), g.indptr, g.indices)
    return MotifMatrix(kind, _symmetrize_upper(M))


# --------------------------------------------------------------------------
# reference implementation

def build_motif_matrix_bruteforce(g, kind="triangle"):
    """Literal loop over node tuples; a test oracle for small graphs."""
    kind = MotifKind.parse(kind)
    g = _as_graph(g)
    n = g.n
    if n > BRUTEFORCE_MAX_N:
        raise TooLarge(f"brute-force motif builder is limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    W = g.weights.tolist()
    M = [[0.0] * n for _ in range(n)]

    def add(u, v, w):
        if u > v:
            u, v = v, u
        M[u][v] += w

    if kind is MotifKind.TRIANGLE:
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    if W[i][j] > 0 and W[i][k] > 0 and W[j][k] > 0:
                        M[i][j] += W[i][j] + W[i][k] + W[j][k]
    elif kind is MotifKind.WEDGE:
        for c in range(n):
            for a in range(n):
                for b in range(a + 1, n):
                    if c in (a, b) or not (W[c][a] > 0 and W[c][b] > 0):
                        continue
                    w = W[c][a] + W[c][b]
                    add(a, b, w)
                    add(a, c, w)
                    add(b, c, w)
    else:
        for i, j, k, l in itertools.combinations(range(n), 4):
            pairs = ((i, j), (i, k), (i, l), (j, k), (j, l), (k, l))
            if all(W[u][v] > 0 for u, v in pairs):
                w = W[i][j] + W[i][k] + W[i][l] + W[j][k] + W[j][l] + W[k][l]
                for u, v in pairs:
                    M[u][v] += w
    return MotifMatrix(kind, _symmetrize_upper(np.array(M, dtype=float).reshape(n, n)))
