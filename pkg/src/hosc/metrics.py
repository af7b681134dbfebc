"""Clustering quality metrics and model diagnostics."""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import EmptyCluster, KMismatch, LengthMismatch, ShapeMismatch, ZeroWeight
from .graph import labels_to_membership, relabel_consecutive
from .validation import as_weight_matrix, check_labels, check_symmetric_matrix

ENUMERATION_MAX_K = 8


def _pair(a, b):
    a = check_labels(a, name="labels_hat")
    b = check_labels(b, name="labels_true")
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch(f"label lengths differ: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def contingency(a, b):
    """Counts ``C[x, y] = |{i : a_i = x, b_i = y}|`` over the observed labels."""
    a, b = _pair(a, b)
    ai, bi = relabel_consecutive(a), relabel_consecutive(b)
    C = np.zeros((ai.max() + 1 if ai.size else 0, bi.max() + 1 if bi.size else 0), dtype=np.int64)
    np.add.at(C, (ai, bi), 1)
    return C


# --------------------------------------------------------------------------
# misclustering rate

def _miscluster_costs(labels_hat, labels_true, K):
    a, b = _pair(labels_hat, labels_true)
    truth = relabel_consecutive(b)
    if K is None:
        K = int(truth.max()) + 1
    if int(truth.max()) + 1 != K:
        raise KMismatch(f"truth has {int(truth.max()) + 1} communities, expected K={K}")
    est = relabel_consecutive(a)
    if int(est.max()) + 1 > K:
        raise KMismatch(f"estimate has {int(est.max()) + 1} clusters, more than K={K}")
    overlap = np.zeros((K, K), dtype=np.int64)  # rows: estimated cluster, cols: true community
    np.add.at(overlap, (est, truth), 1)
    sizes = overlap.sum(axis=0)
    # cost[x, k]: members of G_k not labelled x, scaled to a common denominator
    mis = sizes[None, :] - overlap
    denom = math.lcm(*sizes.tolist())
    if denom < 2**50:
        cost = mis * (denom // sizes)[None, :]
    else:
        denom = None
        cost = mis / sizes[None, :]
    return cost, denom, K


def _finish(total, denom):
    return float(total) / denom if denom is not None else float(total)


def _best_enumerate(cost, K):
    cols = np.arange(K)
    return min(cost[list(perm), cols].sum() for perm in itertools.permutations(range(K)))


def _best_assignment(cost):
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].sum()


def miscluster_rate_enumerate(labels_hat, labels_true, K=None):
    """Misclustering rate by enumerating all ``K!`` label permutations."""
    cost, denom, K = _miscluster_costs(labels_hat, labels_true, K)
    return _finish(_best_enumerate(cost, K), denom)


def miscluster_rate_hungarian(labels_hat, labels_true, K=None):
    """Misclustering rate via an optimal assignment of clusters to communities."""
    cost, denom, K = _miscluster_costs(labels_hat, labels_true, K)
    return _finish(_best_assignment(cost), denom)


def miscluster_rate(labels_hat, labels_true, K=None):
    """Sum over true communities of the fraction of misclustered members.

    Minimised over all matchings of estimated clusters to communities. Lies in
    ``[0, K]`` and is 0 exactly when the two labelings agree up to renaming.
    The estimate may use fewer than ``K`` clusters.

    Parameters
    ----------
    labels_hat, labels_true : array-like of int, shape (n,)
    K : int, optional
        Number of communities, defaults to the number of distinct true labels.
    """
    cost, denom, K = _miscluster_costs(labels_hat, labels_true, K)
    best = _best_enumerate(cost, K) if K <= ENUMERATION_MAX_K else _best_assignment(cost)
    return _finish(best, denom)


# --------------------------------------------------------------------------
# agreement indices

def _comb2(x):
    x = np.asarray(x, dtype=float)
    return (x * (x - 1) / 2).sum()


def adjusted_rand_index(a, b):
    """Pair-counting Rand index adjusted for chance."""
    C = contingency(a, b)
    n = C.sum()
    sum_ij = _comb2(C)
    sum_a = _comb2(C.sum(axis=1))
    sum_b = _comb2(C.sum(axis=0))
    total = n * (n - 1) / 2
    expected = sum_a * sum_b / total if total else 0.0
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        # both partitions trivial in the same way (all singletons or one cluster)
        return 1.0
    return float((sum_ij - expected) / (max_index - expected))


def _entropy(counts):
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def normalized_mutual_information(a, b):
    """``I(a; b) / sqrt(H(a) H(b))`` with natural logarithms.

    If either labeling has zero entropy the value is 1 when both are a single
    cluster and 0 otherwise.
    """
    C = contingency(a, b)
    ha, hb = _entropy(C.sum(axis=1)), _entropy(C.sum(axis=0))
    if ha == 0 or hb == 0:
        return 1.0 if C.shape == (1, 1) else 0.0
    n = C.sum()
    nz = C > 0
    outer = np.outer(C.sum(axis=1), C.sum(axis=0))
    mi = float((C[nz] / n * np.log(C[nz] * n / outer[nz])).sum())
    return float(min(1.0, max(0.0, mi / math.sqrt(ha * hb))))


def modularity(m, labels):
    """Weighted modularity of a partition of a symmetric weight matrix.

    ``m`` may be a motif matrix, a graph or a plain array.
    """
    A = as_weight_matrix(m)
    labels = check_labels(labels, n=A.shape[0])
    two_m = A.sum()
    if not two_m > 0:
        raise ZeroWeight("total weight is zero; modularity undefined")
    d = A.sum(axis=1)
    same = labels[:, None] == labels[None, :]
    q = float(((A - np.outer(d, d) / two_m) * same).sum() / two_m)
    assert -1.0 - 1e-12 <= q <= 1.0 + 1e-12
    return q


# --------------------------------------------------------------------------
# diagnostics

def spectral_deviation(sample, population):
    """Spectral norm of ``sample - population`` (both symmetric)."""
    S, P = as_weight_matrix(sample), as_weight_matrix(population)
    if S.shape != P.shape:
        raise ShapeMismatch(f"shapes differ: {S.shape} vs {P.shape}")
    D = check_symmetric_matrix(S - P)
    return float(np.max(np.abs(np.linalg.eigvalsh(D)))) if D.size else 0.0


@dataclass(frozen=True)
class BoundReport:
    """Order-of-magnitude quantities from the theory, all constants set to 1.

    These are asymptotic rates, not pass/fail guarantees.
    """

    tau_max: float
    D: float
    motif_bound: float
    edge_bound: float
    log_ratio: float
    spectral_dev: float = float("nan")
    eigengap_analytic: float = float("nan")

    @property
    def motif_favored(self):
        """True when the motif rate is strictly below the edge rate."""
        return self.log_ratio > 1


def theoretical_bounds(n, K, p, alpha, spectral_dev=float("nan"), eigengap_analytic=float("nan")):
    """Evaluate the rate expressions for given ``(n, K, p, alpha)``.

    ``D = tau_max**2 * n * alpha * p`` with ``tau_max = n p**2``; the motif rate is
    ``K**3 / (n alpha p)`` and the edge rate is the larger of that and
    ``K**3 log n / (n alpha p)**2``.
    """
    tau_max = n * p**2
    D = tau_max**2 * n * alpha * p
    motif_bound = K**3 / (n * alpha * p)
    log_ratio = math.log(n) / (n * alpha * p)
    # edge rate = motif rate * max(1, log_ratio); keeps the comparison exact
    edge_bound = motif_bound * max(1.0, log_ratio)
    return BoundReport(tau_max, D, motif_bound, edge_bound, log_ratio, spectral_dev, eigengap_analytic)


def favorable_regime(n, p, alpha, c=1.0, c_prime=1.0):
    """Check ``alpha <= c log(n)/(n p)`` and ``p >= c' sqrt(log(n)/n)``."""
    logn = math.log(n)
    return alpha <= c * logn / (n * p) and p >= c_prime * math.sqrt(logn / n)


def estimate_connectivity(m, labels_hat, K=None):
    """Plug-in block means of a motif (or any) matrix under estimated labels.

    ``B_hat[q, l]`` is the sum of entries between clusters ``q`` and ``l``
    divided by ``n_q * n_l``; diagonal blocks include the zero diagonal.
    """
    A = as_weight_matrix(m)
    labels = check_labels(labels_hat, n=A.shape[0])
    if K is None:
        K = int(labels.max()) + 1
    theta = labels_to_membership(labels, K).astype(float)
    sizes = theta.sum(axis=0)
    if np.any(sizes == 0):
        raise EmptyCluster(f"clusters {np.flatnonzero(sizes == 0).tolist()} are empty")
    return theta.T @ A @ theta / np.outer(sizes, sizes)


# --------------------------------------------------------------------------

@dataclass
class ClusteringReport:
    method: str
    motif_kind: object
    labels_hat: np.ndarray
    miscluster_rate: float
    ari: float
    nmi: float
    modularity: float
    runtime_ms: float

    def to_dict(self):
        return {
            "method": self.method,
            "motif": None if self.motif_kind is None else str(getattr(self.motif_kind, "value", self.motif_kind)),
            "miscluster_rate": self.miscluster_rate,
            "ari": self.ari,
            "nmi": self.nmi,
            "modularity": self.modularity,
            "runtime_ms": self.runtime_ms,
        }


def clustering_report(labels_hat, labels_true, modularity_matrix=None, method="motif", motif_kind=None, runtime_ms=float("nan")):
    q = modularity(modularity_matrix, labels_hat) if modularity_matrix is not None else float("nan")
    return ClusteringReport(
        method=method,
        motif_kind=motif_kind,
        labels_hat=check_labels(labels_hat),
        miscluster_rate=miscluster_rate(labels_hat, labels_true),
        ari=adjusted_rand_index(labels_hat, labels_true),
        nmi=normalized_mutual_information(labels_hat, labels_true),
        modularity=q,
        runtime_ms=runtime_ms,
    )
