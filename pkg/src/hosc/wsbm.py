"""Weighted stochastic block model: parameters, sampler and population oracles.

An edge between nodes ``i < j`` exists with probability ``B[g_i, g_j]``; a
present edge gets a positive weight drawn from the law attached to the
community pair. Randomness comes from a Philox counter-based generator keyed
by a single integer seed, so a graph is fully determined by
``(params, labels, seed)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidParam, LabelMismatch, RankDeficient, Unbalanced, UnsupportedForm
from .graph import WeightedGraph, labels_to_membership
from .validation import check_labels


def make_rng(seed):
    """Philox generator for a non-negative integer seed."""
    if isinstance(seed, np.random.Generator):
        return seed
    if int(seed) < 0:
        raise InvalidParam(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.Philox(int(seed)))


# --------------------------------------------------------------------------
# weight laws

class WeightDistribution:
    """Base class of edge weight laws supported on the positive line."""

    kind = None

    def mean(self):
        raise NotImplementedError

    def sample(self, rng, size):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError

    @staticmethod
    def from_dict(d):
        d = dict(d)
        kind = d.pop("kind", None)
        classes = {c.kind: c for c in (Uniform, ChiSquared, Exponential, Constant)}
        if kind not in classes:
            raise InvalidParam(f"unknown weight kind {kind!r}; expected one of {sorted(classes)}")
        try:
            return classes[kind](**d)
        except TypeError as exc:
            raise InvalidParam(f"bad parameters for {kind!r} weights: {exc}") from None


def _positive(name, value):
    value = float(value)
    if not (np.isfinite(value) and value > 0):
        raise InvalidParam(f"{name} must be a positive real, got {value}")
    return value


@dataclass(frozen=True)
class Uniform(WeightDistribution):
    low: float
    high: float
    kind = "uniform"

    def __post_init__(self):
        _positive("low", self.low)
        _positive("high", self.high)
        if not self.low < self.high:
            raise InvalidParam(f"uniform weights need low < high, got ({self.low}, {self.high})")

    def mean(self):
        return 0.5 * (self.low + self.high)

    def sample(self, rng, size):
        return rng.uniform(self.low, self.high, size)

    def to_dict(self):
        return {"kind": self.kind, "low": self.low, "high": self.high}


@dataclass(frozen=True)
class ChiSquared(WeightDistribution):
    df: float = 1.0
    kind = "chi2"

    def __post_init__(self):
        _positive("df", self.df)

    def mean(self):
        return float(self.df)

    def sample(self, rng, size):
        return rng.chisquare(self.df, size)

    def to_dict(self):
        return {"kind": self.kind, "df": self.df}


@dataclass(frozen=True)
class Exponential(WeightDistribution):
    rate: float = 1.0
    kind = "exponential"

    def __post_init__(self):
        _positive("rate", self.rate)

    def mean(self):
        return 1.0 / self.rate

    def sample(self, rng, size):
        return rng.exponential(1.0 / self.rate, size)

    def to_dict(self):
        return {"kind": self.kind, "rate": self.rate}


@dataclass(frozen=True)
class Constant(WeightDistribution):
    """Degenerate law (zero variance); meant for tests only."""

    value: float = 1.0
    kind = "constant"

    def __post_init__(self):
        _positive("value", self.value)

    def mean(self):
        return float(self.value)

    def sample(self, rng, size):
        return np.full(size, float(self.value))

    def to_dict(self):
        return {"kind": self.kind, "value": self.value}


# --------------------------------------------------------------------------
# parameters

def balanced_sizes(n, K):
    """Sizes ``floor(n/K)`` with the remainder given to the first communities."""
    base, rem = divmod(int(n), int(K))
    return tuple(base + (1 if k < rem else 0) for k in range(K))


def balanced_labels(n, K, sizes=None):
    """Contiguous block labels ``[0..0, 1..1, ...]``."""
    sizes = balanced_sizes(n, K) if sizes is None else sizes
    return np.repeat(np.arange(K, dtype=np.int64), sizes)


@dataclass(frozen=True, eq=False)
class WsbmParams:
    """Full generative description of a weighted SBM.

    Attributes
    ----------
    n, K : int
    sizes : tuple of int
        Community sizes, summing to ``n``.
    B : ndarray of shape (K, K)
        Symmetric edge-probability matrix with entries in [0, 1].
    weights : tuple of tuple of WeightDistribution
        ``weights[q][l]`` is the law of edge weights between communities
        ``q`` and ``l``; symmetric in ``(q, l)``.
    """

    n: int
    K: int
    B: np.ndarray
    weights: tuple
    sizes: tuple = None
    weight_means: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, K = int(self.n), int(self.K)
        if K < 1 or n < K:
            raise InvalidParam(f"need n >= K >= 1, got n={n}, K={K}")
        B = np.array(self.B, dtype=float)
        if B.shape != (K, K):
            raise InvalidParam(f"B must be {K}x{K}, got {B.shape}")
        if not np.array_equal(B, B.T):
            raise InvalidParam("B must be symmetric")
        if np.any(B < 0) or np.any(B > 1) or not np.all(np.isfinite(B)):
            raise InvalidParam("B entries must lie in [0, 1]")
        weights = self.weights
        if isinstance(weights, WeightDistribution):
            weights = tuple(tuple(weights for _ in range(K)) for _ in range(K))
        weights = tuple(tuple(row) for row in weights)
        if len(weights) != K or any(len(row) != K for row in weights):
            raise InvalidParam(f"weights must be a {K}x{K} table of weight laws")
        for q in range(K):
            for l in range(K):
                if not isinstance(weights[q][l], WeightDistribution):
                    raise InvalidParam(f"weights[{q}][{l}] is not a weight law")
                if weights[q][l] != weights[l][q]:
                    raise InvalidParam(f"weights must be symmetric, ({q},{l}) differs from ({l},{q})")
        sizes = balanced_sizes(n, K) if self.sizes is None else tuple(int(s) for s in self.sizes)
        if len(sizes) != K or sum(sizes) != n or min(sizes) < 1:
            raise InvalidParam(f"sizes {sizes} must be {K} positive integers summing to {n}")
        B.flags.writeable = False
        means = np.array([[w.mean() for w in row] for row in weights])
        means.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "weight_means", means)

    @property
    def balanced(self):
        return len(set(self.sizes)) == 1

    def labels(self):
        """Contiguous block labels matching :attr:`sizes`."""
        return balanced_labels(self.n, self.K, self.sizes)

    def two_level_form(self):
        """Return ``(a, b, alpha, beta)`` if B and the weight means are two-valued.

        ``a``/``alpha`` are the within-community probability and weight mean,
        ``b``/``beta`` the between-community ones. Raises UnsupportedForm
        otherwise.
        """
        K = self.K
        off = ~np.eye(K, dtype=bool)
        diag_B, diag_m = np.diag(self.B), np.diag(self.weight_means)
        if np.ptp(diag_B) != 0 or np.ptp(diag_m) != 0:
            raise UnsupportedForm("within-community probabilities or weight means differ across communities")
        if K > 1 and (np.ptp(self.B[off]) != 0 or np.ptp(self.weight_means[off]) != 0):
            raise UnsupportedForm("between-community probabilities or weight means are not all equal")
        a, alpha = float(diag_B[0]), float(diag_m[0])
        b, beta = (float(self.B[off][0]), float(self.weight_means[off][0])) if K > 1 else (0.0, 0.0)
        return a, b, alpha, beta

    def to_dict(self):
        return {
            "n": self.n,
            "K": self.K,
            "sizes": list(self.sizes),
            "B": self.B.tolist(),
            "weights": [[w.to_dict() for w in row] for row in self.weights],
        }

    @classmethod
    def from_dict(cls, d):
        weights = [[WeightDistribution.from_dict(w) for w in row] for row in d["weights"]]
        return cls(n=d["n"], K=d["K"], B=np.asarray(d["B"], dtype=float), weights=weights, sizes=d.get("sizes"))


def simple_form_params(n, K, p, lam, weight, sizes=None):
    """Affinity model with within probability ``p`` and between ``p*(1-lam)``."""
    if not 0 < p <= 1:
        raise InvalidParam(f"p must lie in (0, 1], got {p}")
    if not 0 < lam < 1:
        raise InvalidParam(f"lambda must lie in (0, 1), got {lam}")
    B = p * lam * np.eye(K) + p * (1 - lam) * np.ones((K, K))
    return WsbmParams(n=n, K=K, B=B, weights=weight, sizes=sizes)


def two_level_params(n, K, a, b, within, between, sizes=None):
    """Model with within/between probabilities ``a``/``b`` and weight laws.

    Covers assortative and disassortative weight mixes (``within`` and
    ``between`` are the weight laws for same- and cross-community edges).
    """
    for name, v in (("a", a), ("b", b)):
        if not 0 <= v <= 1:
            raise InvalidParam(f"{name} must lie in [0, 1], got {v}")
    B = np.full((K, K), float(b))
    np.fill_diagonal(B, float(a))
    table = [[within if q == l else between for l in range(K)] for q in range(K)]
    return WsbmParams(n=n, K=K, B=B, weights=table, sizes=sizes)


def check_labels_for(params, labels):
    labels = check_labels(labels)
    if labels.shape[0] != params.n:
        raise LabelMismatch(f"got {labels.shape[0]} labels for n={params.n}")
    if labels.size and (labels.min() < 0 or labels.max() >= params.K):
        raise LabelMismatch(f"labels must lie in [0, {params.K - 1}]")
    sizes = tuple(np.bincount(labels, minlength=params.K).tolist())
    if sizes != tuple(params.sizes):
        raise LabelMismatch(f"community sizes {sizes} differ from params {tuple(params.sizes)}")
    return labels


# --------------------------------------------------------------------------
# sampling

def sample(params, labels, seed):
    """Draw one weighted graph.

    Every unordered pair ``i < j`` gets an independent Bernoulli edge with
    probability ``B[g_i, g_j]``; present edges receive a weight from the law of
    the community pair. Identical arguments give an identical graph.
    """
    labels = check_labels_for(params, labels)
    rng = make_rng(seed)
    n = params.n
    iu, ju = np.triu_indices(n, 1)
    gi, gj = labels[iu], labels[ju]
    present = rng.random(iu.size) < params.B[gi, gj]
    lo, hi = np.minimum(gi, gj), np.maximum(gi, gj)
    w = np.zeros(iu.size)
    # one draw per community pair, in fixed (q, l) order
    for q in range(params.K):
        for l in range(q, params.K):
            mask = present & (lo == q) & (hi == l)
            count = int(mask.sum())
            if count:
                w[mask] = params.weights[q][l].sample(rng, count)
    W = np.zeros((n, n))
    W[iu, ju] = w
    W[ju, iu] = w
    return WeightedGraph(W)


# --------------------------------------------------------------------------
# population oracles

def motif_moments(n, K, a, b, alpha, beta):
    """Expected triangle-motif entries ``(h1, h2)`` for a balanced two-level model.

    ``h1`` is the expectation for a same-community pair and ``h2`` for a
    cross-community pair. With ``b = a(1-lam)`` and ``beta = alpha`` this is
    the affinity-model special case.
    """
    m = n / K
    h1 = a * (m - 2) * a**2 * 3 * alpha + a * (K - 1) * m * b**2 * (alpha + 2 * beta)
    h2 = 2 * b * (m - 1) * a * b * (alpha + 2 * beta) + b * (K - 2) * m * b**2 * (3 * beta)
    return h1, h2


def _require_balanced(params):
    if not params.balanced:
        raise Unbalanced(f"closed forms assume equal community sizes, got {params.sizes}")


def population_motif_moments(params):
    """``(h1, h2)`` for triangle motifs; needs a balanced two-level model."""
    _require_balanced(params)
    a, b, alpha, beta = params.two_level_form()
    return motif_moments(params.n, params.K, a, b, alpha, beta)


@dataclass(frozen=True, eq=False)
class PopulationMatrices:
    """Expected edge and triangle-motif matrices (diagonals included).

    The expectation of the sampled matrix equals the stored matrix with its
    diagonal zeroed.
    """

    script_w: np.ndarray
    script_w_motif: np.ndarray
    h1: float
    h2: float


def block_motif_matrix(labels, h1, h2, K=None):
    """``Theta ((h1 - h2) I + h2 11^T) Theta^T``: h1 on same-community pairs, h2 elsewhere."""
    theta = labels_to_membership(labels, K).astype(float)
    K = theta.shape[1]
    core = (h1 - h2) * np.eye(K) + h2 * np.ones((K, K))
    return theta @ core @ theta.T


def population_matrices(params, labels=None):
    labels = params.labels() if labels is None else check_labels_for(params, labels)
    h1, h2 = population_motif_moments(params)
    theta = labels_to_membership(labels, params.K).astype(float)
    script_w = theta @ (params.B * params.weight_means) @ theta.T
    script_w_motif = block_motif_matrix(labels, h1, h2, params.K)
    return PopulationMatrices(script_w, script_w_motif, float(h1), float(h2))


def edge_population_matrix(params, labels=None):
    """Expected weighted adjacency ``Theta (B * means) Theta^T``; any B."""
    labels = params.labels() if labels is None else check_labels_for(params, labels)
    theta = labels_to_membership(labels, params.K).astype(float)
    return theta @ (params.B * params.weight_means) @ theta.T


def analytic_eigengap(params, labels=None):
    """K-th largest eigenvalue of the population motif matrix, ``(n/K)(h1-h2)``."""
    if labels is not None:
        check_labels_for(params, labels)
    h1, h2 = population_motif_moments(params)
    return params.n / params.K * (h1 - h2)


def analytic_edge_eigengap(params, labels=None):
    """Counterpart of :func:`analytic_eigengap` for the expected adjacency."""
    if labels is not None:
        check_labels_for(params, labels)
    _require_balanced(params)
    a, b, alpha, beta = params.two_level_form()
    return params.n / params.K * (a * alpha - b * beta)


def population_eigvecs(pm, K):
    """Top-``K`` orthonormal eigenvectors of the population motif matrix.

    Rows are identical within a community and sit at distance
    ``sqrt(1/n_k + 1/n_l)`` across communities ``k != l``.
    """
    from .spectral import top_k_eigen

    M = pm.script_w_motif if isinstance(pm, PopulationMatrices) else np.asarray(pm, dtype=float)
    pairs = top_k_eigen(M, K, which="algebraic")
    if pairs.values[-1] < 1e-10:
        raise RankDeficient(f"K-th eigenvalue {pairs.values[-1]:.3g} is below 1e-10")
    return pairs.vectors
