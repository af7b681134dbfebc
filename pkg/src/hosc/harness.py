"""Monte Carlo experiment runner.

An experiment sweeps one model parameter (``n``, ``p``, ``out_in_ratio`` or
``K``), samples ``replications`` graphs per sweep value, clusters each with the
requested methods and records metrics against the planted labels. Replication
``r`` always samples with seed ``seed + r``, so results do not depend on how
work is scheduled.
"""

import csv
import json
import logging
import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .exceptions import ConfigError, DegeneratePoints, EmptyResult, HoscError, UnsupportedForm, Unbalanced, ZeroWeight
from .metrics import adjusted_rand_index, miscluster_rate, modularity, normalized_mutual_information, spectral_deviation
from .motif import build_motif_matrix
from .spectral import spectral_cluster, top_k_eigen
from .wsbm import (
    WeightDistribution,
    WsbmParams,
    analytic_edge_eigengap,
    analytic_eigengap,
    balanced_labels,
    edge_population_matrix,
    population_matrices,
    sample,
    simple_form_params,
    two_level_params,
)

logger = logging.getLogger(__name__)

METRICS = (
    "miscluster_rate",
    "ari",
    "nmi",
    "modularity",
    "spectral_dev",
    "eigengap_analytic",
    "eigengap_numeric",
    "runtime_ms",
)
CSV_COLUMNS = ("sweep_value", "replication", "method", "motif") + METRICS

MetricName = Literal[METRICS]


# --------------------------------------------------------------------------
# configuration

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def _weight_law(value):
    if value is None:
        return None
    if not isinstance(value, dict):
        raise ValueError("weight law must be an object with a 'kind' key")
    try:
        WeightDistribution.from_dict(value)
    except HoscError as exc:
        raise ValueError(str(exc)) from None
    return value


class SweepSpec(_Strict):
    variable: Literal["n", "p", "out_in_ratio", "K"]
    values: List[float] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_values(self):
        for i, v in enumerate(self.values):
            if not v > 0:
                raise ValueError(f"values[{i}] must be positive, got {v}")
            if self.variable in ("n", "K") and v != int(v):
                raise ValueError(f"values[{i}] must be an integer for variable {self.variable!r}, got {v}")
        return self


class ModelTemplate(_Strict):
    """Fixed model parameters; the swept variable overrides one of them.

    ``B`` (optional) replaces the ``p``/``out_in_ratio`` construction with an
    explicit connectivity matrix. ``within_weight``/``between_weight`` give
    separate weight laws for same- and cross-community edges; otherwise
    ``weight`` is used for every edge.
    """

    n: int = Field(60, ge=1)
    K: int = Field(2, ge=1)
    p: float = 0.5
    out_in_ratio: float = 0.6
    B: Optional[List[List[float]]] = None
    weight: dict = Field(default_factory=lambda: {"kind": "uniform", "low": 0.01, "high": 1.0})
    within_weight: Optional[dict] = None
    between_weight: Optional[dict] = None

    @field_validator("weight", "within_weight", "between_weight")
    @classmethod
    def _law(cls, value):
        return _weight_law(value)

    @model_validator(mode="after")
    def _check_pair(self):
        if (self.within_weight is None) != (self.between_weight is None):
            raise ValueError("within_weight and between_weight must be given together")
        return self


class ExperimentConfig(_Strict):
    name: str
    sweep: SweepSpec
    fixed: ModelTemplate = Field(default_factory=ModelTemplate)
    methods: List[Literal["edge", "motif"]] = Field(default_factory=lambda: ["edge", "motif"], min_length=1)
    motif_kinds: List[Literal["triangle", "wedge", "clique4"]] = Field(default_factory=lambda: ["triangle"])
    replications: int = Field(100, ge=1)
    seed: int = Field(0, ge=0, lt=2**63)
    record: List[MetricName] = Field(default_factory=lambda: ["miscluster_rate", "ari", "nmi", "modularity"])
    restarts: int = Field(20, ge=1)
    eigen_order: Literal["algebraic", "magnitude"] = "algebraic"
    shuffle_labels: bool = False

    @model_validator(mode="after")
    def _check(self):
        if "motif" in self.methods and not self.motif_kinds:
            raise ValueError("motif_kinds must be non-empty when 'motif' is a method")
        if self.fixed.B is not None and self.sweep.variable in ("p", "out_in_ratio", "K"):
            raise ValueError(f"cannot sweep {self.sweep.variable!r} with an explicit B matrix")
        return self

    @classmethod
    def from_dict(cls, data):
        try:
            cfg = cls.model_validate(data)
        except ValidationError as exc:
            err = exc.errors()[0]
            path = ".".join(str(part) for part in err["loc"])
            raise ConfigError(err["msg"], path=path) from None
        for i, value in enumerate(cfg.sweep.values):
            try:
                cfg.params_for(value)
            except HoscError as exc:
                raise ConfigError(str(exc), path=f"sweep.values.{i}") from None
        return cfg

    @classmethod
    def from_json(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def params_for(self, value):
        """Model parameters with the swept variable set to ``value``."""
        fields = self.fixed.model_dump()
        var = self.sweep.variable
        fields[var] = int(value) if var in ("n", "K") else float(value)
        n, K = fields["n"], fields["K"]
        if fields["within_weight"] is not None:
            within = WeightDistribution.from_dict(fields["within_weight"])
            between = WeightDistribution.from_dict(fields["between_weight"])
            table = [[within if q == l else between for l in range(K)] for q in range(K)]
        else:
            within = between = WeightDistribution.from_dict(fields["weight"])
            table = within
        if fields["B"] is not None:
            return WsbmParams(n=n, K=K, B=np.asarray(fields["B"], dtype=float), weights=table)
        if within is between:
            return simple_form_params(n, K, fields["p"], 1 - fields["out_in_ratio"], within)
        return two_level_params(n, K, fields["p"], fields["p"] * fields["out_in_ratio"], within, between)


# --------------------------------------------------------------------------
# running

@dataclass
class ExperimentResultRow:
    sweep_value: float
    replication: int
    method: str
    motif: str
    metrics: dict = field(default_factory=dict)


def _safe(fn):
    try:
        return float(fn())
    except (UnsupportedForm, Unbalanced, ZeroWeight):
        return float("nan")


def _cluster(A, K, cfg, seed):
    try:
        return spectral_cluster(A, K, restarts=cfg.restarts, seed=seed, which=cfg.eigen_order)
    except DegeneratePoints as exc:
        logger.warning("degenerate embedding (%s); assigning every node to one cluster", exc)
        return np.zeros(A.shape[0], dtype=np.int64)


def _run_item(cfg, value, rep):
    """All rows for one (sweep value, replication) pair."""
    params = cfg.params_for(value)
    K = params.K
    seed = cfg.seed + rep
    truth = balanced_labels(params.n, K, params.sizes)
    if cfg.shuffle_labels:
        label_rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 1])))
        truth = label_rng.permutation(truth)
    g = sample(params, truth, seed)
    record = set(cfg.record)

    motif_cache = {}

    def motif_matrix(kind):
        if kind not in motif_cache:
            t0 = time.perf_counter()
            M = build_motif_matrix(g, kind).values
            motif_cache[kind] = (M, time.perf_counter() - t0)
        return motif_cache[kind]

    def triangle_population():
        return population_matrices(params, truth)

    jobs = []
    if "edge" in cfg.methods:
        jobs.append(("edge", ""))
    if "motif" in cfg.methods:
        jobs.extend(("motif", kind) for kind in cfg.motif_kinds)

    rows = []
    for method, kind in jobs:
        t0 = time.perf_counter()
        if method == "edge":
            A, build_time = g.weights, 0.0
        else:
            A, build_time = motif_matrix(kind)
        labels = _cluster(A, K, cfg, seed)
        elapsed = time.perf_counter() - t0 + build_time

        out = {}
        if "miscluster_rate" in record:
            out["miscluster_rate"] = miscluster_rate(labels, truth, K)
        if "ari" in record:
            out["ari"] = adjusted_rand_index(labels, truth)
        if "nmi" in record:
            out["nmi"] = normalized_mutual_information(labels, truth)
        if "modularity" in record:
            # always scored on a motif matrix; edge rows use the first listed motif
            mod_kind = kind or (cfg.motif_kinds[0] if cfg.motif_kinds else "triangle")
            out["modularity"] = _safe(lambda: modularity(motif_matrix(mod_kind)[0], labels))
        triangle_motif = method == "motif" and kind == "triangle"
        if "spectral_dev" in record:
            if method == "edge":
                P = edge_population_matrix(params, truth)
                out["spectral_dev"] = spectral_deviation(A, P - np.diag(np.diag(P)))
            elif triangle_motif:
                def dev():
                    P = triangle_population().script_w_motif
                    return spectral_deviation(A, P - np.diag(np.diag(P)))
                out["spectral_dev"] = _safe(dev)
            else:
                out["spectral_dev"] = float("nan")
        if "eigengap_analytic" in record:
            if method == "edge":
                out["eigengap_analytic"] = _safe(lambda: analytic_edge_eigengap(params))
            elif triangle_motif:
                out["eigengap_analytic"] = _safe(lambda: analytic_eigengap(params))
            else:
                out["eigengap_analytic"] = float("nan")
        if "eigengap_numeric" in record:
            if method == "edge":
                P = edge_population_matrix(params, truth)
                out["eigengap_numeric"] = float(top_k_eigen(P, K, which=cfg.eigen_order).values[-1])
            elif triangle_motif:
                out["eigengap_numeric"] = _safe(
                    lambda: top_k_eigen(triangle_population().script_w_motif, K, which=cfg.eigen_order).values[-1])
            else:
                out["eigengap_numeric"] = float("nan")
        if "runtime_ms" in record:
            out["runtime_ms"] = 1000.0 * elapsed
        rows.append(ExperimentResultRow(float(value), rep, method, kind, out))
    return rows


def _run_item_star(args):
    return _run_item(*args)


def run_experiment(cfg, threads=1):
    """Run every (sweep value, replication) item and return rows in order.

    ``threads > 1`` spreads items over worker processes; the rows are
    collected in item order, so output is identical for any ``threads``.
    """
    if isinstance(cfg, dict):
        cfg = ExperimentConfig.from_dict(cfg)
    items = [(cfg, value, rep) for value in cfg.sweep.values for rep in range(cfg.replications)]
    if threads <= 1:
        chunks = [_run_item_star(item) for item in items]
    else:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
            chunks = list(pool.map(_run_item_star, items, chunksize=max(1, len(items) // (4 * threads))))
    return [row for chunk in chunks for row in chunk]


# --------------------------------------------------------------------------
# output

def _fmt(x):
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.10g}"


def emit_csv(rows, path):
    """Write rows with the fixed column order of :data:`CSV_COLUMNS`.

    Reals use 10 significant digits; metrics that were not recorded are left
    empty.
    """
    if not rows:
        raise EmptyResult("no rows to write")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            metrics = [_fmt(row.metrics[m]) if m in row.metrics else "" for m in METRICS]
            writer.writerow([_fmt(row.sweep_value), row.replication, row.method, row.motif, *metrics])


def read_csv(path):
    """Parse a file written by :func:`emit_csv` back into rows."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        for rec in reader:
            metrics = {m: float(rec[m]) for m in METRICS if rec[m] != ""}
            rows.append(ExperimentResultRow(float(rec["sweep_value"]), int(rec["replication"]),
                                            rec["method"], rec["motif"], metrics))
    return rows


@dataclass
class SummaryRow:
    sweep_value: float
    method: str
    motif: str
    count: int
    mean: dict
    se: dict


def summarize(rows):
    """Mean and standard error of every metric per (sweep value, method, motif).

    NaN entries are skipped; the standard error uses the sample standard
    deviation and is NaN for a single observation.
    """
    if not rows:
        raise EmptyResult("no rows to summarize")
    groups = {}
    for row in rows:
        groups.setdefault((row.sweep_value, row.method, row.motif), []).append(row)
    out = []
    for (value, method, motif), members in groups.items():
        mean, se = {}, {}
        names = [m for m in METRICS if any(m in r.metrics for r in members)]
        for m in names:
            x = np.array([r.metrics[m] for r in members if m in r.metrics], dtype=float)
            x = x[~np.isnan(x)]
            mean[m] = float(x.mean()) if x.size else float("nan")
            se[m] = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")
        out.append(SummaryRow(value, method, motif, len(members), mean, se))
    return out


def emit_summary_csv(summary, path):
    if not summary:
        raise EmptyResult("no summary rows to write")
    names = [m for m in METRICS if any(m in s.mean for s in summary)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sweep_value", "method", "motif", "count"]
                        + [f"{m}_{stat}" for m in names for stat in ("mean", "se")])
        for s in summary:
            stats = []
            for m in names:
                stats += [_fmt(s.mean[m]) if m in s.mean else "", _fmt(s.se[m]) if m in s.se else ""]
            writer.writerow([_fmt(s.sweep_value), s.method, s.motif, s.count, *stats])
