"""Command line front end.

Exit codes: 0 success, 1 bad arguments or configuration, 2 runtime failure.
"""

import argparse
import json
import logging
import sys

import numpy as np

from .exceptions import ConfigError, HoscError
from .harness import ExperimentConfig, emit_csv, emit_summary_csv, run_experiment, summarize
from .io import format_edge_list, load_edge_list, load_labels, write_labels
from .metrics import adjusted_rand_index, miscluster_rate, modularity, normalized_mutual_information
from .motif import MotifKind, build_motif_matrix
from .spectral import spectral_cluster

MOTIF_CHOICES = [m.value for m in MotifKind]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="hosc", description="Higher-order spectral clustering of weighted networks.")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for simulate")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="run a Monte Carlo experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="per-replication CSV")
    p.add_argument("--summary", help="optional CSV of per-group means and standard errors")

    p = sub.add_parser("cluster", help="cluster the nodes of an edge list")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=["edge", "motif"], default="motif")
    p.add_argument("--motif", choices=MOTIF_CHOICES, default="triangle")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eigen-order", choices=["algebraic", "magnitude"], default="algebraic")
    p.add_argument("--out", required=True, help="labels file, one label per node in internal id order")

    p = sub.add_parser("motif", help="write the weighted motif adjacency matrix as an edge list")
    p.add_argument("--input", required=True)
    p.add_argument("--motif", choices=MOTIF_CHOICES, default="triangle")
    p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("metrics", help="compare estimated labels with the truth")
    p.add_argument("--labels", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--graph", help="edge list; enables modularity on its motif matrix")
    p.add_argument("--motif", choices=MOTIF_CHOICES, default="triangle")
    return parser


def _simulate(args):
    cfg = ExperimentConfig.from_json(args.config)
    rows = run_experiment(cfg, threads=args.threads)
    emit_csv(rows, args.out)
    if args.summary:
        emit_summary_csv(summarize(rows), args.summary)


def _cluster(args):
    g = load_edge_list(args.input)
    A = g.weights if args.method == "edge" else build_motif_matrix(g, args.motif).values
    labels = spectral_cluster(A, args.k, restarts=args.restarts, seed=args.seed, which=args.eigen_order)
    write_labels(labels, args.out)


def _motif(args):
    g = load_edge_list(args.input)
    lines = format_edge_list(g, build_motif_matrix(g, args.motif).values)
    text = "".join(line + "\n" for line in lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _metrics(args):
    labels, truth = load_labels(args.labels), load_labels(args.truth)
    report = {
        "miscluster_rate": miscluster_rate(labels, truth),
        "ari": adjusted_rand_index(labels, truth),
        "nmi": normalized_mutual_information(labels, truth),
    }
    if args.graph:
        g = load_edge_list(args.graph)
        report["modularity"] = modularity(build_motif_matrix(g, args.motif).values, labels)
        report["motif"] = args.motif
    print(json.dumps(report, default=lambda x: float(x) if isinstance(x, np.floating) else str(x)))


COMMANDS = {"simulate": _simulate, "cluster": _cluster, "motif": _motif, "metrics": _metrics}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (HoscError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
