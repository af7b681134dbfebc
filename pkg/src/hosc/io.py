"""Edge-list and label file I/O.

Edge lists are UTF-8 text with one ``u v w`` edge per line; lines starting
with ``#`` are ignored. Node ids are non-negative integers that need not be
contiguous: the loaded graph numbers nodes ``0..n-1`` in ascending id order and
keeps the original ids in :attr:`WeightedGraph.node_ids`.
"""

import math

import numpy as np

from .exceptions import DuplicateEdge, EmptyGraph, NonPositiveWeight, ParseError, SelfLoop
from .graph import WeightedGraph
from .validation import check_labels


def _parse_edge_lines(lines):
    edges = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v w', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise ParseError(f"cannot parse {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"node ids must be non-negative, got {line!r}", lineno)
        if u == v:
            raise SelfLoop(f"self-loop on node {u}", lineno)
        if not math.isfinite(w):
            raise ParseError(f"non-finite weight {parts[2]!r}", lineno)
        if w <= 0:
            raise NonPositiveWeight(f"weight must be positive, got {w}", lineno)
        key = (min(u, v), max(u, v))
        if key in edges:
            raise DuplicateEdge(f"edge {key[0]}-{key[1]} already given on line {edges[key][1]}", lineno)
        edges[key] = (w, lineno)
    return edges


def read_edge_list(lines):
    """Build a :class:`WeightedGraph` from an iterable of text lines."""
    edges = _parse_edge_lines(lines)
    if not edges:
        raise EmptyGraph("edge list contains no edges")
    pairs = np.array(list(edges), dtype=np.int64)
    w = np.array([e[0] for e in edges.values()])
    node_ids, inverse = np.unique(pairs.ravel(), return_inverse=True)
    inverse = inverse.reshape(pairs.shape)
    return WeightedGraph.from_edges(node_ids.size, inverse[:, 0], inverse[:, 1], w, node_ids=node_ids)


def load_edge_list(path):
    with open(path, encoding="utf-8") as fh:
        return read_edge_list(fh)


def format_edge_list(graph, values=None):
    """Lines ``u v w`` for every ``u < v`` pair with a non-zero entry.

    ``values`` overrides the matrix written (e.g. a motif matrix on the same
    nodes); node ids always come from ``graph``.
    """
    M = graph.weights if values is None else np.asarray(values, dtype=float)
    u, v = np.nonzero(np.triu(M, 1))
    ids = graph.node_ids
    # repr(float) is the shortest string that round-trips exactly
    return [f"{ids[a]} {ids[b]} {float(M[a, b])!r}" for a, b in zip(u, v)]


def write_edge_list(graph, path, values=None):
    lines = format_edge_list(graph, values)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("".join(line + "\n" for line in lines))


def load_labels(path):
    """Read one integer label per line (blank and ``#`` lines skipped)."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                out.append(int(line))
            except ValueError:
                raise ParseError(f"cannot parse label {line!r}", lineno) from None
    return np.asarray(out, dtype=np.int64)


def write_labels(labels, path):
    labels = check_labels(labels)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("".join(f"{int(g)}\n" for g in labels))
