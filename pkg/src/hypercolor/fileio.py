"""Plain-text formats.

Hypergraph: a header line ``r n m`` followed by m lines of r space-separated
0-based vertex ids.  Repeated ids on a line (loops) and repeated lines
(multi-edges) are allowed.

Coloring: n lines ``vertex color``; an uncolored vertex is written ``-``.
"""
from __future__ import annotations

import numpy as np

from .hypergraph import UNCOLORED, Coloring, Hypergraph


def format_hypergraph(h):
    lines = [f"{h.r} {h.n} {h.m}"]
    lines.extend(" ".join(map(str, e)) for e in h.edges.tolist())
    return "\n".join(lines) + "\n"


def parse_hypergraph(text):
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 3:
        raise ValueError("missing 'r n m' header")
    r, n, m = (int(x) for x in rows[0])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"header announces {m} edges, found {len(body)}")
    for i, row in enumerate(body, start=2):
        if len(row) != r:
            raise ValueError(f"line {i}: expected {r} vertex ids, got {len(row)}")
    edges = np.array([[int(x) for x in row] for row in body], dtype=np.int64).reshape(m, r)
    return Hypergraph(r, n, edges)


def write_hypergraph(h, path):
    with open(path, "w") as fh:
        fh.write(format_hypergraph(h))


def read_hypergraph(path):
    with open(path) as fh:
        return parse_hypergraph(fh.read())


def format_coloring(col):
    return "".join(f"{v} {'-' if c == UNCOLORED else c}\n" for v, c in enumerate(col.colors.tolist()))


def parse_coloring(text, palette_size=-1):
    entries = {}
    for i, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"line {i}: expected 'vertex color'")
        v = int(parts[0])
        if v in entries:
            raise ValueError(f"line {i}: vertex {v} listed twice")
        entries[v] = UNCOLORED if parts[1] == "-" else int(parts[1])
    n = len(entries)
    if sorted(entries) != list(range(n)):
        raise ValueError("coloring must list every vertex 0..n-1 exactly once")
    return Coloring([entries[v] for v in range(n)], palette_size=palette_size)


def write_coloring(col, path):
    with open(path, "w") as fh:
        fh.write(format_coloring(col))


def read_coloring(path):
    with open(path) as fh:
        return parse_coloring(fh.read())
