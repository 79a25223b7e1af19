"""Core hypergraph and coloring types plus the predicates used everywhere else.

Edges are stored as rows of an ``(m, r)`` integer array, each row sorted, so an
edge is a multiset of vertex ids.  Loops (a vertex repeated inside an edge) and
multi-edges (identical rows) are both representable, because the intermediate
objects of the regular-hypergraph construction contain them.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

UNCOLORED = -1


def _frozen(a, dtype=np.int64):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Hypergraph:
    r: int
    n: int
    edges: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"uniformity must be positive, got r={self.r}")
        if self.n < 0:
            raise ValueError(f"vertex count must be non-negative, got n={self.n}")
        e = np.asarray(self.edges, dtype=np.int64)
        if e.size == 0:
            e = e.reshape(0, self.r)
        if e.ndim != 2 or e.shape[1] != self.r:
            raise ValueError(f"edges must have shape (m, {self.r}), got {e.shape}")
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge contains a vertex id outside [0, n)")
        object.__setattr__(self, "edges", _frozen(np.sort(e, axis=1)))

    @classmethod
    def from_edges(cls, r, n, edges):
        return cls(r, n, np.array(list(edges), dtype=np.int64).reshape(-1, r))

    @property
    def m(self):
        return len(self.edges)

    def degrees(self):
        """Slot degrees: a loop ``{v, v, w}`` contributes 2 to ``v``."""
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def loop_mask(self):
        e = self.edges
        if self.r < 2:
            return np.zeros(len(e), dtype=bool)
        return (e[:, 1:] == e[:, :-1]).any(axis=1)

    def full_loop_mask(self):
        e = self.edges
        return (e == e[:, :1]).all(axis=1) if self.r >= 2 else np.zeros(len(e), dtype=bool)

    def is_simple(self):
        if self.loop_mask().any():
            return False
        return len(np.unique(self.edges, axis=0)) == self.m

    def incidence(self):
        """For every vertex, the sorted distinct edge indices containing it."""
        m, r = self.edges.shape
        out = [[] for _ in range(self.n)]
        if m == 0:
            return out
        keys = np.unique(self.edges.ravel() * m + np.repeat(np.arange(m), r))
        verts, eids = np.divmod(keys, m)
        starts = np.searchsorted(verts, np.arange(self.n + 1))
        col = eids.tolist()
        for v in range(self.n):
            out[v] = col[starts[v]:starts[v + 1]]
        return out

    def subhypergraph(self, keep):
        """Hypergraph on the same vertex set with only the edges selected by ``keep``."""
        return Hypergraph(self.r, self.n, self.edges[np.asarray(keep)])

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.r, self.n) == (other.r, other.n) and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.r, self.n, self.edges.tobytes()))


@dataclass(frozen=True, eq=False)
class Coloring:
    """Vertex colors in ``[0, palette_size)``, with ``UNCOLORED`` (-1) for holes."""

    colors: np.ndarray = field(repr=False)
    palette_size: int = -1

    def __post_init__(self):
        c = np.asarray(self.colors, dtype=np.int64).ravel()
        if c.size and c.min() < UNCOLORED:
            raise ValueError("color ids must be >= 0 or UNCOLORED")
        used_max = int(c.max()) if c.size else -1
        palette = self.palette_size if self.palette_size >= 0 else used_max + 1
        if used_max >= palette:
            raise ValueError(f"color {used_max} outside palette of size {palette}")
        object.__setattr__(self, "colors", _frozen(c))
        object.__setattr__(self, "palette_size", int(palette))

    @property
    def n(self):
        return len(self.colors)

    @property
    def uncolored(self):
        return np.flatnonzero(self.colors == UNCOLORED)

    def is_total(self):
        return not (self.colors == UNCOLORED).any()

    def num_colors_used(self):
        c = self.colors[self.colors != UNCOLORED]
        return len(np.unique(c))

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.palette_size == other.palette_size and np.array_equal(self.colors, other.colors)

    def __hash__(self):
        return hash((self.palette_size, self.colors.tobytes()))


@dataclass(frozen=True)
class ClassProfile:
    """``counts[A, j]`` is the number of edges with exactly ``j`` slots in class ``A``.

    Only ``1 <= j <= r - 1`` is populated; monochromatic edges go to ``bad``.
    """

    r: int
    counts: np.ndarray = field(repr=False)
    bad: int = 0

    def x(self, color, j):
        if not 1 <= j <= self.r - 1 or color >= len(self.counts):
            return 0
        return int(self.counts[color, j])

    def as_dict(self):
        nz = np.argwhere(self.counts)
        return {(int(a), int(j)): int(self.counts[a, j]) for a, j in nz}


def _check_total(h, col):
    if col.n != h.n:
        raise ValueError(f"coloring covers {col.n} vertices, hypergraph has {h.n}")
    if not col.is_total():
        raise ValueError("coloring leaves vertices UNCOLORED; a total coloring is required")


def _mono_mask(h, col):
    c = col.colors[h.edges]
    return (c == c[:, :1]).all(axis=1)


def is_proper(h, col):
    """True iff no edge of ``h`` is monochromatic under the total coloring ``col``.

    A full loop ``{v, ..., v}`` is monochromatic under every coloring.
    """
    _check_total(h, col)
    return not _mono_mask(h, col).any()


def find_bad_edges(h, col):
    """Ascending indices of the monochromatic edges."""
    _check_total(h, col)
    return np.flatnonzero(_mono_mask(h, col)).tolist()


def is_independent(h, s):
    inside = np.zeros(h.n, dtype=bool)
    s = np.fromiter(s, dtype=np.int64)
    if s.size and (s.min() < 0 or s.max() >= h.n):
        raise ValueError("vertex set contains ids outside [0, n)")
    inside[s] = True
    return not inside[h.edges].all(axis=1).any()


def class_profile(h, col):
    _check_total(h, col)
    r = h.r
    counts = np.zeros((max(col.palette_size, 1), r + 1), dtype=np.int64)
    if h.m == 0:
        return ClassProfile(r, counts, 0)
    sc = np.sort(col.colors[h.edges], axis=1)
    for i in range(r):
        cnt = (sc == sc[:, i:i + 1]).sum(axis=1)
        first = np.ones(len(sc), dtype=bool) if i == 0 else sc[:, i] != sc[:, i - 1]
        np.add.at(counts, (sc[first, i], cnt[first]), 1)
    bad = int(counts[:, r].sum())
    counts[:, r] = 0
    return ClassProfile(r, counts, bad)


def induced_edge_mask(h, s):
    inside = np.zeros(h.n, dtype=bool)
    inside[np.fromiter(s, dtype=np.int64)] = True
    return inside[h.edges].all(axis=1)


def degeneracy_order(h, s):
    """Min-degree removal order of ``s`` and the degeneracy of the induced sub-hypergraph.

    Degrees count induced edges (edges with every vertex in ``s``), each edge once
    per distinct vertex it contains.  Ties go to the smallest vertex id.
    """
    s = sorted(set(int(v) for v in s))
    if not s:
        return [], 0
    mask = induced_edge_mask(h, s)
    edges = [sorted(set(e)) for e in h.edges[mask].tolist()]
    inc = {v: [] for v in s}
    for k, e in enumerate(edges):
        for v in e:
            inc[v].append(k)
    deg = {v: len(inc[v]) for v in s}
    alive_edge = [True] * len(edges)
    heap = [(deg[v], v) for v in s]
    heapq.heapify(heap)
    removed = set()
    order = []
    degeneracy = 0
    while heap:
        dv, v = heapq.heappop(heap)
        if v in removed or dv != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        degeneracy = max(degeneracy, dv)
        for k in inc[v]:
            if not alive_edge[k]:
                continue
            alive_edge[k] = False
            for w in edges[k]:
                if w != v:
                    deg[w] -= 1
                    heapq.heappush(heap, (deg[w], w))
    return order, degeneracy
