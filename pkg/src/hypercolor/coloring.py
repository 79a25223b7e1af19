"""Constructive coloring of random regular hypergraphs.

Greedy-color the simple hypergraph H(n, M), carry the coloring through trimming
and augmentation, then uncolor one vertex per monochromatic ("bad") edge and
recolor those vertices from a small fresh palette.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import (
    UNCOLORED,
    Coloring,
    Hypergraph,
    class_profile,
    degeneracy_order,
    find_bad_edges,
    induced_edge_mask,
    is_proper,
)
from .sampler import augment_to_regular, initial_edge_count, sample_multi, strip, to_hypergraph, trim
from .theory import predicted_alpha_frac, predicted_chi


class RepairError(RuntimeError):
    """The fresh palette ran out while recoloring the uncolored set."""

    def __init__(self, msg, u=0, degeneracy=0):
        super().__init__(msg)
        self.u = u
        self.degeneracy = degeneracy


def _vertex_order(h, order, rng):
    if order is None or order == "random":
        if rng is None:
            raise ValueError("a random vertex order needs an rng")
        return rng.permutation(h.n).tolist()
    if order == "degree":
        deg = h.degrees()
        return sorted(range(h.n), key=lambda v: (-deg[v], v))
    order = [int(v) for v in order]
    if sorted(order) != list(range(h.n)):
        raise ValueError("order must be a permutation of the vertices")
    return order


def _blocked_colors(v, inc_v, edges, color):
    """Colors c such that coloring v with c would make some incident edge monochromatic."""
    blocked = set()
    for e in inc_v:
        c = None
        for w in edges[e]:
            if w == v:
                continue
            cw = color[w]
            if cw < 0 or (c is not None and cw != c):
                break
            c = cw
        else:
            blocked.add(c)  # c is None for a full loop: blocks every color
    return blocked


def greedy_color(h, order=None, rng=None):
    """First-fit coloring: each vertex takes the smallest color not completing a
    monochromatic edge.

    ``order`` is ``"random"`` (default, needs ``rng``), ``"degree"`` or an
    explicit permutation.  A vertex on a full loop ``{v, ..., v}`` cannot be
    helped and simply gets color 0; the coloring is proper whenever ``h`` has
    no loops.
    """
    seq = _vertex_order(h, order, rng)
    edges = h.edges.tolist()
    inc = h.incidence()
    color = [UNCOLORED] * h.n
    for v in seq:
        blocked = _blocked_colors(v, inc[v], edges, color)
        if None in blocked:
            color[v] = 0
            continue
        c = 0
        while c in blocked:
            c += 1
        color[v] = c
    return Coloring(color)


def greedy_independent_set(h, rng=None, order=None):
    """A maximal independent set grown in random order."""
    seq = _vertex_order(h, order, rng)
    edges = h.edges.tolist()
    inc = h.incidence()
    inside = [False] * h.n
    for v in seq:
        if all(any(w != v and not inside[w] for w in edges[e]) for e in inc[v]):
            inside[v] = True
    return [v for v in range(h.n) if inside[v]]


def kappa(r, d, eps):
    """Per-class edge-profile thresholds kappa_j = (10d/r) C(r, j) a^j, j = 1..r-1,
    with a = (1 + eps/2) * predicted independence fraction."""
    a = (1 + eps / 2) * predicted_alpha_frac(r, d)
    return {j: 10 * d / r * math.comb(r, j) * a ** j for j in range(1, r)}


def check_profile(h, col, kappa, n, slack=1.0):
    """True iff every class A has at most slack * kappa_j * n edges with exactly j
    of their vertices in A, for 1 <= j <= r-1.  Monochromatic edges do not count."""
    prof = class_profile(h, col)
    for j in range(1, h.r):
        if prof.counts[:, j].max(initial=0) > slack * kappa[j] * n:
            return False
    return True


def transform_and_track(ps, coloring, d, rng):
    """Augment the trimmed point system to d-regular under a fixed coloring.

    Returns ``(final_hypergraph, coloring, bad)`` where ``bad`` lists the
    monochromatic edges of the final hypergraph: parts created during
    augmentation that landed inside one class, plus old loops or repeated
    edges that survived trimming and were never constrained by the greedy step.
    """
    if coloring.n != ps.n or not coloring.is_total():
        raise ValueError("coloring must be total on the n buckets")
    final = augment_to_regular(ps, d, rng)
    h = to_hypergraph(final)
    return h, coloring, find_bad_edges(h, coloring)


def uncolor_set(h, bad):
    """One vertex (the smallest id) from each bad edge."""
    return sorted({int(h.edges[i].min()) for i in bad})


def repair(h, col, bad, delta):
    """Make ``col`` proper on ``h`` using at most ``delta`` extra colors.

    The smallest vertex of every bad edge is uncolored; those vertices are
    recolored from the fresh palette ``palette_size .. palette_size+delta-1``
    first-fit, in reverse min-degree removal order.  Edges leaving the uncolored
    set always see an old color, so only edges inside it constrain the choice.
    Raises ``RepairError`` when some vertex has all ``delta`` fresh colors
    blocked.
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    bad = sorted(set(int(i) for i in bad))
    mono = find_bad_edges(h, col)
    if not set(mono) <= set(bad):
        raise ValueError("an edge outside the bad list is monochromatic")
    if not bad:
        return col
    U = uncolor_set(h, bad)
    order, degen = degeneracy_order(h, U)
    base = col.palette_size
    color = col.colors.tolist()
    for v in U:
        color[v] = UNCOLORED
    inner = Hypergraph(h.r, h.n, h.edges[induced_edge_mask(h, U)])
    edges = inner.edges.tolist()
    inc = inner.incidence()
    for v in reversed(order):
        blocked = _blocked_colors(v, inc[v], edges, color)
        if None in blocked:
            raise RepairError(f"vertex {v} lies on a full loop; no coloring is proper",
                              u=len(U), degeneracy=degen)
        c = next((c for c in range(base, base + delta) if c not in blocked), None)
        if c is None:
            raise RepairError(
                f"fresh palette of {delta} exhausted at vertex {v} (|U|={len(U)}, degeneracy={degen})",
                u=len(U), degeneracy=degen)
        color[v] = c
    return Coloring(color, palette_size=base + delta)


def repair_delta(r, d, eps):
    """Integer fresh-palette size max(1, floor((eps/2) * predicted chi))."""
    return max(1, math.floor(eps / 2 * predicted_chi(r, d)))


@dataclass
class PipelineResult:
    n: int
    d: int
    r: int
    eps: float
    m: int
    M: int
    colors_initial: int
    bad_edges: int
    u: int
    degeneracy_u: int
    delta: int
    colors_final: int | None
    profile_initial_ok: bool
    profile_ok: bool
    proper: bool
    status: str
    hypergraph: Hypergraph = field(repr=False, default=None)
    coloring: Coloring = field(repr=False, default=None)

    def summary(self):
        return {k: v for k, v in self.__dict__.items() if k not in ("hypergraph", "coloring")}


def pipeline_chi_upper(n, d, r, eps, rng, order="random"):
    """Sample H_r(n, d) through the bucket/point construction while coloring it.

    A failed repair is recorded (``status="repair_failed"``), not retried.
    """
    if (n * d) % r:
        raise ValueError(f"r={r} must divide n*d={n * d}")
    if d < 2 or eps <= 0:
        raise ValueError("need d >= 2 and eps > 0")
    m = initial_edge_count(n, d, r)
    multi = sample_multi(n, m, r, rng)
    h_simple, _, _ = strip(to_hypergraph(multi))
    col0 = greedy_color(h_simple, order=order, rng=rng)
    if not is_proper(h_simple, col0):
        raise AssertionError("greedy coloring of the simple hypergraph is improper")
    colors_initial = col0.num_colors_used()
    kap = kappa(r, d, eps)
    profile_initial_ok = check_profile(h_simple, col0, kap, n, slack=1)

    trimmed = trim(multi, d)
    h_final, col0, bad = transform_and_track(trimmed, col0, d, rng)
    profile_ok = check_profile(h_final, col0, kap, n, slack=2)

    delta = repair_delta(r, d, eps)
    U = uncolor_set(h_final, bad)
    _, degen = degeneracy_order(h_final, U)
    try:
        col = repair(h_final, col0, bad, delta)
    except RepairError:
        return PipelineResult(n, d, r, eps, m, h_simple.m, colors_initial, len(bad), len(U), degen,
                              delta, None, profile_initial_ok, profile_ok, False, "repair_failed",
                              h_final, None)
    proper = is_proper(h_final, col)
    if not proper:
        raise AssertionError("repair returned an improper coloring")
    return PipelineResult(n, d, r, eps, m, h_simple.m, colors_initial, len(bad), len(U), degen,
                          delta, col.num_colors_used(), profile_initial_ok, profile_ok, proper, "ok",
                          h_final, col)
