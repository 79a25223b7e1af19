"""Random hypergraph generators built on the bucket/point (configuration) model.

The d-regular construction runs in four stages:

1. ``sample_multi``: rm points dropped into n buckets independently and
   uniformly, then partitioned uniformly into m parts of size r.
2. ``strip`` on the induced multi-hypergraph gives the simple H(n, M) that the
   coloring pipeline colors.
3. ``trim`` deletes every part holding a point whose rank in its bucket
   exceeds d, so no bucket keeps more than d points.
4. ``augment_step`` repeatedly adds r new points to under-full buckets and
   re-partitions so that the partition of all live points stays uniform.

A ``PointSystem`` is mutable only through ``augment_step``/``augment_to_regular``
which work on a copy; every public function returns a fresh object.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .hypergraph import Hypergraph
from .theory import qk_cdf


@dataclass(eq=False)
class PointSystem:
    n: int
    r: int
    phi: np.ndarray = field(repr=False)  # bucket of every point id ever created
    rank: np.ndarray = field(repr=False)  # 1-based arrival order inside the bucket
    parts: np.ndarray = field(repr=False)  # (a, r) live point ids
    new_flags: np.ndarray = field(repr=False)  # True for points created by augmentation

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=np.int64)
        self.rank = np.asarray(self.rank, dtype=np.int64)
        self.parts = np.asarray(self.parts, dtype=np.int64).reshape(-1, self.r)
        self.new_flags = np.asarray(self.new_flags, dtype=bool)

    @property
    def num_points(self):
        return len(self.phi)

    @property
    def num_parts(self):
        return len(self.parts)

    def live_points(self):
        return np.sort(self.parts.ravel())

    def occupancy(self):
        return np.bincount(self.phi[self.parts.ravel()], minlength=self.n)

    def deficiency(self, d):
        return int(np.maximum(0, d - self.occupancy()).sum())

    def copy(self):
        return PointSystem(self.n, self.r, self.phi.copy(), self.rank.copy(),
                           self.parts.copy(), self.new_flags.copy())

    def check(self):
        """Raise AssertionError if a structural invariant is broken."""
        live = self.parts.ravel()
        assert len(np.unique(live)) == len(live), "a point lies in two parts"
        assert self.parts.shape[1] == self.r
        assert len(self.phi) == len(self.rank) == len(self.new_flags)
        if len(live):
            assert live.min() >= 0 and live.max() < len(self.phi)
        assert self.occupancy().sum() == self.num_parts * self.r

    def canonical_partition(self):
        """The partition as a hashable set of frozensets of point ids."""
        return frozenset(frozenset(p) for p in self.parts.tolist())


def ranks_in_order(phi, n):
    """Rank of each point: how many points of its bucket have id <= its own."""
    phi = np.asarray(phi, dtype=np.int64)
    if len(phi) == 0:
        return np.zeros(0, dtype=np.int64)
    total = len(phi)
    # (bucket, id) packed into one key; plain sort beats a stable argsort here
    keys = np.sort(phi * total + np.arange(total))
    order = keys % total
    sorted_phi = keys // total
    starts = np.searchsorted(sorted_phi, sorted_phi, side="left")
    rank = np.empty(total, dtype=np.int64)
    rank[order] = np.arange(total) - starts + 1
    return rank


def sample_multi(n, m, r, rng):
    """H*_r(n, m) as a point system: rm points, uniform buckets, uniform partition."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    phi = rng.integers(0, n, size=r * m)
    parts = rng.permutation(r * m).reshape(m, r)
    return PointSystem(n, r, phi, ranks_in_order(phi, n), parts, np.zeros(r * m, dtype=bool))


def to_hypergraph(ps):
    """One edge per part: the multiset of buckets of its points."""
    return Hypergraph(ps.r, ps.n, ps.phi[ps.parts] if ps.num_parts else np.empty((0, ps.r), np.int64))


def strip(h):
    """Delete loops and every copy of a repeated edge.

    Returns ``(simple_h, loops_removed, multiedges_removed)``; the second count
    is the number of deleted copies, so a doubled edge contributes 2.
    """
    loops = h.loop_mask()
    keep = ~loops
    multi = 0
    if keep.any():
        idx = np.flatnonzero(keep)
        rows = h.edges[idx]
        if h.n ** h.r < 2**62:
            # one integer key per row; much faster than unique(axis=0)
            keys = np.zeros(len(rows), dtype=np.int64)
            for col in rows.T:
                keys = keys * h.n + col
            sk = np.sort(keys)
            repeated = sk[1:][sk[1:] == sk[:-1]]
            dup = np.isin(keys, repeated)
        else:
            _, inverse, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
            dup = counts[inverse.ravel()] > 1
        multi = int(dup.sum())
        keep[idx[dup]] = False
    return h.subhypergraph(keep), int(loops.sum()), multi


def trim(ps, d):
    """Delete every part containing a point of rank > d (and its points)."""
    if ps.num_parts == 0:
        return ps.copy()
    over = (ps.rank[ps.parts] > d).any(axis=1)
    out = ps.copy()
    out.parts = ps.parts[~over].copy()
    return out


# -- augmentation ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _new_point_splits(r, k):
    """All ways to split r new points into k unlabelled non-empty blocks of
    size <= r, with cumulative sampling weights.

    A split with block sizes j_1..j_k can be completed by the (k-1)r freed old
    points in ((k-1)r)! / prod (r - j_i)! ways, so drawing a split with weight
    prod 1/(r - j_i)! and then filling the vacant slots with a uniform shuffle
    of the old points gives every admissible partition the same probability.
    """
    splits = []
    for labels in itertools.product(range(k), repeat=r):
        # canonical labelling: first occurrences appear in increasing order
        seen = []
        for lab in labels:
            if lab not in seen:
                seen.append(lab)
        if len(seen) != k or seen != sorted(seen):
            continue
        blocks = [tuple(i for i in range(r) if labels[i] == b) for b in range(k)]
        splits.append(tuple(blocks))
    weights = [math.prod(1.0 / math.factorial(r - len(b)) for b in s) for s in splits]
    total = sum(weights)
    cdf = list(itertools.accumulate(w / total for w in weights))
    cdf[-1] = 1.0
    return tuple(splits), tuple(cdf)


def _pick(cdf, u):
    for i, c in enumerate(cdf):
        if u < c:
            return i
    return len(cdf) - 1


class _Augmenter:
    """Python-list working copy of a PointSystem for the augmentation loop."""

    def __init__(self, ps, d, rng, method="exact"):
        if method not in ("exact", "rejection"):
            raise ValueError(f"unknown repartition method {method!r}")
        self.n, self.r, self.d = ps.n, ps.r, d
        self.method = method
        self.phi = ps.phi.tolist()
        self.rank = ps.rank.tolist()
        self.new = ps.new_flags.tolist()
        self.parts = [tuple(p) for p in ps.parts.tolist()]
        self.occ = ps.occupancy().tolist()
        self.missing = sum(max(0, d - o) for o in self.occ)
        self.cursor = 0
        self.rand = random.Random(int(rng.integers(0, 2**63)))

    def step(self):
        r, d = self.r, self.d
        if self.missing < r:
            raise ValueError("fewer than r empty bucket slots remain")
        if self.missing % r:
            raise ValueError(f"total deficiency {self.missing} not divisible by r={r}")
        rnd = self.rand.random
        occ, phi = self.occ, self.phi
        fresh = []
        for _ in range(r):
            while occ[self.cursor] >= d:
                self.cursor += 1
            b = self.cursor
            occ[b] += 1
            fresh.append(len(phi))
            phi.append(b)
            self.rank.append(occ[b])
            self.new.append(True)
        self.missing -= r

        parts = self.parts
        k = _pick(qk_cdf(r, len(parts)), rnd()) + 1
        old = []
        for _ in range(k - 1):
            j = int(rnd() * len(parts))
            parts[j], parts[-1] = parts[-1], parts[j]
            old.extend(parts.pop())
        if self.method == "exact":
            created = self._repartition_exact(fresh, old, k)
        else:
            created = self._repartition_rejection(fresh, old, k)
        parts.extend(created)

    def _repartition_exact(self, fresh, old, k):
        r = self.r
        splits, cdf = _new_point_splits(r, k)
        blocks = splits[_pick(cdf, self.rand.random())]
        self.rand.shuffle(old)
        out = []
        pos = 0
        for b in blocks:
            take = r - len(b)
            out.append(tuple(fresh[i] for i in b) + tuple(old[pos:pos + take]))
            pos += take
        return out

    def _repartition_rejection(self, fresh, old, k):
        r = self.r
        pool = fresh + old
        is_new = set(fresh)
        while True:
            self.rand.shuffle(pool)
            out = [tuple(pool[i * r:(i + 1) * r]) for i in range(k)]
            if all(any(q in is_new for q in p) for p in out):
                return out

    def done(self):
        return self.missing == 0

    def to_point_system(self):
        parts = np.array(self.parts, dtype=np.int64).reshape(-1, self.r)
        return PointSystem(self.n, self.r, self.phi, self.rank, parts, self.new)


def augment_step(ps, d, rng, method="exact"):
    """One augmentation round on a copy of ``ps``: r new points, part count + 1.

    K ~ q(a) with a the current part count; K-1 uniformly chosen parts are
    dissolved and the freed points plus the new ones are re-partitioned into K
    parts, each holding at least one new point, uniformly among such
    partitions.  ``method="rejection"`` draws unconstrained uniform partitions
    until one qualifies; ``"exact"`` samples the same law directly.
    """
    aug = _Augmenter(ps, d, rng, method=method)
    aug.step()
    return aug.to_point_system()


def augment_to_regular(ps, d, rng, method="exact"):
    """Run augmentation rounds until every bucket holds exactly d points."""
    aug = _Augmenter(ps, d, rng, method=method)
    if any(o > d for o in aug.occ):
        raise ValueError("a bucket already holds more than d points; trim first")
    while not aug.done():
        aug.step()
    return aug.to_point_system()


# -- the d-regular model ----------------------------------------------------------


@dataclass(frozen=True)
class DegreeDiagnostics:
    s0: int
    s1: int
    s2: int
    m: int = 0
    M: int = 0
    loops_removed: int = 0
    multiedges_removed: int = 0


def initial_edge_count(n, d, r):
    """floor(((d - sqrt(d) ln d) / r) n), or 0 when d - sqrt(d) ln d <= 0."""
    target = d - math.sqrt(d) * math.log(d)
    if target <= 0:
        return 0
    return int(math.floor(target / r * n))


def degree_diagnostics(ps_before, ps_after, d, strip_counts=None):
    """Sizes of the low-degree bucket sets around the trimming step.

    s0: buckets with <= d - 3 sqrt(d) ln d points after trimming;
    s1: buckets with <= d - 2 sqrt(d) ln d points before trimming;
    s2: buckets that lost >= sqrt(d) ln d points to trimming.
    ``strip_counts`` is ``(m, M, loops_removed, multiedges_removed)``.
    """
    if ps_before.n != ps_after.n or not np.array_equal(ps_before.phi[:len(ps_after.phi)], ps_after.phi[:len(ps_before.phi)]):
        raise ValueError("point systems do not share a bucket assignment")
    scale = math.sqrt(d) * math.log(d)
    before = ps_before.occupancy()
    after = ps_after.occupancy()
    s0 = int((after <= d - 3 * scale).sum())
    s1 = int((before <= d - 2 * scale).sum())
    s2 = int((before - after >= scale).sum())
    m, M, loops, multi = strip_counts if strip_counts is not None else (ps_before.num_parts, 0, 0, 0)
    return DegreeDiagnostics(s0, s1, s2, m, M, loops, multi)


def sample_regular(n, d, r, rng, m=None, method="exact"):
    """Random r-uniform d-regular (multi)hypergraph via multi-sample, trim, augment.

    Returns ``(hypergraph, diagnostics, point_system)``.  Loops and repeated
    edges are kept; see ``sample_regular_simple`` for the conditioned variant.
    ``m`` overrides the initial edge count (``m=0`` is pure augmentation).
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if (n * d) % r:
        raise ValueError(f"r={r} must divide n*d={n * d}")
    if m is None:
        m = initial_edge_count(n, d, r)
    multi = sample_multi(n, m, r, rng)
    stripped, loops, multis = strip(to_hypergraph(multi))
    trimmed = trim(multi, d)
    diag = degree_diagnostics(multi, trimmed, d, (m, stripped.m, loops, multis))
    final = augment_to_regular(trimmed, d, rng, method=method)
    return to_hypergraph(final), diag, final


def sample_regular_simple(n, d, r, rng, max_tries=1000):
    """``sample_regular`` conditioned on a simple outcome, by rejection."""
    for _ in range(max_tries):
        out = sample_regular(n, d, r, rng)
        if out[0].is_simple():
            return out
    raise RuntimeError(f"no simple hypergraph in {max_tries} tries")


# -- binomial and uniform-m models ---------------------------------------------


def sample_uniform_m(n, m, r, rng):
    """m distinct r-subsets of [n], uniformly at random."""
    total = math.comb(n, r)
    if m > total:
        raise ValueError(f"m={m} exceeds C({n},{r})={total}")
    if m == 0:
        return Hypergraph(r, n, np.empty((0, r), np.int64))
    if total <= 2_000_000 or 2 * m > total:
        if total > 50_000_000:
            raise ValueError("dense uniform-m sampling too large to enumerate")
        combos = np.array(list(itertools.combinations(range(n), r)), dtype=np.int64)
        pick = rng.choice(total, size=m, replace=False)
        return Hypergraph(r, n, combos[np.sort(pick)])
    chosen = set()
    out = []
    while len(out) < m:
        batch = np.sort(rng.integers(0, n, size=(2 * (m - len(out)) + 16, r)), axis=1)
        ok = (batch[:, 1:] != batch[:, :-1]).all(axis=1)
        for e in map(tuple, batch[ok].tolist()):
            if e not in chosen:
                chosen.add(e)
                out.append(e)
                if len(out) == m:
                    break
    return Hypergraph(r, n, np.array(out, dtype=np.int64))


def sample_binomial(n, p, r, rng):
    """H_r(n, p): each r-subset independently with probability p."""
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} not a probability")
    m = int(rng.binomial(math.comb(n, r), p))
    return sample_uniform_m(n, m, r, rng)
