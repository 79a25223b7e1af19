import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from conftest import hypergraphs
from hypercolor.hypergraph import Hypergraph
from hypercolor.sampler import (
    PointSystem,
    _Augmenter,
    _new_point_splits,
    augment_step,
    augment_to_regular,
    degree_diagnostics,
    initial_edge_count,
    ranks_in_order,
    sample_binomial,
    sample_multi,
    sample_regular,
    sample_regular_simple,
    sample_uniform_m,
    strip,
    to_hypergraph,
    trim,
)


def all_partitions(points, r):
    """Every partition of ``points`` into blocks of size r, as frozensets."""
    points = list(points)
    if not points:
        return [frozenset()]
    first, rest = points[0], points[1:]
    out = []
    for mates in itertools.combinations(rest, r - 1):
        block = frozenset((first,) + mates)
        remaining = [p for p in rest if p not in mates]
        out.extend(sub | {block} for sub in all_partitions(remaining, r))
    return out


def chi2_uniform(counts, universe):
    obs = np.array([counts.get(p, 0) for p in universe], dtype=float)
    assert obs.sum() == sum(counts.values()), "sampled a partition outside the universe"
    return stats.chisquare(obs).pvalue


def empty_system(n, r):
    return PointSystem(n, r, [], [], np.empty((0, r)), [])


class TestRanks:
    def test_arrival_order(self):
        assert ranks_in_order([2, 0, 2, 2, 0], 3).tolist() == [1, 1, 2, 3, 2]

    def test_empty(self):
        assert ranks_in_order([], 4).tolist() == []


class TestSampleMulti:
    def test_single_full_loop(self, rng):
        ps = sample_multi(1, 1, 3, rng)
        assert ps.occupancy().tolist() == [3]
        assert to_hypergraph(ps).edges.tolist() == [[0, 0, 0]]

    def test_conservation(self, rng):
        ps = sample_multi(5, 10, 3, rng)
        ps.check()
        assert ps.occupancy().sum() == 30
        assert ps.parts.shape == (10, 3)

    def test_partition_uniform(self):
        rng = np.random.default_rng(21)
        universe = all_partitions(range(6), 3)
        assert len(universe) == 10
        counts = Counter(sample_multi(2, 2, 3, rng).canonical_partition() for _ in range(100_000))
        assert chi2_uniform(counts, universe) > 1e-3

    def test_bad_args(self, rng):
        with pytest.raises(ValueError):
            sample_multi(0, 1, 3, rng)


class TestToHypergraph:
    def test_loop_edge(self):
        ps = PointSystem(8, 3, [4, 4, 7], [1, 2, 1], [[0, 1, 2]], [False] * 3)
        assert to_hypergraph(ps).edges.tolist() == [[4, 4, 7]]

    def test_empty(self):
        assert to_hypergraph(empty_system(3, 3)).m == 0

    def test_multiplicity_kept(self):
        ps = PointSystem(3, 3, [0, 1, 2] * 2, [1, 1, 1, 2, 2, 2], [[0, 1, 2], [3, 4, 5]], [False] * 6)
        assert to_hypergraph(ps).edges.tolist() == [[0, 1, 2], [0, 1, 2]]


class TestStrip:
    def test_example(self):
        h = Hypergraph.from_edges(3, 5, [(0, 1, 2), (0, 1, 2), (3, 3, 4)])
        s, loops, multi = strip(h)
        assert s.m == 0 and (loops, multi) == (1, 2)

    def test_simple_unchanged(self):
        h = Hypergraph.from_edges(3, 5, [(0, 1, 2), (1, 2, 3)])
        s, loops, multi = strip(h)
        assert s == h and loops == multi == 0

    def test_wide_vertex_range(self):
        # n^r overflows int64 keys; the row-unique fallback must agree
        n = 2**22
        h = Hypergraph.from_edges(3, n, [(0, 1, n - 1), (0, 1, n - 1), (5, 6, 7)])
        s, loops, multi = strip(h)
        assert s.edges.tolist() == [[5, 6, 7]] and multi == 2

    @settings(max_examples=150, deadline=None)
    @given(hypergraphs(max_n=6, max_m=14))
    def test_idempotent_and_simple(self, h):
        s, loops, multi = strip(h)
        assert s.is_simple()
        assert loops + multi + s.m == h.m
        again, l2, m2 = strip(s)
        assert again == s and l2 == m2 == 0
        # reference: count each distinct loop-free row
        rows = Counter(tuple(e) for e in h.edges.tolist() if len(set(e)) == h.r)
        assert s.m == sum(1 for c in rows.values() if c == 1)


class TestTrim:
    def test_identity_when_small(self, rng):
        ps = sample_multi(50, 10, 3, rng)
        out = trim(ps, 100)
        assert np.array_equal(out.parts, ps.parts)

    def test_single_bucket(self, rng):
        ps = sample_multi(1, 2, 3, rng)
        out = trim(ps, 3)
        assert out.num_parts <= 1
        assert out.occupancy().max(initial=0) <= 3

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 8), st.integers(0, 25), st.integers(2, 4), st.integers(1, 6), st.integers(0, 2**32))
    def test_properties(self, n, m, r, d, seed):
        ps = sample_multi(n, m, r, np.random.default_rng(seed))
        out = trim(ps, d)
        out.check()
        assert (out.occupancy() <= d).all()
        assert (out.occupancy() <= ps.occupancy()).all()
        assert set(map(tuple, out.parts.tolist())) <= set(map(tuple, ps.parts.tolist()))
        kept = ~(ps.rank[ps.parts] > d).any(axis=1)
        assert out.num_parts == kept.sum()
        assert np.array_equal(trim(out, d).parts, out.parts)


class TestAugment:
    def test_first_step_forced(self, rng):
        out = augment_step(empty_system(3, 3), 1, rng)
        assert out.parts.tolist() == [[0, 1, 2]]
        assert out.new_flags.all()

    def test_part_count_and_occupancy(self):
        rng = np.random.default_rng(5)
        ps = trim(sample_multi(30, 40, 3, rng), 6)
        while ps.deficiency(6):
            out = augment_step(ps, 6, rng)
            out.check()
            assert out.num_parts == ps.num_parts + 1
            assert out.occupancy().sum() == ps.occupancy().sum() + 3
            ps = out
        assert (ps.occupancy() == 6).all()

    def test_indivisible_deficiency(self, rng):
        with pytest.raises(ValueError):
            augment_step(empty_system(2, 3), 2, rng)

    def test_overfull_rejected(self, rng):
        with pytest.raises(ValueError):
            augment_to_regular(sample_multi(1, 3, 3, rng), 3, rng)

    def test_new_points_fill_in_id_order(self, rng):
        out = augment_to_regular(empty_system(3, 3), 2, rng)
        assert out.phi.tolist() == [0, 0, 1, 1, 2, 2]
        assert out.rank.tolist() == [1, 2, 1, 2, 1, 2]

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_split_law_matches_enumeration(self, r):
        # new points 0..r-1, old points r..kr-1; count admissible partitions by split
        for k in range(1, r + 1):
            splits, cdf = _new_point_splits(r, k)
            if k == r:
                # one new point per part: the split is forced
                assert len(splits) == 1 and all(len(b) == 1 for b in splits[0])
                continue
            probs = np.diff([0.0, *cdf])
            tally = Counter()
            for part in all_partitions(range(k * r), r):
                if all(min(b) < r for b in part):
                    tally[frozenset(frozenset(x for x in b if x < r) for b in part)] += 1
            total = sum(tally.values())
            assert len(splits) == len(tally)
            for s, p in zip(splits, probs):
                key = frozenset(frozenset(b) for b in s)
                assert p == pytest.approx(tally[key] / total, rel=1e-12)

    @pytest.mark.parametrize("method", ["exact", "rejection"])
    def test_single_step_uniform(self, method):
        rng = np.random.default_rng(31)
        universe = all_partitions(range(6), 3)
        counts = Counter()
        start = PointSystem(2, 3, [0, 0, 0], [1, 2, 3], [[0, 1, 2]], [False] * 3)
        for _ in range(20_000):
            counts[augment_step(start, 3, rng, method=method).canonical_partition()] += 1
        assert chi2_uniform(counts, universe) > 1e-3

    def test_uniform_start_r2(self):
        # 6 points into pairs, one step from a uniform partition of 4 points
        rng = np.random.default_rng(32)
        universe = all_partitions(range(6), 2)
        counts = Counter()
        phi, rank = [0, 0, 1, 1], [1, 2, 1, 2]
        for _ in range(30_000):
            parts = rng.permutation(4).reshape(2, 2)
            ps = PointSystem(3, 2, phi, rank, parts, [False] * 4)
            counts[augment_step(ps, 2, rng).canonical_partition()] += 1
        assert chi2_uniform(counts, universe) > 1e-3

    @pytest.mark.slow
    def test_total_variation_eight_points(self):
        # pure augmentation of 8 points into pairs: 105 perfect matchings
        rng = np.random.default_rng(33)
        universe = all_partitions(range(8), 2)
        assert len(universe) == 105
        counts = Counter()
        start = empty_system(4, 2)
        samples = 1_000_000
        for _ in range(samples):
            aug = _Augmenter(start, 2, rng)
            while not aug.done():
                aug.step()
            counts[frozenset(frozenset(p) for p in aug.parts)] += 1
        assert sum(counts[p] for p in universe) == samples
        tv = 0.5 * sum(abs(counts[p] / samples - 1 / 105) for p in universe)
        assert tv < 0.01


class TestSampleRegular:
    def test_regular(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            h, diag, ps = sample_regular(300, 6, 3, rng)
            assert (h.degrees() == 6).all() and h.m == 600
            ps.check()

    def test_deterministic(self):
        a = sample_regular(90, 10, 3, np.random.default_rng(9))[0]
        b = sample_regular(90, 10, 3, np.random.default_rng(9))[0]
        assert a == b

    def test_exact_and_rejection_both_regular(self):
        for method in ("exact", "rejection"):
            h, _, _ = sample_regular(40, 9, 3, np.random.default_rng(4), method=method)
            assert (h.degrees() == 9).all()

    def test_indivisible(self, rng):
        with pytest.raises(ValueError):
            sample_regular(10, 5, 3, rng)

    def test_pure_augmentation_uniform(self):
        rng = np.random.default_rng(41)
        universe = all_partitions(range(6), 3)
        counts = Counter(sample_regular(2, 3, 3, rng, m=0)[2].canonical_partition()
                         for _ in range(20_000))
        assert chi2_uniform(counts, universe) > 1e-3

    def test_initial_edge_count(self):
        # sqrt(d) > ln d for all d, so the count is positive once n is large enough
        assert initial_edge_count(10, 3, 3) == 3
        assert initial_edge_count(1, 2, 3) == 0
        d = 100
        assert initial_edge_count(300, d, 3) == math.floor((d - 10 * math.log(d)) / 3 * 300)

    def test_simple_wrapper(self):
        h, _, _ = sample_regular_simple(60, 3, 3, np.random.default_rng(2))
        assert h.is_simple() and (h.degrees() == 3).all()

    def test_diagnostics_invariants(self):
        rng = np.random.default_rng(6)
        for n, d in [(500, 30), (200, 60), (1000, 9)]:
            _, diag, _ = sample_regular(n, d, 3, rng)
            assert diag.s0 <= diag.s1 + diag.s2
            assert 0 <= diag.M <= diag.m

    def test_diagnostics_without_trim(self, rng):
        ps = sample_multi(100, 50, 3, rng)
        diag = degree_diagnostics(ps, ps, 20)
        assert diag.s2 == 0 and diag.s0 <= diag.s1

    def test_diagnostics_mismatch(self, rng):
        with pytest.raises(ValueError):
            degree_diagnostics(sample_multi(5, 3, 3, rng), sample_multi(6, 3, 3, rng), 4)

    @pytest.mark.slow
    def test_low_buckets_rare(self):
        rng = np.random.default_rng(7)
        n, d, r = 100_000, 200, 3
        m = initial_edge_count(n, d, r)
        for _ in range(50):
            before = sample_multi(n, m, r, rng)
            diag = degree_diagnostics(before, trim(before, d), d)
            assert diag.s0 <= diag.s1 + diag.s2
            assert diag.s0 / n < 0.01


class TestOtherModels:
    def test_binomial_extremes(self, rng):
        assert sample_binomial(6, 0.0, 3, rng).m == 0
        full = sample_binomial(6, 1.0, 3, rng)
        assert sorted(map(tuple, full.edges.tolist())) == list(itertools.combinations(range(6), 3))

    def test_binomial_moments(self):
        rng = np.random.default_rng(12)
        counts = np.array([sample_binomial(10, 0.1, 3, rng).m for _ in range(10_000)])
        mean, sd = 120 * 0.1, math.sqrt(120 * 0.1 * 0.9)
        assert abs(counts.mean() - mean) <= 3 * sd / math.sqrt(len(counts))
        assert counts.var(ddof=1) == pytest.approx(sd**2, rel=0.1)

    def test_uniform_m_forced(self, rng):
        h = sample_uniform_m(5, 10, 3, rng)
        assert sorted(map(tuple, h.edges.tolist())) == list(itertools.combinations(range(5), 3))

    def test_uniform_m_too_many(self, rng):
        with pytest.raises(ValueError):
            sample_uniform_m(5, 11, 3, rng)

    def test_uniform_m_uniform(self):
        rng = np.random.default_rng(13)
        counts = Counter(frozenset(map(tuple, sample_uniform_m(5, 2, 3, rng).edges.tolist()))
                         for _ in range(20_000))
        universe = [frozenset(p) for p in itertools.combinations(itertools.combinations(range(5), 3), 2)]
        assert len(universe) == 45
        obs = np.array([counts[u] for u in universe])
        assert obs.sum() == 20_000
        assert stats.chisquare(obs).pvalue > 1e-3

    def test_uniform_m_sparse_path(self):
        rng = np.random.default_rng(14)
        h = sample_uniform_m(1000, 500, 3, rng)  # C(1000,3) is large: rejection path
        assert h.m == 500 and h.is_simple()
