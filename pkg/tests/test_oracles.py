import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import complete, hypergraphs
from hypercolor.coloring import greedy_color, greedy_independent_set
from hypercolor.hypergraph import Coloring, Hypergraph, is_independent, is_proper
from hypercolor.oracles import exact_alpha, exact_chromatic


def brute_chromatic(h):
    for k in range(1, h.n + 1):
        for c in itertools.product(range(k), repeat=h.n):
            if is_proper(h, Coloring(list(c), palette_size=k)):
                return k
    return None


def brute_alpha(h):
    for size in range(h.n, -1, -1):
        if any(is_independent(h, s) for s in itertools.combinations(range(h.n), size)):
            return size


class TestKnownValues:
    def test_single_edge(self):
        h = Hypergraph.from_edges(3, 3, [(0, 1, 2)])
        assert exact_chromatic(h) == 2
        assert exact_alpha(h) == 2

    def test_k4_3(self):
        h = complete(4, 3)
        assert exact_chromatic(h) == 2
        assert exact_alpha(h) == 2

    def test_k5_3(self):
        # K_5^(3): two color classes of size <= 2 cover only 4 vertices
        h = complete(5, 3)
        assert exact_chromatic(h) == 3
        assert exact_alpha(h) == 2

    def test_edgeless(self):
        h = Hypergraph(3, 5, np.empty((0, 3)))
        assert exact_chromatic(h) == 1
        assert exact_alpha(h) == 5

    def test_full_loop(self):
        with pytest.raises(ValueError):
            exact_chromatic(Hypergraph.from_edges(3, 2, [(0, 0, 0)]))

    def test_guards(self):
        big = Hypergraph(3, 21, np.empty((0, 3)))
        with pytest.raises(ValueError):
            exact_chromatic(big)
        with pytest.raises(ValueError):
            exact_alpha(big)


@settings(max_examples=120, deadline=None)
@given(hypergraphs(max_n=6, max_m=8, r=3, loops=False))
def test_exact_matches_brute_force(h):
    assert exact_chromatic(h) == brute_chromatic(h)
    assert exact_alpha(h) == brute_alpha(h)


@settings(max_examples=200, deadline=None)
@given(hypergraphs(max_n=8, max_m=12, loops=False))
def test_greedy_bounded_by_exact(h):
    rng = np.random.default_rng(h.m)
    col = greedy_color(h, rng=rng)
    assert is_proper(h, col)
    assert col.num_colors_used() >= exact_chromatic(h)
    s = greedy_independent_set(h, rng)
    assert is_independent(h, s)
    assert len(s) <= exact_alpha(h)
