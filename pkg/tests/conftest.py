import functools
import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from hypercolor.coloring import greedy_independent_set, pipeline_chi_upper
from hypercolor.harness import derive_seed
from hypercolor.hypergraph import Coloring, Hypergraph, is_proper


def complete(n, r):
    return Hypergraph.from_edges(r, n, itertools.combinations(range(n), r))


@st.composite
def hypergraphs(draw, max_n=7, max_m=10, r=None, loops=True):
    r = draw(st.integers(2, 4)) if r is None else r
    n = draw(st.integers(1, max_n))
    if loops:
        edge = st.lists(st.integers(0, n - 1), min_size=r, max_size=r)
    else:
        if n < r:
            return Hypergraph(r, n, np.empty((0, r)))
        edge = st.lists(st.integers(0, n - 1), min_size=r, max_size=r, unique=True)
    edges = draw(st.lists(edge, max_size=max_m))
    return Hypergraph.from_edges(r, n, edges)


@st.composite
def colored_hypergraphs(draw, **kw):
    h = draw(hypergraphs(**kw))
    k = draw(st.integers(1, 4))
    colors = draw(st.lists(st.integers(0, k - 1), min_size=h.n, max_size=h.n))
    return h, Coloring(colors, palette_size=k)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- shared large pipeline runs --------------------------------------------------

BIG = dict(n=20001, d=100, r=3, eps=0.2)


@functools.lru_cache(maxsize=None)
def big_pipeline_trial(trial, master_seed=0):
    """One seeded pipeline run at the large setting, reduced to plain numbers.

    Cached so the acceptance module and the pipeline tests pay for each trial once.
    """
    rng = np.random.default_rng(derive_seed(master_seed, trial))
    res = pipeline_chi_upper(BIG["n"], BIG["d"], BIG["r"], BIG["eps"], rng)
    out = res.summary()
    h = res.hypergraph
    out["proper_checked"] = res.coloring is not None and is_proper(h, res.coloring)
    out["regular"] = bool((h.degrees() == BIG["d"]).all())
    out["alpha_greedy"] = len(greedy_independent_set(h, rng))
    return out
