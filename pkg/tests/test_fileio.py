import numpy as np
import pytest
from hypothesis import given, settings

from conftest import colored_hypergraphs, hypergraphs
from hypercolor.fileio import (
    format_coloring,
    format_hypergraph,
    parse_coloring,
    parse_hypergraph,
    read_coloring,
    read_hypergraph,
    write_coloring,
    write_hypergraph,
)
from hypercolor.hypergraph import UNCOLORED, Coloring, Hypergraph


def test_hypergraph_text():
    h = Hypergraph.from_edges(3, 4, [(0, 1, 2), (3, 3, 1)])
    assert format_hypergraph(h) == "3 4 2\n0 1 2\n1 3 3\n"


def test_coloring_text():
    assert format_coloring(Coloring([1, UNCOLORED, 0])) == "0 1\n1 -\n2 0\n"


@settings(max_examples=100, deadline=None)
@given(hypergraphs(max_n=9, max_m=12))
def test_hypergraph_round_trip(h):
    assert parse_hypergraph(format_hypergraph(h)) == h


@settings(max_examples=100, deadline=None)
@given(colored_hypergraphs())
def test_coloring_round_trip(hc):
    _, col = hc
    back = parse_coloring(format_coloring(col), palette_size=col.palette_size)
    assert back == col


def test_files(tmp_path):
    h = Hypergraph.from_edges(3, 5, [(0, 1, 2)])
    col = Coloring([0, 0, 1, UNCOLORED, 2])
    write_hypergraph(h, tmp_path / "h.txt")
    write_coloring(col, tmp_path / "c.txt")
    assert read_hypergraph(tmp_path / "h.txt") == h
    assert np.array_equal(read_coloring(tmp_path / "c.txt").colors, col.colors)


@pytest.mark.parametrize("text", [
    "", "3 4\n", "3 4 2\n0 1 2\n", "3 4 1\n0 1\n", "3 4 1\n0 1 9\n",
])
def test_bad_hypergraph_text(text):
    with pytest.raises(ValueError):
        parse_hypergraph(text)


@pytest.mark.parametrize("text", ["0 1\n0 2\n", "0 1\n2 1\n", "0\n"])
def test_bad_coloring_text(text):
    with pytest.raises(ValueError):
        parse_coloring(text)
