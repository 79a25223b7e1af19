"""Exponential exact solvers for tiny hypergraphs; test oracles only."""
from __future__ import annotations

MAX_CHROMATIC_N = 14
MAX_ALPHA_N = 20


def _distinct_edges(h):
    return [tuple(sorted(set(e))) for e in h.edges.tolist()]


def exact_chromatic(h):
    """Minimum number of colors in a coloring with no monochromatic edge.

    Backtracking over vertices in degree-descending order; a vertex may only
    open one new color beyond those already used (removes palette symmetry).
    """
    if h.n > MAX_CHROMATIC_N:
        raise ValueError(f"exact_chromatic limited to n <= {MAX_CHROMATIC_N}, got n={h.n}")
    if h.n == 0:
        return 0
    edges = _distinct_edges(h)
    if any(len(e) == 1 for e in edges):
        raise ValueError("hypergraph has a full loop; no proper coloring exists")
    if not edges:
        return 1

    deg = [0] * h.n
    for e in edges:
        for v in e:
            deg[v] += 1
    order = sorted(range(h.n), key=lambda v: (-deg[v], v))
    pos = {v: i for i, v in enumerate(order)}
    # each edge is checked once, when its last vertex (in order) gets a color
    closing = [[] for _ in range(h.n)]
    for e in set(edges):
        last = max(e, key=pos.__getitem__)
        closing[pos[last]].append([w for w in e if w != last])

    color = [-1] * h.n

    def extend(i, used, k):
        if i == h.n:
            return True
        v = order[i]
        for c in range(min(used + 1, k)):
            if any(all(color[w] == c for w in rest) for rest in closing[i]):
                continue
            color[v] = c
            if extend(i + 1, max(used, c + 1), k):
                return True
        color[v] = -1
        return False

    for k in range(1, h.n + 1):
        if extend(0, 0, k):
            return k
    raise AssertionError("unreachable: n colors always suffice without full loops")


def exact_alpha(h):
    """Maximum size of a vertex set containing no edge, by branch and bound."""
    if h.n > MAX_ALPHA_N:
        raise ValueError(f"exact_alpha limited to n <= {MAX_ALPHA_N}, got n={h.n}")
    n = h.n
    closing = [[] for _ in range(n)]
    for e in set(_distinct_edges(h)):
        mask = 0
        for v in e:
            mask |= 1 << v
        closing[max(e)].append(mask)

    best = 0

    def search(i, chosen, size):
        nonlocal best
        if size + (n - i) <= best:
            return
        if i == n:
            best = size
            return
        with_i = chosen | (1 << i)
        if not any(mask & with_i == mask for mask in closing[i]):
            search(i + 1, with_i, size + 1)
        search(i + 1, chosen, size)

    search(0, 0, 0)
    return best
