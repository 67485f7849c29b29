"""Small graphs shared by the test modules."""

from __future__ import annotations

from itertools import combinations

from cliquesampler import Graph, gen_forest_union, gen_planted


def complete(n: int) -> Graph:
    return Graph(n, list(combinations(range(1, n + 1), 2)))


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def g1() -> Graph:
    """K4 on {1,2,3,4} with a pendant 5 hanging off vertex 1."""
    return Graph(5, list(combinations(range(1, 5), 2)) + [(1, 5)])


def structural_corpus() -> list[tuple[str, Graph, int]]:
    """(name, graph, arboricity bound) for the exhaustive structural checks."""
    out = [("G1", g1(), 2)]
    out += [(f"K{n}", complete(n), (n + 1) // 2) for n in range(4, 9)]
    for alpha in range(1, 5):
        for seed, n in enumerate((30, 45, 60, 80)):
            out.append((f"forest_a{alpha}_n{n}", gen_forest_union(n, alpha, seed=seed), alpha))
    out += [(f"star{m}", star(m), 1) for m in (3, 8, 20)]
    out += [(f"path{m}", path(m), 1) for m in (2, 10, 50)]
    out += [("cycle9", cycle(9), 2), ("empty5", Graph(5, []), 1)]
    planted = gen_planted(64, 4, 3, 57, seed=1)
    out.append(("planted_l16", planted.graph, 4))
    return out
