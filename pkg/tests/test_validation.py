import math
from fractions import Fraction

import pytest

from cliquesampler import Graph, build_h, check_structural_claims, degeneracy, empirical_dist_test
from cliquesampler import enumerate_cliques, exact_layering
from cliquesampler.errors import PreconditionError
from cliquesampler.validation import (
    GroundTruth,
    count_cliques,
    exact_walk_distribution,
    graph_adjacency,
    wilson_interval,
)

from helpers import complete, cycle, g1, path, star


def sets(cliques):
    return sorted(sorted(c.vertices) for c in cliques)


def test_enumerate_examples():
    assert count_cliques(complete(4), 3) == 4
    assert sets(enumerate_cliques(g1(), 3)) == [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]
    bip = Graph(6, [(a, b) for a in (1, 2, 3) for b in (4, 5, 6)])
    assert enumerate_cliques(bip, 3) == []


def test_enumeration_is_ordered_and_verified():
    g = complete(6)
    cl = enumerate_cliques(g, 3)
    assert [c.key for c in cl] == sorted(c.key for c in cl)
    assert len({c.vertices for c in cl}) == len(cl) == 20


def test_h3_of_g1():
    h = build_h(g1(), 3)
    assert len(h.nodes) == 7
    got = sorted(sorted((sorted(a.vertices), sorted(b.vertices))) for a, b, _ in h.edges)
    assert got == [[[1, 2], [2, 3]], [[1, 2], [2, 4]], [[1, 3], [3, 4]], [[2, 3], [2, 4]]]


def test_d_tilde_of_g1():
    dt = {frozenset(k): v for k, v in build_h(g1(), 3).d_tilde.items()}
    assert dt[frozenset({2, 3})] == 2
    assert dt[frozenset({1, 4})] == 0
    assert dt[frozenset({1, 5})] == 0


def test_h2_is_the_graph():
    g = g1()
    h = build_h(g, 2)
    assert len(h.nodes) == g.n
    assert sorted(tuple(sorted(a.vertices + b.vertices)) for a, b, _ in h.edges) == sorted(g.edges())


def test_layering_examples():
    adj = graph_adjacency(star(4))
    lay = exact_layering(adj, [2, 3, 4, 5], 0.1)
    assert lay.layers[1] == [1] and lay.depth == 1
    assert exact_layering(adj, list(adj), 0.1).depth == 0
    g = Graph(3, [(1, 2)])
    lay = exact_layering(graph_adjacency(g), [1], 0.1)
    assert lay.isolated_by_convention == [3]


def test_layering_reports_unabsorbed():
    adj = graph_adjacency(cycle(6))
    lay = exact_layering(adj, [1], 0.1)
    assert lay.depth is None and set(lay.unabsorbed) == {2, 3, 4, 5, 6}


def test_degeneracy_examples():
    assert degeneracy(g1()) == 3
    assert degeneracy(path(10)) == 1
    assert degeneracy(complete(6)) == 5


def test_structural_claims_g1():
    rep = check_structural_claims(g1(), 2, 3)
    assert rep["pass"], rep["violations"]
    assert rep["checks"]["clique_degree_sum_3"]["lhs"] == 12
    assert rep["checks"]["clique_degree_sum_3"]["rhs"] == 40
    assert rep["checks"]["clique_count_ratio_3"]["rhs"] == pytest.approx(4 / 3 * 7)


def test_structural_claims_flag_small_alpha():
    rep = check_structural_claims(g1(), 0, 3)
    assert not rep["pass"]
    assert "clique_degree_sum_2" in rep["violations"]
    assert "h_density_2" in rep["violations"]


def test_structural_claims_empty_graph():
    assert check_structural_claims(Graph(0, []), 1, 3)["pass"]


def test_ground_truth_edge_counts():
    gt = GroundTruth.build(complete(5), 4)
    for i in range(2, 5):
        assert len(gt.h[i].edges) == gt.n_i(i)


def test_exact_walk_is_uniform_on_a_star():
    adj = graph_adjacency(star(4))
    dist = exact_walk_distribution(adj, [2, 3, 4, 5], 4, s=3)
    assert len(dist) == 8
    assert all(p == Fraction(1, 16) for p in dist.values())


def test_dist_test_uniform_and_skewed():
    assert empirical_dist_test([25000] * 4, 4, 0.01).passed
    bad = empirical_dist_test([40000, 20000, 20000, 20000], 4, 0.2)
    assert not bad.passed and bad.max_ratio == pytest.approx(1.6)
    with pytest.raises(PreconditionError):
        empirical_dist_test([10, 10, 10, 10], 4, 0.2)


def test_dist_test_slack_formula():
    rep = empirical_dist_test([1000] * 10, 10, 0.1, confidence=0.999)
    z = 3.2905267314919255
    assert rep.slack == pytest.approx(z * math.sqrt(0.1 * 0.9 / 10000) * 10)
    assert sum(rep.per_clique_count) == rep.total_returns


def test_wilson_interval_covers():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
