import math
from collections import Counter

import pytest

from cliquesampler import degeneracy, enumerate_cliques, gen_forest_union, gen_planted, verify_planted
from cliquesampler.errors import ParamError
from cliquesampler.generators import plan_d_block
from cliquesampler.graph import Graph


def test_forest_union_alpha_one_is_a_forest():
    g = gen_forest_union(50, 1, seed=3)
    assert g.m == 49
    assert degeneracy(g) == 1


def test_forest_union_counts():
    g = gen_forest_union(100, 3, 297, seed=0)
    assert g.m == 297
    assert degeneracy(g) <= 5


def test_forest_union_cap():
    with pytest.raises(ParamError):
        gen_forest_union(10, 2, 19)


def test_forest_union_deterministic():
    assert gen_forest_union(40, 2, seed=5) == gen_forest_union(40, 2, seed=5)
    assert gen_forest_union(40, 2, seed=5) != gen_forest_union(40, 2, seed=6)


def test_planted_shape():
    inst = gen_planted(100, 4, 3, 50, seed=7)
    g = inst.graph
    assert inst.ell == 20
    assert g.n == 260
    assert len(inst.blocks["C"]) == 40
    hist = Counter(g.degree(v) for v in inst.blocks["A"])
    assert hist == Counter({22: 20})
    assert {g.degree(v) for v in inst.blocks["B"]} == {4}
    assert {g.degree(v) for v in inst.blocks["C"]} == {1}
    assert verify_planted(inst)["pass"]


def test_planted_clique_total():
    inst = gen_planted(100, 4, 3, 50, seed=7)
    plan = inst.d_layout
    assert inst.achieved_nk == plan["d_cliques"] + 1
    assert len(enumerate_cliques(inst.graph, 3)) == inst.achieved_nk
    inst = gen_planted(64, 4, 3, 57, seed=1)
    assert inst.achieved_nk == 57 and inst.d_layout["copies"] == 1


def test_planted_degeneracy():
    inst = gen_planted(64, 4, 3, 57, seed=1)
    assert degeneracy(inst.graph) <= 2 * 4 - 1


def test_planted_deterministic():
    a = gen_planted(36, 4, 3, 10, seed=2)
    b = gen_planted(36, 4, 3, 10, seed=2)
    assert a.graph == b.graph and a.hidden == b.hidden
    assert a.dumps_key() == b.dumps_key()


def test_planted_params():
    with pytest.raises(ParamError):
        gen_planted(10, 4, 3, 1)
    with pytest.raises(ParamError):
        gen_planted(4, 1, 3, 1)
    with pytest.raises(ParamError):
        gen_planted(100, 4, 3, 0)


def test_plan_d_block_top_up():
    plan = plan_d_block(100, 4, 3, 50)
    assert plan["copies"] == 0 and plan["topup_size"] == 7 and plan["d_cliques"] == 35
    assert plan_d_block(100, 4, 3, 113)["copies"] == 2


def _mutate(inst, edges):
    from dataclasses import replace

    return replace(inst, graph=Graph(inst.graph.n, sorted(edges)))


def test_verify_detects_dropped_clique_edge():
    inst = gen_planted(36, 4, 3, 10, seed=2)
    h = sorted(inst.hidden)
    edges = [e for e in inst.graph.edges() if e != (h[0], h[1])]
    assert not verify_planted(_mutate(inst, edges))["pass"]


def test_verify_detects_wrong_b_degree():
    inst = gen_planted(36, 4, 3, 10, seed=2)
    b = inst.blocks["B"][0]
    edges = [e for e in inst.graph.edges() if b not in e or e != min(
        (x for x in inst.graph.edges() if b in x))]
    assert not verify_planted(_mutate(inst, edges))["pass"]


def test_verify_detects_duplicate_pendant():
    inst = gen_planted(36, 4, 3, 10, seed=2)
    g = inst.graph
    a = next(v for v in inst.blocks["A"] if v not in inst.hidden)
    c_of_a = [w for w in g.neighbors(a) if w in set(inst.blocks["C"])]
    other = next(v for v in inst.blocks["A"] if v not in inst.hidden and v != a)
    # Route one of a's pendants to a second A-vertex as well.
    edges = set(g.edges()) | {tuple(sorted((other, c_of_a[0])))}
    assert not verify_planted(_mutate(inst, edges))["pass"]
