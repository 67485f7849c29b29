"""Invariants checked over generated graphs."""

from itertools import combinations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cliquesampler import (
    BaseSamplerConfig,
    Clique,
    Graph,
    Oracle,
    SamplerParams,
    assigned_pair,
    clique_less,
    enumerate_cliques,
    loads_graph,
    sample_clique,
    vertex_less,
)
from cliquesampler.edge_sampler import sample_basic_edges_batch
from cliquesampler.errors import BudgetExhausted
from cliquesampler.graph import dumps_graph
from cliquesampler.rng import make_np_rng, make_rng

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, sorted(chosen))


class SpyOracle(Oracle):
    def __init__(self, graph, budget=None):
        super().__init__(graph, budget)
        self.calls = 0

    def degree(self, v):
        self.calls += 1
        return super().degree(v)

    def neighbor(self, v, i):
        self.calls += 1
        return super().neighbor(v, i)

    def pair(self, u, v):
        self.calls += 1
        return super().pair(u, v)


@SETTINGS
@given(graphs())
def test_neighbor_multiset_is_the_neighborhood(g):
    o = Oracle(g)
    for v in g.vertices():
        got = sorted(o.neighbor(v, i) for i in range(1, o.degree(v) + 1))
        assert got == sorted(w for w in g.vertices() if w != v and g.has_edge(v, w))


@SETTINGS
@given(graphs())
def test_text_round_trip(g):
    assert loads_graph(dumps_graph(g)) == g


@SETTINGS
@given(graphs(), st.integers(2, 4), st.integers(0, 3))
def test_spy_total_matches_stats(g, k, seed):
    p = SamplerParams.for_graph(g, k, 0.25, tau=1.0, budget=400, seed=seed, unsafe_params=True)
    spy = SpyOracle(g)
    sample_clique(spy, p)
    assert spy.calls == spy.stats.total()


@SETTINGS
@given(graphs(), st.integers(0, 60), st.integers(0, 3))
def test_hard_budget_is_never_exceeded(g, budget, seed):
    o = Oracle(g, budget=budget)
    rng = make_rng(seed)
    cfg = BaseSamplerConfig(g.n, 1, 0.5, theta=1, unsafe=True)
    from cliquesampler import sample_basic_edge

    try:
        for _ in range(200):
            sample_basic_edge(o, cfg, rng)
    except BudgetExhausted:
        pass
    assert o.stats.total() <= budget


@SETTINGS
@given(graphs())
def test_vertex_order_is_strict_total(g):
    deg = g.degree
    vs = list(g.vertices())
    for u in vs:
        assert not vertex_less(u, u, deg)
        for v in vs:
            if u != v:
                assert vertex_less(u, v, deg) != vertex_less(v, u, deg)
            for w in vs:
                if vertex_less(u, v, deg) and vertex_less(v, w, deg):
                    assert vertex_less(u, w, deg)


@SETTINGS
@given(graphs(max_n=8), st.integers(1, 3))
def test_clique_order_is_strict_total(g, size):
    cl = enumerate_cliques(g, size)[:12]
    for a in cl:
        assert not clique_less(a, a)
        for b in cl:
            if a != b:
                assert clique_less(a, b) != clique_less(b, a)
            for c in cl:
                if clique_less(a, b) and clique_less(b, c):
                    assert clique_less(a, c)


@SETTINGS
@given(graphs(max_n=8), st.integers(2, 4))
def test_assigned_pair_degree_law(g, k):
    for c in enumerate_cliques(g, k):
        q1, q2 = assigned_pair(c)
        assert clique_less(q1, q2)
        rest = [c.without(i) for i in range(len(c))]
        others = [r for r in rest if r.vertices not in (q1.vertices, q2.vertices)]
        assert all(clique_less(q2, r) for r in others)
        assert q1.degree == c.degree
        if k >= 3:
            assert q2.degree == c.degree
        w = (set(c.vertices) - set(q1.vertices)).pop()
        assert c.degree <= g.degree(w)


def _shortcut(c: Clique):
    return c.without(len(c) - 1), c.without(len(c) - 2)


@SETTINGS
@given(graphs(max_n=8), st.integers(3, 4))
def test_shortcut_agrees_when_degrees_tie(g, k):
    for c in enumerate_cliques(g, k):
        if len(set(c.degrees)) == 1:
            assert {q.vertices for q in assigned_pair(c)} == {q.vertices for q in _shortcut(c)}


def test_shortcut_can_disagree():
    # K4 on {1, 2, 9, 10} with pendants making the order 10, 9, 2, 1. Dropping
    # 9 leaves the id sequence (10, 2, 1), which beats (10, 9, 1), so the
    # explicit pair keeps a sub-clique the drop-the-largest rule discards.
    edges = [(1, 2), (1, 9), (1, 10), (2, 9), (2, 10), (9, 10),
             (3, 9), (2, 4), (2, 5), (1, 6), (1, 7), (1, 8)]
    g = Graph(10, edges)
    c = Clique.of((1, 2, 9, 10), g.degree)
    assert c.vertices == (10, 9, 2, 1)
    explicit = {q.vertices for q in assigned_pair(c)}
    assert (10, 2, 1) in explicit
    assert explicit != {q.vertices for q in _shortcut(c)}


@SETTINGS
@given(graphs(), st.integers(0, 5))
def test_batch_returns_only_real_edges(g, seed):
    cfg = BaseSamplerConfig(g.n, 1, 0.5, theta=2, unsafe=True)
    res = sample_basic_edges_batch(g, cfg, make_np_rng(seed), 2000)
    for u, v in zip(res.tails.tolist(), res.heads.tolist()):
        assert g.has_edge(u, v)
