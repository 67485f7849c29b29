import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from cliquesampler import BaseSamplerConfig, Graph, Oracle, normalization_w, sample_basic_edge
from cliquesampler.edge_sampler import ceil_log2, is_low_degree, sample_basic_edges_batch
from cliquesampler.errors import ConfigError
from cliquesampler.rng import make_np_rng, make_rng
from cliquesampler.validation import exact_base_distribution, exact_layering, graph_adjacency

from helpers import g1, path, star


def test_ceil_log2():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 1024, 1025)] == [0, 1, 2, 2, 3, 10, 11]
    assert ceil_log2(20.5) == 5


def test_reference_gamma():
    cfg = BaseSamplerConfig(1024, 1, 0.1)
    assert cfg.nominal_gamma == pytest.approx(4000)


def test_normalization_arithmetic():
    cfg = BaseSamplerConfig(4, 1, 0.5, theta=8, unsafe=True)
    assert cfg.s == 2
    assert normalization_w(cfg) == 96
    assert cfg.gamma_eff * cfg.n * cfg.alpha == 96


def test_default_theta_meets_invariant():
    for n, a, b in [(4, 1, 0.25), (50, 3, 0.1), (1000, 2, 0.01)]:
        cfg = BaseSamplerConfig(n, a, b)
        assert cfg.theta == math.ceil(8 * a * (cfg.s + 1) / b)
        assert cfg.theta * cfg.layering_beta >= 4 * a


def test_small_theta_rejected():
    with pytest.raises(ConfigError):
        BaseSamplerConfig(4, 1, 0.25, theta=10)
    BaseSamplerConfig(4, 1, 0.25, theta=10, unsafe=True)


def test_empty_graph_never_returns():
    g = Graph(6, [])
    cfg = BaseSamplerConfig(6, 1, 0.25)
    o, rng = Oracle(g), make_rng(0)
    assert all(sample_basic_edge(o, cfg, rng) is None for _ in range(2000))


def test_star_orientation_by_walk_length():
    g = star(4)
    cfg = BaseSamplerConfig(5, 1, 0.25, theta=2, unsafe=True)
    o = Oracle(g)
    assert not is_low_degree(o, cfg, 1)
    assert all(is_low_degree(o, cfg, v) for v in range(2, 6))
    exact = exact_base_distribution(g, cfg)
    into_centre = {e: p for e, p in exact.items() if e[1] == 1}
    out_of_centre = {e: p for e, p in exact.items() if e[0] == 1}
    # Leaves start walks; the centre is only ever left after one step.
    assert set(into_centre) == {(v, 1) for v in range(2, 6)}
    assert set(out_of_centre) == {(1, v) for v in range(2, 6)}
    w = Fraction(1, cfg.normalization)
    assert all(p == w for p in exact.values())


def test_exact_law_on_p3_is_pointwise_uniform():
    g = path(3)
    cfg = BaseSamplerConfig(3, 1, 0.25)
    exact = exact_base_distribution(g, cfg)
    assert set(exact) == {(1, 2), (2, 1), (2, 3), (3, 2)}
    assert all(p == Fraction(1, cfg.normalization) for p in exact.values())


def test_scalar_matches_exact_law_on_g1():
    g = g1()
    cfg = BaseSamplerConfig(5, 1, 0.5, theta=3, unsafe=True)
    exact = exact_base_distribution(g, cfg)
    o, rng = Oracle(g), make_rng(3)
    trials = 200_000
    hits = Counter(sample_basic_edge(o, cfg, rng) for _ in range(trials))
    for e, p in exact.items():
        p = float(p)
        sd = math.sqrt(p * (1 - p) / trials)
        assert abs(hits[e] / trials - p) <= 4.5 * sd, e


def test_query_cost_per_call():
    g = star(40)
    cfg = BaseSamplerConfig(41, 1, 0.25, theta=2, unsafe=True)
    rng = make_rng(9)
    for _ in range(3000):
        o = Oracle(g)
        sample_basic_edge(o, cfg, rng)
        assert o.stats.total() <= 2 * (cfg.s + 1) + 1


def test_batch_matches_scalar_distribution_and_costs():
    g = star(6)
    cfg = BaseSamplerConfig(7, 1, 0.5, theta=3, unsafe=True)
    exact = exact_base_distribution(g, cfg)
    res = sample_basic_edges_batch(g, cfg, make_np_rng(1), 400_000)
    hits = Counter(zip(res.tails.tolist(), res.heads.tolist()))
    for e, p in exact.items():
        p = float(p)
        sd = math.sqrt(p * (1 - p) / res.attempts)
        assert abs(hits[e] / res.attempts - p) <= 4.5 * sd
    # Scalar cost on the same number of attempts, to within sampling noise.
    o, rng = Oracle(g), make_rng(1)
    for _ in range(40_000):
        sample_basic_edge(o, cfg, rng)
    per_scalar = o.stats.total() / 40_000
    per_batch = (res.degree_queries + res.neighbor_queries) / res.attempts
    assert per_batch == pytest.approx(per_scalar, rel=0.02)


def test_depth_property_on_star():
    g = star(20)
    cfg = BaseSamplerConfig(21, 1, 0.25, theta=2, unsafe=True)
    adj = graph_adjacency(g)
    lay = exact_layering(adj, [v for v in g.vertices() if g.degree(v) <= cfg.theta], 0.1)
    assert lay.depth == 1 <= cfg.s
