"""Brute-force ground truth and the statistical checks that judge the samplers.

Everything here reads the graph directly (no oracle, no query charges) and is
allowed superlinear time.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import PreconditionError
from .graph import Graph
from .order import Clique, assigned_pair
from .rng import uniform_index


# ---------------------------------------------------------------- cliques

def _clique_sets(graph: Graph, k: int) -> list[tuple[int, ...]]:
    if k <= 0:
        return []
    if k == 1:
        return [(v,) for v in graph.vertices()]
    out: list[tuple[int, ...]] = []
    later = [None] + [frozenset(w for w in graph.neighbors(v) if w > v) for v in graph.vertices()]

    def grow(members: tuple[int, ...], cand: frozenset) -> None:
        if len(members) == k:
            out.append(members)
            return
        need = k - len(members)
        for w in sorted(cand):
            rest = cand & later[w]
            if len(rest) >= need - 1:
                grow(members + (w,), rest)

    for v in graph.vertices():
        if len(later[v]) >= k - 1:
            grow((v,), later[v])
    return out


def enumerate_cliques(graph: Graph, k: int) -> list[Clique]:
    """All k-cliques, each verified, ordered by clique key."""
    cl = [Clique.of(c, graph.degree) for c in _clique_sets(graph, k)]
    for c in cl:
        vs = c.vertices
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                if not graph.has_edge(vs[a], vs[b]):
                    raise AssertionError(f"non-clique {vs} produced")
    cl.sort(key=lambda c: c.key)
    return cl


def count_cliques(graph: Graph, k: int) -> int:
    return len(_clique_sets(graph, k))


def degeneracy(graph: Graph) -> int:
    """Largest minimum degree seen while repeatedly deleting a minimum-degree vertex."""
    n = graph.n
    if n == 0:
        return 0
    deg = list(graph.degrees)
    maxd = max(deg[1:], default=0)
    buckets: list[set[int]] = [set() for _ in range(maxd + 1)]
    for v in graph.vertices():
        buckets[deg[v]].add(v)
    removed = [False] * (n + 1)
    best = 0
    d = 0
    for _ in range(n):
        d = max(d - 1, 0)
        while not buckets[d]:
            d += 1
        v = min(buckets[d])
        buckets[d].discard(v)
        removed[v] = True
        best = max(best, d)
        for w in graph.neighbors(v):
            if not removed[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets[deg[w]].add(w)
    return best


# ---------------------------------------------------------------- H graphs

@dataclass
class HGraph:
    """Explicit ``H_i``: nodes are (i-1)-cliques, edges carry their i-clique."""

    level: int
    nodes: list[Clique]
    edges: list[tuple[Clique, Clique, Clique]]
    adjacency: dict[tuple, list[tuple]] = field(default_factory=dict)

    @property
    def d_tilde(self) -> dict[tuple, int]:
        return {q: len(a) for q, a in self.adjacency.items()}

    def oriented_edges(self) -> list[tuple[tuple, tuple]]:
        out = []
        for q1, q2, _ in self.edges:
            out.append((q1.vertices, q2.vertices))
            out.append((q2.vertices, q1.vertices))
        return out

    def clique_of(self) -> dict[tuple, Clique]:
        """Map each oriented edge ``(tail, head)`` to its clique."""
        out = {}
        for q1, q2, c in self.edges:
            out[(q1.vertices, q2.vertices)] = c
            out[(q2.vertices, q1.vertices)] = c
        return out


def build_h(graph: Graph, i: int, cliques: Sequence[Clique] | None = None,
            nodes: Sequence[Clique] | None = None) -> HGraph:
    if i < 2:
        raise ValueError("H graphs start at level 2")
    if nodes is None:
        nodes = enumerate_cliques(graph, i - 1)
    if cliques is None:
        cliques = enumerate_cliques(graph, i)
    adjacency: dict[tuple, list[tuple]] = {q.vertices: [] for q in nodes}
    edges = []
    for c in cliques:
        q1, q2 = assigned_pair(c)
        edges.append((q1, q2, c))
        adjacency[q1.vertices].append(q2.vertices)
        adjacency[q2.vertices].append(q1.vertices)
    return HGraph(i, list(nodes), edges, adjacency)


# ---------------------------------------------------------------- layering

@dataclass
class Layering:
    layers: list[list]
    unabsorbed: list
    isolated_by_convention: list

    @property
    def depth(self) -> int | None:
        """Index of the last layer, or ``None`` when some node is never absorbed."""
        return None if self.unabsorbed else len(self.layers) - 1


def exact_layering(adjacency: Mapping, l0: Iterable, beta: float) -> Layering:
    """Peel layers: a node joins ``L_j`` once more than ``(1-beta)`` of its
    neighbors lie in earlier layers.

    A degree-0 node outside ``L0`` can never meet the strict inequality; it is
    placed in ``L1`` and reported in ``isolated_by_convention``.
    """
    l0 = [v for v in adjacency if v in set(l0)]
    placed = set(l0)
    layers = [l0]
    isolated = []
    while True:
        layer = []
        for v, nbrs in adjacency.items():
            if v in placed:
                continue
            if not nbrs:
                if len(layers) == 1:
                    layer.append(v)
                    isolated.append(v)
                continue
            inside = sum(1 for w in nbrs if w in placed)
            if inside > (1 - beta) * len(nbrs):
                layer.append(v)
        if not layer:
            break
        placed.update(layer)
        layers.append(layer)
    rest = [v for v in adjacency if v not in placed]
    return Layering(layers, rest, isolated)


def graph_adjacency(graph: Graph) -> dict[int, list[int]]:
    return {v: list(graph.neighbors(v)) for v in graph.vertices()}


# ---------------------------------------------------------------- ground truth

@dataclass
class GroundTruth:
    graph: Graph
    k: int
    cliques: dict[int, list[Clique]]
    h: dict[int, HGraph]
    degeneracy: int

    @classmethod
    def build(cls, graph: Graph, k: int) -> "GroundTruth":
        cliques = {i: enumerate_cliques(graph, i) for i in range(1, k + 1)}
        h = {i: build_h(graph, i, cliques[i], cliques[i - 1]) for i in range(2, k + 1)}
        return cls(graph, k, cliques, h, degeneracy(graph))

    def n_i(self, i: int) -> int:
        return len(self.cliques[i])

    def summary(self) -> dict:
        out = {"n": self.graph.n, "m": self.graph.m, "degeneracy": self.degeneracy,
               "clique_counts": {f"n_{i}": self.n_i(i) for i in range(1, self.k + 1)},
               "h": {}}
        for i, h in self.h.items():
            hist = Counter(h.d_tilde.values())
            out["h"][f"H_{i}"] = {"nodes": len(h.nodes), "edges": len(h.edges),
                                  "d_tilde_histogram": {str(d): hist[d] for d in sorted(hist)}}
        return out


def check_assignment_law(gt: GroundTruth) -> list[str]:
    """Both assigned sub-cliques share the clique's degree, which is at most the
    degree of the vertex each one is missing.

    For edges the pair is the two endpoints, so only the smaller endpoint
    carries the edge's degree; the law is checked on that one.
    """
    bad = []
    for i in range(2, gt.k + 1):
        for c in gt.cliques[i]:
            pair = assigned_pair(c)
            for q in (pair[:1] if i == 2 else pair):
                missing = [v for v in c.vertices if v not in q.vertices]
                if len(missing) != 1:
                    bad.append(f"{c.sorted_ids()}: sub-clique {q.sorted_ids()} malformed")
                    continue
                dw = gt.graph.degree(missing[0])
                if not (q.degree == c.degree <= dw):
                    bad.append(f"{c.sorted_ids()}: d(Q)={q.degree}, d(C)={c.degree}, d(w)={dw}")
    return bad


def check_h_bijection(gt: GroundTruth) -> list[str]:
    bad = []
    for i, h in gt.h.items():
        seen = {}
        for q1, q2, c in h.edges:
            pair = frozenset((q1.vertices, q2.vertices))
            if pair in seen:
                bad.append(f"H_{i}: edge {sorted(pair)} carries two cliques")
            seen[pair] = c
            if set(q1.vertices) | set(q2.vertices) != set(c.vertices) or q1 == q2:
                bad.append(f"H_{i}: edge does not join two sub-cliques of {c.sorted_ids()}")
        if len(seen) != len(gt.cliques[i]):
            bad.append(f"H_{i}: {len(seen)} edges for {len(gt.cliques[i])} cliques")
    return bad


def check_structural_claims(graph: Graph, alpha: float, k: int,
                            depth_betas: Sequence[float] = (0.5, 0.25, 0.1),
                            gt: GroundTruth | None = None) -> dict:
    """Evaluate the counting, density and layering inequalities exactly."""
    if gt is None:
        gt = GroundTruth.build(graph, k)
    n = graph.n
    checks: dict[str, dict] = {}
    side: dict[str, dict] = {}

    def record(name: str, holds: bool, **detail) -> None:
        checks[name] = {"holds": bool(holds), **detail}

    for i in range(2, k + 1):
        total = sum(c.degree for c in gt.cliques[i])
        record(f"clique_degree_sum_{i}", total <= n * alpha ** i, lhs=total, rhs=n * alpha ** i)
        # Edge-count form of the same bound; reported but not part of the verdict.
        side[f"clique_degree_sum_edges_{i}"] = {
            "holds": total <= 2 * graph.m * alpha ** (i - 1), "lhs": total,
            "rhs": 2 * graph.m * alpha ** (i - 1)}
        prev = gt.n_i(i - 1)
        record(f"clique_count_ratio_{i}", gt.n_i(i) <= 2 * alpha / i * prev,
               lhs=gt.n_i(i), rhs=2 * alpha / i * prev)
        h = gt.h[i]
        nv, ne = len(h.nodes), len(h.edges)
        record(f"h_density_{i}", ne <= alpha * nv, lhs=ne, rhs=alpha * nv)
        record(f"h_size_{i}", nv <= n * alpha ** (i - 1), lhs=nv, rhs=n * alpha ** (i - 1))
        dt = h.d_tilde
        for beta in depth_betas:
            tau = 4 * alpha / beta
            lay = exact_layering(h.adjacency, [q for q, d in dt.items() if d <= tau], beta)
            bound = math.ceil(math.log2(nv)) if nv > 1 else 0
            ok = lay.depth is not None and lay.depth <= bound
            record(f"layering_depth_{i}_beta{beta:g}", ok, depth=lay.depth, bound=bound)
    law = check_assignment_law(gt)
    record("assignment_degree_law", not law, violations=law[:10])
    bij = check_h_bijection(gt)
    record("h_edge_clique_bijection", not bij, violations=bij[:10])
    lower = math.ceil(graph.m / (n - 1)) if n > 1 else 0
    record("degeneracy_vs_density", gt.degeneracy >= lower, degeneracy=gt.degeneracy, lower=lower)
    violations = [name for name, c in checks.items() if not c["holds"]]
    return {"alpha": alpha, "k": k, "checks": checks, "violations": violations,
            "pass": not violations, "diagnostics": side}


# ---------------------------------------------------------------- exact walks

def exact_walk_distribution(adjacency: Mapping, l0: Iterable, start_normalization,
                            s: int) -> dict[tuple, Fraction]:
    """Exact return probability of every oriented edge under ideal sub-oracles.

    The walk picks ``j`` uniformly in ``{0..s}``, starts on each oriented edge
    out of ``l0`` with probability ``1/start_normalization``, then takes ``j``
    uniform-neighbor steps, failing on re-entry into ``l0``. Probabilities are
    accumulated layer by layer over walk steps, which is the same sum as
    enumerating every walk.
    """
    l0 = set(l0)
    x = Fraction(start_normalization)
    current = {}
    for u, nbrs in adjacency.items():
        if u in l0:
            for v in nbrs:
                current[(u, v)] = 1 / x
    total = Counter(current)
    for _ in range(s):
        arriving: dict = {}
        for (u, v), p in current.items():
            arriving[v] = arriving.get(v, 0) + p
        nxt = {}
        for v, p in arriving.items():
            if v in l0:
                continue
            nbrs = adjacency[v]
            for w in nbrs:
                nxt[(v, w)] = p / len(nbrs)
        current = nxt
        for e, p in current.items():
            total[e] += p
    return {e: Fraction(p) / (s + 1) for e, p in total.items()}


def exact_base_distribution(graph: Graph, config) -> dict[tuple[int, int], Fraction]:
    """Exact output law of the base edge sampler: start mass ``1/(n*theta)`` per
    low-degree oriented edge, then the walk above."""
    adj = graph_adjacency(graph)
    l0 = [v for v in graph.vertices() if graph.degree(v) <= config.theta]
    return exact_walk_distribution(adj, l0, graph.n * config.theta, config.s)


class ExactCliqueSource:
    """Ideal source: every i-clique with probability exactly ``success/len(cliques)``."""

    def __init__(self, cliques: Sequence[Clique], success: float = 1.0):
        if not cliques:
            raise PreconditionError("an exact source needs at least one clique")
        self.cliques = list(cliques)
        self.success = success
        self.clique_normalization = len(self.cliques) / success

    def draw(self, oracle, rng):
        from .hsim import HEdge

        if self.success < 1 and rng.random() >= self.success:
            return None
        c = self.cliques[uniform_index(rng, len(self.cliques))]
        q1, q2 = assigned_pair(c) if len(c) >= 2 else (c, c)
        return HEdge(q1, q2, c)


# ---------------------------------------------------------------- statistics

@dataclass
class DistReport:
    per_clique_count: list[int]
    total_returns: int
    n_k: int
    epsilon: float
    confidence: float
    slack: float
    max_ratio: float
    min_ratio: float
    chi_square: float
    chi_square_p: float
    passed: bool

    def to_dict(self) -> dict:
        return {"per_clique_count": self.per_clique_count, "total_returns": self.total_returns,
                "n_k": self.n_k, "epsilon": self.epsilon, "confidence": self.confidence,
                "slack": round(self.slack, 9), "max_ratio": round(self.max_ratio, 9),
                "min_ratio": round(self.min_ratio, 9), "chi_square": round(self.chi_square, 9),
                "chi_square_p": round(self.chi_square_p, 9), "pass": self.passed}


def empirical_dist_test(counts: Sequence[int] | Mapping, n_k: int, epsilon: float,
                        confidence: float = 0.999) -> DistReport:
    """Pointwise check: every clique's frequency times ``n_k`` within ``1 +- (eps + slack)``."""
    if isinstance(counts, Mapping):
        values = list(counts.values())
        if len(values) > n_k:
            raise PreconditionError("more distinct outcomes than cliques")
        values += [0] * (n_k - len(values))
    else:
        values = list(counts)
        if len(values) != n_k:
            raise PreconditionError(f"expected {n_k} counts, got {len(values)}")
    if n_k < 1:
        raise PreconditionError("no cliques to test against")
    t = int(sum(values))
    if t < 100 * n_k:
        raise PreconditionError(f"{t} returns is below the floor of {100 * n_k}")
    arr = np.asarray(values, dtype=float)
    ratios = arr / t * n_k
    z = stats.norm.ppf(1 - (1 - confidence) / 2)
    slack = z * math.sqrt((1 / n_k) * (1 - 1 / n_k) / t) * n_k
    if n_k > 1:
        chi, p = stats.chisquare(arr)
    else:
        chi, p = 0.0, 1.0
    ok = bool(np.all(np.abs(ratios - 1) <= epsilon + slack))
    return DistReport([int(v) for v in values], t, n_k, epsilon, confidence, float(slack),
                      float(ratios.max()), float(ratios.min()), float(chi), float(p), ok)


def wilson_interval(hits: int, trials: int, z: float = 4.0) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = hits / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return centre - half, centre + half
