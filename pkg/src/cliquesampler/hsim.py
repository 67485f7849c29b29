"""Simulated access to the clique graphs ``H_i`` for ``i >= 3``.

``H_i`` has a node per (i-1)-clique of G and an edge per i-clique, joining the
two sub-cliques the i-clique is assigned to. Nothing here materializes it:
membership in the low-degree start set, neighbor sampling and start-edge
sampling are all answered through degree/neighbor/pair queries on G.

The recurring quantity is the witness scale ``m(Q) = min(d(Q), sqrt(W))``
where ``W`` is the normalization of the base edge sampler used for witness
draws. One witness draw hits every vertex that extends ``Q`` to an assigned
clique with probability about ``1 / m(Q)``.
"""

from __future__ import annotations

import math
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .edge_sampler import BaseSamplerConfig, ceil_log2, raw_basic_edge
from .errors import ConfigError
from .order import Clique, assigned_extension, other_assigned
from .rng import make_rng, uniform_index


@dataclass(frozen=True)
class HEdge:
    """Oriented edge of ``H_i`` from ``tail`` to ``head``, carrying its i-clique."""

    tail: Clique
    head: Clique
    clique: Clique


class CliqueSource(Protocol):
    """Anything that returns i-cliques, each with probability ~ 1/clique_normalization."""

    clique_normalization: float

    def draw(self, oracle, rng) -> HEdge | None: ...


class BaseEdgeSource:
    """Edges of G from the base sampler, wrapped as ``H_2`` edges."""

    def __init__(self, config: BaseSamplerConfig):
        self.config = config
        # Each edge is returned in two orientations, each with probability 1/W.
        self.clique_normalization = config.normalization / 2

    def draw(self, oracle, rng) -> HEdge | None:
        out = raw_basic_edge(oracle, self.config, rng)
        if out is None:
            return None
        u, v, du = out
        dv = oracle.degree(v)
        cu, cv = Clique((u,), (du,)), Clique((v,), (dv,))
        both = Clique((u, v), (du, dv)) if (du, u) < (dv, v) else Clique((v, u), (dv, du))
        return HEdge(cu, cv, both)


@dataclass
class Diagnostics:
    """Counters and records shared by every level of one sampling session."""

    counters: Counter = field(default_factory=Counter)
    calibration: list = field(default_factory=list)
    transcript: list | None = None
    keep_calibration: bool = True

    def note(self, *event) -> None:
        if self.transcript is not None:
            self.transcript.append(event)


@dataclass
class HLevelContext:
    level: int
    n: int
    alpha: float
    tau: float
    beta: float
    delta: float | None = None
    source: CliqueSource | None = None
    figure_literal: bool = False
    degree_threshold: bool = False
    cache_size: int = 1 << 20
    node_seed: int = 0
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def __post_init__(self):
        if self.level < 3:
            raise ConfigError("simulated levels start at 3; level 2 is the base sampler")
        if self.tau <= 0:
            raise ConfigError("tau must be positive")
        if not 0 < self.beta < 1:
            raise ConfigError("beta must lie in (0, 1)")
        self.nbar = self.n * self.alpha ** (self.level - 1)
        self.s = ceil_log2(self.nbar)
        self.beta_prime = self.beta / (2 * self.s + 2)
        if self.delta is None:
            self.delta = self.beta_prime / (self.nbar * self.n * self.alpha ** (self.level - 1))
        self.delta_node = self.delta / self.nbar
        self.witness = BaseSamplerConfig(self.n, self.alpha, self.beta_prime / 3)
        self.m_cap = math.sqrt(self.witness.normalization)
        self.l0_draw_factor = 50 * math.log(1 / self.delta_node)
        self.nbr_draw_factor = 2 * math.log(3 / self.beta_prime)
        self.ext_probability = self.beta_prime / (6 * self.tau)
        self.cache: OrderedDict = OrderedDict()
        self.evictions = 0

    # -- normalizations

    @property
    def start_normalization(self) -> float:
        """X: each oriented edge out of a start node is drawn with probability ~1/X."""
        src = self.source.clique_normalization
        if self.figure_literal:
            b = self.beta_prime / 4
            return src * 40 * self.tau / b ** 2
        return src / self.ext_probability

    @property
    def edge_normalization(self) -> float:
        return self.start_normalization * (self.s + 1)

    @property
    def clique_normalization(self) -> float:
        return self.edge_normalization / 2

    # --

    def witness_scale(self, q: Clique) -> float:
        return min(q.degree, self.m_cap)

    def l0_draws(self, q: Clique) -> int:
        return math.ceil(self.witness_scale(q) / self.tau * self.l0_draw_factor)

    def neighbor_draws(self, q: Clique) -> int:
        return math.ceil(self.witness_scale(q) / self.tau * self.nbr_draw_factor)

    def l0_threshold(self, q: Clique) -> float:
        scale = q.degree if self.degree_threshold else self.witness_scale(q)
        return 1.5 * self.tau / scale

    def extension_rate(self, q: Clique) -> float:
        return self.witness_scale(q) * self.ext_probability


def witness_draw(oracle, ctx: HLevelContext, q: Clique, rng):
    """One attempt at a vertex extending ``q``; returns ``(w, d(w) or None)`` or ``None``.

    Low-degree ``q``: a uniform neighbor of its first vertex. High-degree ``q``:
    the tail of a base-sampler edge, kept with probability ``sqrt(W)/d(w)``
    when ``d(w) >= d(q)``. Assignment is left to the caller.
    """
    dq = q.degree
    if dq <= ctx.m_cap:
        if dq == 0:
            return None
        return oracle.neighbor(q.vertices[0], uniform_index(rng, dq) + 1), None
    out = raw_basic_edge(oracle, ctx.witness, rng)
    if out is None:
        return None
    w, _, dw = out
    if dw < dq or rng.random() * dw >= ctx.m_cap:
        return None
    return w, dw


def evaluate_l0(oracle, ctx: HLevelContext, q: Clique, rng) -> bool:
    """Fresh (uncached) start-set membership test: True means YES."""
    if q.degree == 0:
        return True
    r = ctx.l0_draws(q)
    hits = 0
    for _ in range(r):
        got = witness_draw(oracle, ctx, q, rng)
        if got is not None and assigned_extension(oracle, q, got[0], got[1]) is not None:
            hits += 1
    return hits / r < ctx.l0_threshold(q)


def is_l0(oracle, ctx: HLevelContext, q: Clique, rng) -> bool:
    """Memoized membership test; repeated calls for one node agree within a session.

    A node's verdict is drawn from a stream keyed by the context's node seed
    and the node itself, so it is a fixed function of the node: it does not
    depend on when the node is first met, and an evicted entry is recomputed
    to the same value.
    """
    cache = ctx.cache
    key = q.vertices
    verdict = cache.get(key)
    if verdict is not None:
        cache.move_to_end(key)
        return verdict
    verdict = evaluate_l0(oracle, ctx, q, make_rng(ctx.node_seed, f"{ctx.level}:{key}"))
    ctx.diagnostics.counters[f"l0_eval_{ctx.level}"] += 1
    cache[key] = verdict
    if len(cache) > ctx.cache_size:
        cache.popitem(last=False)
        ctx.evictions += 1
    return verdict


def sample_neighbor(oracle, ctx: HLevelContext, q: Clique, rng) -> HEdge | None:
    for _ in range(ctx.neighbor_draws(q)):
        got = witness_draw(oracle, ctx, q, rng)
        if got is None:
            continue
        c = assigned_extension(oracle, q, got[0], got[1])
        if c is not None:
            return HEdge(q, other_assigned(c, q), c)
    return None


def sample_l0_edge(oracle, ctx: HLevelContext, rng, source: CliqueSource | None = None) -> HEdge | None:
    """Oriented ``H_i`` edge out of a start node, each with probability ~1/X."""
    diag = ctx.diagnostics
    src = source if source is not None else ctx.source
    e = src.draw(oracle, rng)
    if e is None:
        diag.counters[f"source_fail_{ctx.level}"] += 1
        return None
    q = e.clique
    if not is_l0(oracle, ctx, q, rng):
        diag.counters[f"gate_no_{ctx.level}"] += 1
        return None
    if ctx.figure_literal:
        return _literal_extension(oracle, ctx, q, rng)
    y = ctx.extension_rate(q)
    if y <= 1:
        trials = 1 if rng.random() < y else 0
    else:
        whole = math.floor(y)
        trials = whole + (1 if rng.random() < y - whole else 0)
    if diag.keep_calibration:
        diag.calibration.append((ctx.level, q.vertices, ctx.witness_scale(q), y, trials))
    for _ in range(trials):
        got = witness_draw(oracle, ctx, q, rng)
        if got is None:
            continue
        c = assigned_extension(oracle, q, got[0], got[1])
        if c is not None:
            return HEdge(q, other_assigned(c, q), c)
    diag.counters[f"extension_fail_{ctx.level}"] += 1
    return None


def _literal_extension(oracle, ctx: HLevelContext, q: Clique, rng) -> HEdge | None:
    b = ctx.beta_prime / 4
    cut = 40 * ctx.tau / b ** 2
    if q.degree <= cut:
        if q.degree == 0 or rng.random() * cut >= q.degree:
            return None
        w = oracle.neighbor(q.vertices[0], uniform_index(rng, q.degree) + 1)
        c = assigned_extension(oracle, q, w)
        return None if c is None else HEdge(q, other_assigned(c, q), c)
    if rng.random() >= b ** 2 / 40:
        return None
    for _ in range(math.ceil(3 * ctx.witness_scale(q) / (b * ctx.tau))):
        got = witness_draw(oracle, ctx, q, rng)
        if got is None:
            continue
        c = assigned_extension(oracle, q, got[0], got[1])
        if c is not None:
            return HEdge(q, other_assigned(c, q), c)
    return None


# ------------------------------------------------------------ batched twins

def _extension_costs(graph, q: Clique):
    """Per-port (assigned flag, degree queries, pair queries) of one extension check."""
    from .graph import Oracle

    flags, degs, pairs = [], [], []
    for w in graph.neighbors(q.vertices[0]):
        probe = Oracle(graph)
        flags.append(assigned_extension(probe, q, w) is not None)
        degs.append(probe.stats.degree)
        pairs.append(probe.stats.pair)
    return (np.asarray(flags, dtype=np.int64), np.asarray(degs, dtype=np.int64),
            np.asarray(pairs, dtype=np.int64))


def evaluate_l0_batch(oracle, ctx: HLevelContext, q: Clique, np_rng: np.random.Generator,
                      evaluations: int, chunk: int = 2000) -> np.ndarray:
    """``evaluations`` independent fresh verdicts, with exact query charging.

    In the low-degree branch each draw is a uniform port of the first vertex,
    and whether it extends ``q`` is a fixed function of the port, so the draw
    counts per port are multinomial and hits and costs are dot products.
    Verdicts and charged queries have the same distribution as repeated
    :func:`evaluate_l0` calls. The high-degree branch runs the scalar procedure.
    """
    if q.degree == 0:
        return np.ones(evaluations, dtype=bool)
    r = ctx.l0_draws(q)
    threshold = ctx.l0_threshold(q)
    if q.degree > ctx.m_cap:
        py = make_rng(int(np_rng.integers(2 ** 62)), "l0-batch")
        return np.array([evaluate_l0(oracle, ctx, q, py) for _ in range(evaluations)])
    flags, degs, pairs = _extension_costs(oracle.graph, q)
    probs = np.full(q.degree, 1.0 / q.degree)
    out = np.empty(evaluations, dtype=bool)
    done = 0
    while done < evaluations:
        size = min(chunk, evaluations - done)
        counts = np_rng.multinomial(r, probs, size=size)
        per_port = counts.sum(axis=0)
        oracle.charge(neighbor=r * size, degree=int(per_port @ degs), pair=int(per_port @ pairs))
        out[done:done + size] = (counts @ flags) / r < threshold
        done += size
    return out
