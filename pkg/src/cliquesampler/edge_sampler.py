"""Almost-uniform oriented-edge sampling on the input graph itself.

A walk of random length ``j`` in ``{0..s}`` starts from a low-degree vertex
(degree at most ``theta``) chosen with probability proportional to its degree,
then takes ``j`` uniform-neighbor steps, aborting if it ever lands back on a
low-degree vertex. Every oriented edge whose tail is low-degree is started
with probability exactly ``1 / (n * theta * (s + 1))``; that constant is the
normalization ``W`` exposed to callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .rng import uniform_index


def ceil_log2(x: float) -> int:
    if x <= 1:
        return 0
    if isinstance(x, int) or float(x).is_integer():
        return (int(x) - 1).bit_length()
    return math.ceil(math.log2(x))


@dataclass(frozen=True)
class BaseSamplerConfig:
    n: int
    alpha: float
    beta: float
    theta: int | None = None
    unsafe: bool = False
    s: int = field(init=False)

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ConfigError(f"beta must lie in (0, 1), got {self.beta}")
        if self.alpha <= 0:
            raise ConfigError("alpha must be positive")
        s = ceil_log2(self.n)
        object.__setattr__(self, "s", s)
        if self.theta is None:
            object.__setattr__(self, "theta", math.ceil(8 * self.alpha * (s + 1) / self.beta))
        if self.theta < 1:
            raise ConfigError("theta must be at least 1")
        # Relative slack absorbs rounding in beta / (2s+2) at the default theta.
        if not self.unsafe and self.theta * self.beta / (2 * s + 2) < 4 * self.alpha * (1 - 1e-12):
            raise ConfigError(
                f"theta={self.theta} violates theta*beta/(2s+2) >= 4*alpha "
                f"(needs theta >= {4 * self.alpha * (2 * s + 2) / self.beta:g})")

    @property
    def gamma_eff(self) -> float:
        return self.theta * (self.s + 1) / self.alpha

    @property
    def nominal_gamma(self) -> float:
        return 4 * math.log2(max(self.n, 2)) ** 2 / self.beta

    @property
    def normalization(self) -> int:
        return self.n * self.theta * (self.s + 1)

    @property
    def layering_beta(self) -> float:
        return self.beta / (2 * self.s + 2)


def normalization_w(config: BaseSamplerConfig) -> int:
    return config.normalization


def raw_basic_edge(oracle, config: BaseSamplerConfig, rng):
    """One attempt; returns ``(u, v, d(u))`` or ``None``.

    The tail's degree is always known by the time an edge is returned, so it is
    handed back to callers that need it instead of being queried again.
    """
    theta = config.theta
    j = uniform_index(rng, config.s + 1)
    u = oracle.uniform_vertex(rng)
    du = oracle.degree(u)
    if du > theta or rng.random() * theta >= du:
        return None
    v = oracle.neighbor(u, uniform_index(rng, du) + 1)
    for _ in range(j):
        u = v
        du = oracle.degree(u)
        if du <= theta:
            return None
        v = oracle.neighbor(u, uniform_index(rng, du) + 1)
    return u, v, du


def sample_basic_edge(oracle, config: BaseSamplerConfig, rng) -> tuple[int, int] | None:
    out = raw_basic_edge(oracle, config, rng)
    return None if out is None else (out[0], out[1])


def is_low_degree(oracle, config: BaseSamplerConfig, v: int) -> bool:
    """Membership test for the level-2 start set: a single degree query."""
    return oracle.degree(v) <= config.theta


@dataclass
class BatchResult:
    tails: np.ndarray
    heads: np.ndarray
    attempts: int
    degree_queries: int
    neighbor_queries: int


def sample_basic_edges_batch(graph, config: BaseSamplerConfig, rng: np.random.Generator,
                             size: int) -> BatchResult:
    """Vectorized twin of :func:`raw_basic_edge` run ``size`` times.

    Draws follow the same procedure attempt by attempt (walk length, start
    vertex, acceptance coin, neighbor ports), and query counts are the exact
    totals the scalar version would have charged. Only successes are returned.
    """
    indptr, indices, deg = graph.csr()
    theta = config.theta
    j = rng.integers(0, config.s + 1, size)
    u = rng.integers(1, graph.n + 1, size) if graph.n else np.zeros(size, dtype=np.int64)
    du = deg[u]
    coin = rng.random(size)
    ok = (du <= theta) & (coin * theta < du)
    live = np.flatnonzero(ok)
    degree_q = size
    neighbor_q = live.size
    tails = u[live]
    dl = du[live]
    heads = indices[indptr[tails] + (rng.random(live.size) * dl).astype(np.int64)]
    jj = j[live]
    done_t, done_h = [], []
    step = 0
    while tails.size:
        finished = jj == step
        done_t.append(tails[finished])
        done_h.append(heads[finished])
        keep = ~finished
        tails, heads, jj = tails[keep], heads[keep], jj[keep]
        if not tails.size:
            break
        step += 1
        dv = deg[heads]
        degree_q += heads.size
        alive = dv > theta
        tails, heads, jj, dv = heads[alive], heads[alive], jj[alive], dv[alive]
        neighbor_q += tails.size
        heads = indices[indptr[tails] + (rng.random(tails.size) * dv).astype(np.int64)]
    t = np.concatenate(done_t) if done_t else np.zeros(0, dtype=np.int64)
    h = np.concatenate(done_h) if done_h else np.zeros(0, dtype=np.int64)
    return BatchResult(t, h, size, int(degree_q), int(neighbor_q))
