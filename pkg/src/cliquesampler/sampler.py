"""Random walks on the clique graphs and the top-level clique sampler.

``sample_edge`` at level ``i`` starts on an edge out of the low-degree set of
``H_i`` (drawn by recursing to level ``i-1`` and extending), walks ``j``
uniform-neighbor steps, and aborts if it re-enters the low-degree set. An
``H_k`` edge is exactly a k-clique of G, so ``sample_clique`` repeats that
until it gets one or runs out of query budget.

Accuracy parameters shrink down the recursion: level ``k`` runs at
``eps / (10k)``, its walk steps and start edges use ``beta' = beta / (2s+2)``,
and the level below runs at ``beta' / 4``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .edge_sampler import BaseSamplerConfig, ceil_log2
from .errors import BudgetExhausted, ParamError, RegimeUnsupported
from .graph import QueryStats
from .hsim import (
    BaseEdgeSource,
    Diagnostics,
    HEdge,
    HLevelContext,
    is_l0,
    sample_l0_edge,
    sample_neighbor,
)
from .rng import make_rng, uniform_index

FAIL_WALK = "WalkAborted"
FAIL_NO_L0 = "NoL0Edge"
FAIL_BUDGET = "BudgetExhausted"


def fixed(x):
    """Round floats recursively so JSON output is stable across platforms."""
    if isinstance(x, float):
        return round(x, 9) if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {k: fixed(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fixed(v) for v in x]
    return x


# ---------------------------------------------------------------- parameters

def beta_schedule(k: int, epsilon: float, n: int, alpha: float) -> list[dict]:
    """Accuracy per level, top level first."""
    out = []
    beta = epsilon / (10 * k)
    for i in range(k, 1, -1):
        nbar = n if i == 2 else n * alpha ** (i - 1)
        s = ceil_log2(nbar)
        beta_prime = beta / (2 * s + 2)
        out.append({"level": i, "beta": beta, "s": s, "beta_prime": beta_prime})
        beta = beta_prime / 4
    return out


def default_tau(n: int, alpha: float, k: int, epsilon: float, nk_bar: float,
                exponent: str = "balance") -> float:
    """Threshold balancing the two budget terms, floored and capped to the valid range.

    ``exponent="balance"`` uses ``1/(k-1)``, which makes
    ``n alpha tau^(k-2) / nk_bar`` equal ``sqrt(n alpha) / tau``;
    ``exponent="inverse-k"`` uses ``1/k`` instead.
    """
    if nk_bar < 1:
        raise ParamError("nk_bar must be at least 1")
    na = n * alpha
    floor = (alpha / epsilon) * (4 * k * math.log2(max(n, 2))) ** k
    e = 1 / (k - 1) if exponent == "balance" else 1 / k
    balance = nk_bar ** e / na ** (1 / (2 * (k - 1)))
    return min(max(floor, balance), math.sqrt(na))


def regime_floor(n: int, alpha: float, k: int, epsilon: float) -> float:
    return (alpha / epsilon) * (4 * k * math.log2(max(n, 2))) ** k


def default_delta(level: int, n: int, alpha: float, k: int, beta: float, beta_prime: float) -> float:
    """Smaller of the two failure budgets the walk analysis asks for.

    Only ``log(1/delta)`` enters the cost, so taking the minimum is cheap.
    """
    nbar = n * alpha ** (level - 1)
    by_size = beta_prime / (nbar * n * alpha ** (level - 1))
    by_accuracy = (beta_prime / nbar) * (beta / (k * math.log2(max(n, 2) / beta))) ** (k + 2)
    return min(by_size, by_accuracy)


@dataclass
class SamplerParams:
    n: int
    alpha: float
    k: int
    epsilon: float
    nk_bar: float | None = None
    tau: float | None = None
    budget: int | None = None
    c: float = 1.0
    seed: int = 0
    stream: int = 0
    unsafe_params: bool = False
    figure_literal: bool = False
    tau_exponent: str = "balance"
    transcript: bool = False
    nk_source: str = "given"

    @classmethod
    def for_graph(cls, graph, k: int, epsilon: float, alpha: float | None = None, **kw) -> "SamplerParams":
        """Fill ``alpha`` from the degeneracy and ``nk_bar`` from an exact count when absent."""
        from .validation import count_cliques, degeneracy

        if alpha is None:
            alpha = max(1, degeneracy(graph))
        if kw.get("nk_bar") is None:
            kw["nk_bar"] = max(1, count_cliques(graph, k))
            kw["nk_source"] = "oracle-estimated"
        return cls(graph.n, alpha, k, epsilon, **kw)

    @property
    def beta_top(self) -> float:
        return self.epsilon / (10 * self.k)

    def resolved_tau(self) -> float:
        if self.tau is not None:
            return self.tau
        return default_tau(self.n, self.alpha, self.k, self.epsilon, self.nk_bar or 1,
                           self.tau_exponent)

    def resolved_budget(self) -> int:
        return self.budget if self.budget is not None else budget_r(self)

    def in_regime(self) -> bool:
        tau = self.resolved_tau()
        return regime_floor(self.n, self.alpha, self.k, self.epsilon) <= tau <= math.sqrt(self.n * self.alpha)

    def validate(self) -> None:
        if self.k < 2:
            raise ParamError("k must be at least 2")
        if not 0 < self.epsilon < 1:
            raise ParamError("epsilon must lie in (0, 1)")
        if self.alpha <= 0 or self.n < 1:
            raise ParamError("need n >= 1 and alpha > 0")
        if self.c < 1:
            raise ParamError("budget constant c must be at least 1")
        if self.unsafe_params:
            return
        dense_cut = self.epsilon * math.sqrt(self.n * self.alpha) / (4 * self.k * math.log2(max(self.n, 2))) ** self.k
        if self.alpha > dense_cut:
            raise RegimeUnsupported(
                f"alpha={self.alpha} exceeds {dense_cut:.3g}; this sampler covers only the "
                "sparse regime (set unsafe_params to run anyway)")
        if not self.in_regime():
            raise ParamError("tau outside the guaranteed range; set unsafe_params to run anyway")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tau_resolved"] = self.resolved_tau()
        d["budget_resolved"] = self.resolved_budget()
        d["regime"] = "in-regime" if self.in_regime() else "out-of-regime"
        return d


def budget_r(params: SamplerParams) -> int:
    n, alpha, k, eps = params.n, params.alpha, params.k, params.epsilon
    tau = params.resolved_tau()
    na = n * alpha
    nk = params.nk_bar or 1
    core = max(math.sqrt(na) / tau, min(na, na * tau ** (k - 2) / nk))
    return math.ceil(core * (k * math.log2(max(n, 1)) / eps) ** (params.c * k))


# ---------------------------------------------------------------- levels

class LevelSource:
    """Level-``i`` walk used as the clique source of level ``i+1``."""

    def __init__(self, ctx: HLevelContext):
        self.ctx = ctx

    @property
    def clique_normalization(self) -> float:
        return self.ctx.clique_normalization

    def draw(self, oracle, rng) -> HEdge | None:
        return sample_edge(oracle, self.ctx, rng)


def build_levels(params: SamplerParams, diagnostics: Diagnostics | None = None,
                 cache_size: int = 1 << 20):
    """Top-level sampler object: a base config for k=2, else the level-k context."""
    diag = diagnostics if diagnostics is not None else Diagnostics()
    sched = {e["level"]: e for e in beta_schedule(params.k, params.epsilon, params.n, params.alpha)}
    base = BaseSamplerConfig(params.n, params.alpha, sched[2]["beta"])
    if params.k == 2:
        return base
    tau = params.resolved_tau()
    source = BaseEdgeSource(base)
    ctx = None
    for i in range(3, params.k + 1):
        e = sched[i]
        ctx = HLevelContext(
            level=i, n=params.n, alpha=params.alpha, tau=tau, beta=e["beta"],
            delta=default_delta(i, params.n, params.alpha, params.k, e["beta"], e["beta_prime"]),
            source=source, figure_literal=params.figure_literal, cache_size=cache_size,
            node_seed=make_rng(params.seed, f"nodes:{params.stream}").getrandbits(63),
            diagnostics=diag)
        source = LevelSource(ctx)
    return ctx


def sample_edge(oracle, ctx, rng) -> HEdge | None:
    """One walk attempt on ``H_i``; returns an oriented edge or ``None``."""
    if isinstance(ctx, BaseSamplerConfig):
        return BaseEdgeSource(ctx).draw(oracle, rng)
    diag = ctx.diagnostics
    j = uniform_index(rng, ctx.s + 1)
    e = sample_l0_edge(oracle, ctx, rng)
    if e is None:
        diag.counters[f"{FAIL_NO_L0}_{ctx.level}"] += 1
        return None
    for _ in range(j):
        q = e.head
        if is_l0(oracle, ctx, q, rng):
            diag.counters[f"{FAIL_WALK}_{ctx.level}"] += 1
            return None
        e = sample_neighbor(oracle, ctx, q, rng)
        if e is None:
            diag.counters[f"neighbor_fail_{ctx.level}"] += 1
            return None
    return e


def attempt_query_ceiling(top) -> int:
    """Worst-case countable queries of one top-level attempt (loose but finite)."""
    if isinstance(top, BaseSamplerConfig):
        return 2 * (top.s + 1) + 1
    ctx = top
    src = ctx.source
    below = attempt_query_ceiling(src.ctx) if isinstance(src, LevelSource) else (
        2 * (src.config.s + 1) + 1 if isinstance(src, BaseEdgeSource) else 0)
    check = ctx.level  # pair queries against the i-1 members plus one degree
    omega = max(1, 2 * (ctx.witness.s + 1)) + check
    scale = min(ctx.m_cap, ctx.n)
    l0 = math.ceil(scale / ctx.tau * ctx.l0_draw_factor) * omega
    nbr = math.ceil(scale / ctx.tau * ctx.nbr_draw_factor) * omega
    if ctx.figure_literal:
        b = ctx.beta_prime / 4
        ext = max(1 + check, math.ceil(3 * scale / (b * ctx.tau)) * omega)
    else:
        ext = (math.floor(scale * ctx.ext_probability) + 1) * omega
    return below + l0 + ext + ctx.s * (l0 + nbr)


# ---------------------------------------------------------------- driver

@dataclass
class SampleOutcome:
    clique: list[int] | None
    fail: str | None
    stats: QueryStats
    attempts: int
    seed: int
    params: dict
    budget: int
    max_attempt_cost: int = 0
    last_attempt_cost: int = 0
    attempt_failures: dict = field(default_factory=dict)
    transcript: list | None = None

    def to_dict(self) -> dict:
        d = {"clique": self.clique, "fail": self.fail, "queries": self.stats.to_dict(),
             "vertex_draws": self.stats.vertex_draws, "attempts": self.attempts,
             "seed": self.seed, "params": self.params, "budget": self.budget,
             "max_attempt_cost": self.max_attempt_cost,
             "last_attempt_cost": self.last_attempt_cost,
             "attempt_failures": dict(sorted(self.attempt_failures.items()))}
        if self.transcript is not None:
            d["transcript"] = self.transcript
        return fixed(d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def sample_clique(oracle, params: SamplerParams, rng=None, top=None,
                  diagnostics: Diagnostics | None = None) -> SampleOutcome:
    """Repeat level-k walk attempts until one returns a clique or the budget is spent.

    The budget is checked between attempts, so the final total can exceed it by
    at most the cost of the last attempt.
    """
    params.validate()
    if rng is None:
        rng = make_rng(params.seed, f"sample:{params.stream}")
    diag = diagnostics if diagnostics is not None else Diagnostics(
        transcript=[] if params.transcript else None)
    if top is None:
        top = build_levels(params, diag)
    elif not isinstance(top, BaseSamplerConfig):
        diag = top.diagnostics
    r = params.resolved_budget()
    start = oracle.stats.copy()
    attempts = max_cost = last_cost = 0
    fails_before = _failure_counts(diag)
    result = None
    fail = FAIL_BUDGET
    while oracle.stats.total() - start.total() < r:
        attempts += 1
        before = oracle.stats.total()
        try:
            e = sample_edge(oracle, top, rng)
        except BudgetExhausted:
            e = None
        last_cost = oracle.stats.total() - before
        max_cost = max(max_cost, last_cost)
        if diag.transcript is not None:
            diag.transcript.append([attempts, last_cost, None if e is None else e.clique.sorted_ids()])
        if e is not None:
            result = e.clique.sorted_ids()
            fail = None
            break
        if isinstance(top, BaseSamplerConfig):
            diag.counters["base_fail_2"] += 1
    after = oracle.stats
    used = QueryStats(after.degree - start.degree, after.neighbor - start.neighbor,
                      after.pair - start.pair, after.vertex_draws - start.vertex_draws)
    failures = {key: v - fails_before.get(key, 0) for key, v in _failure_counts(diag).items()
                if v - fails_before.get(key, 0)}
    return SampleOutcome(result, fail, used, attempts, params.seed, params.to_dict(), r,
                         max_cost, last_cost, failures,
                         diag.transcript if diag.transcript is not None else None)


def _failure_counts(diag: Diagnostics) -> dict:
    keys = (FAIL_NO_L0, FAIL_WALK, "neighbor_fail", "source_fail", "gate_no", "extension_fail", "base_fail")
    return {k: v for k, v in diag.counters.items() if k.startswith(keys)}
