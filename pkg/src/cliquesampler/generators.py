"""Seeded instance generators: unions of random forests and planted hidden cliques."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from itertools import combinations

from .errors import ParamError
from .graph import Graph


class _DisjointSets:
    def __init__(self, n: int):
        self.parent = list(range(n + 1))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def gen_forest_union(n: int, alpha: int, edge_target: int | None = None, seed: int = 0) -> Graph:
    """Union of ``alpha`` edge-disjoint random forests with ``edge_target`` edges total.

    The forests themselves cover the edge set, so arboricity is at most alpha.
    """
    if n < 1 or alpha < 1:
        raise ParamError("need n >= 1 and alpha >= 1")
    cap = min(alpha * (n - 1), n * (n - 1) // 2)
    if edge_target is None:
        edge_target = cap
    if not 0 <= edge_target <= cap:
        raise ParamError(f"edge target {edge_target} outside [0, {cap}] for n={n}, alpha={alpha}")
    rng = random.Random(f"forest:{n}:{alpha}:{edge_target}:{seed}")
    for _ in range(20):
        edges = _try_forests(n, alpha, edge_target, rng)
        if edges is not None:
            return Graph(n, sorted(edges))
    raise ParamError(f"could not realize {edge_target} edges as {alpha} forests on {n} vertices")


def _try_forests(n: int, alpha: int, target: int, rng: random.Random):
    share = [target // alpha + (1 if f < target % alpha else 0) for f in range(alpha)]
    used: set[tuple[int, int]] = set()
    pairs = None
    for want in share:
        ds = _DisjointSets(n)
        got = 0
        misses = 0
        while got < want and misses < 50 * n:
            u, v = rng.randint(1, n), rng.randint(1, n)
            e = (min(u, v), max(u, v))
            if u == v or e in used or ds.find(u) == ds.find(v):
                misses += 1
                continue
            ds.union(u, v)
            used.add(e)
            got += 1
        if got < want:
            # Dense corner: scan all pairs in random order.
            if pairs is None:
                pairs = list(combinations(range(1, n + 1), 2))
            rng.shuffle(pairs)
            for e in pairs:
                if got == want:
                    break
                if e in used or ds.find(e[0]) == ds.find(e[1]):
                    continue
                ds.union(*e)
                used.add(e)
                got += 1
            if got < want:
                return None
    return used


@dataclass
class PlantedInstance:
    graph: Graph
    hidden: tuple[int, ...]
    blocks: dict[str, list[int]]
    params: dict
    achieved_nk: int
    d_layout: dict = field(default_factory=dict)

    @property
    def ell(self) -> int:
        return len(self.blocks["A"])

    def answer_key(self) -> dict:
        return {"hidden": sorted(self.hidden),
                "blocks": {b: [min(v), max(v)] if v else [] for b, v in self.blocks.items()},
                "achievedNk": self.achieved_nk,
                "params": self.params, "d_layout": self.d_layout}

    def dumps_key(self) -> str:
        return json.dumps(self.answer_key(), sort_keys=True, indent=1) + "\n"


def plan_d_block(n_prime: int, alpha: int, k: int, target_nk: int) -> dict:
    """Copies of K_{2 alpha} plus at most one smaller top-up clique."""
    big = 2 * alpha
    per_copy = math.comb(big, k)
    need = target_nk - 1
    if per_copy == 0:
        if need:
            raise ParamError(f"K_{big} has no {k}-cliques; cannot reach target {target_nk}")
        return {"copies": 0, "copy_size": big, "topup_size": 0, "d_cliques": 0}
    copies, rest = divmod(need, per_copy)
    topup = 0
    if rest:
        options = [(abs(math.comb(j, k) - rest), j) for j in range(k, big)]
        topup = min(options)[1] if options else 0
    used = copies * big + topup
    if used > n_prime:
        raise ParamError(f"D block needs {used} vertices but has {n_prime}")
    return {"copies": copies, "copy_size": big, "topup_size": topup,
            "d_cliques": copies * per_copy + (math.comb(topup, k) if topup else 0)}


def _b_neighbors(ell: int, alpha: int) -> list[set[int]]:
    nbrs: list[set[int]] = [set() for _ in range(ell)]
    for slot in range(ell * ell):
        nbrs[slot % ell].add(slot // alpha)
    return nbrs


def _pick_hidden(ell: int, alpha: int, k: int, rng: random.Random) -> list[int]:
    """Uniform k-subset of A whose members have pairwise disjoint B-neighborhoods.

    Two hidden vertices with a common B-neighbor b would close a triangle with
    b, adding k-cliques outside D; those subsets are rejected.
    """
    nbrs = _b_neighbors(ell, alpha)
    for _ in range(10000):
        pick = sorted(rng.sample(range(ell), k))
        if all(not (nbrs[a] & nbrs[b]) for a, b in combinations(pick, 2)):
            return pick
    raise ParamError(f"no {k} vertices of A with disjoint B-neighborhoods (ell={ell}, alpha={alpha})")


def gen_planted(n_prime: int, alpha: int, k: int, target_nk: int, seed: int = 0) -> PlantedInstance:
    """Hidden k-clique among the high-degree side of a biregular bipartite core.

    Blocks: A (size ell = sqrt(n' alpha)), B (size n'), C (ell(k-1) pendants),
    D (n' vertices holding the remaining k-cliques).
    """
    ell = math.isqrt(n_prime * alpha)
    if n_prime < 1 or alpha < 1 or ell * ell != n_prime * alpha:
        raise ParamError("n' * alpha must be a positive perfect square")
    if k < 3:
        raise ParamError("planted instances need k >= 3")
    if k > ell:
        raise ParamError(f"k={k} exceeds ell={ell}")
    if alpha > ell:
        raise ParamError("alpha must not exceed ell (that is, n' >= alpha)")
    if target_nk < 1:
        raise ParamError("target clique count must be at least 1")
    plan = plan_d_block(n_prime, alpha, k, target_nk)
    rng = random.Random(f"planted:{n_prime}:{alpha}:{k}:{target_nk}:{seed}")

    sizes = {"A": ell, "B": n_prime, "C": ell * (k - 1), "D": n_prime}
    blocks: dict[str, list[int]] = {}
    start = 1
    for name in "ABCD":
        labels = list(range(start, start + sizes[name]))
        rng.shuffle(labels)
        blocks[name] = labels
        start += sizes[name]
    n = start - 1
    A, B, C, D = (blocks[x] for x in "ABCD")
    edges: list[tuple[int, int]] = []

    for slot in range(ell * ell):
        edges.append((A[slot % ell], B[slot // alpha]))

    hidden_idx = _pick_hidden(ell, alpha, k, rng)
    hidden = tuple(A[i] for i in hidden_idx)
    edges.extend(combinations(hidden, 2))
    hidden_set = set(hidden_idx)
    c_next = 0
    for i in range(ell):
        if i in hidden_set:
            continue
        for _ in range(k - 1):
            edges.append((A[i], C[c_next]))
            c_next += 1
    # Pendants not needed by A \ S are matched among themselves so every C
    # vertex keeps degree one; k(k-1) is always even.
    spare = C[c_next:]
    edges.extend(zip(spare[0::2], spare[1::2]))

    pos = 0
    for _ in range(plan["copies"]):
        edges.extend(combinations(D[pos:pos + plan["copy_size"]], 2))
        pos += plan["copy_size"]
    if plan["topup_size"]:
        edges.extend(combinations(D[pos:pos + plan["topup_size"]], 2))

    graph = Graph(n, sorted((min(u, v), max(u, v)) for u, v in edges))
    params = {"n_prime": n_prime, "alpha": alpha, "k": k, "target_nk": target_nk, "seed": seed}
    ordered = {name: sorted(v) for name, v in blocks.items()}
    return PlantedInstance(graph, tuple(sorted(hidden)), ordered, params,
                           plan["d_cliques"] + 1, plan)


def verify_planted(inst: PlantedInstance) -> dict:
    """Check every structural promise of a planted instance exactly."""
    from .validation import enumerate_cliques

    g = inst.graph
    p = inst.params
    k, alpha = p["k"], p["alpha"]
    ell = math.isqrt(p["n_prime"] * alpha)
    A, B, C, D = (set(inst.blocks[x]) for x in "ABCD")
    hidden = set(inst.hidden)
    problems: list[str] = []

    if len(A) != ell or len(B) != p["n_prime"] or len(C) != ell * (k - 1) or len(D) != p["n_prime"]:
        problems.append("block sizes do not match (ell, n', ell(k-1), n')")
    if g.n != 2 * p["n_prime"] + ell * k:
        problems.append(f"n={g.n} differs from 2n' + ell k = {2 * p['n_prime'] + ell * k}")
    if len(hidden) != k or not hidden <= A:
        problems.append("hidden set is not k vertices of A")
    for v in A:
        if g.degree(v) != ell + k - 1:
            problems.append(f"A-vertex {v} has degree {g.degree(v)}, expected {ell + k - 1}")
        nb = set(g.neighbors(v))
        if len(nb & B) != ell:
            problems.append(f"A-vertex {v} has {len(nb & B)} B-neighbors, expected {ell}")
        a_nb = nb & A
        if v in hidden:
            if a_nb != hidden - {v}:
                problems.append(f"hidden vertex {v} misses clique edges")
        else:
            if a_nb:
                problems.append(f"A-vertex {v} outside the hidden set has A-neighbors")
            if len(nb & C) != k - 1:
                problems.append(f"A-vertex {v} has {len(nb & C)} pendants, expected {k - 1}")
    for v in B:
        if g.degree(v) != alpha or not set(g.neighbors(v)) <= A:
            problems.append(f"B-vertex {v} has degree {g.degree(v)} or non-A neighbors")
    for v in C:
        if g.degree(v) != 1:
            problems.append(f"C-vertex {v} has degree {g.degree(v)}")
    for v in D:
        if not set(g.neighbors(v)) <= D:
            problems.append(f"D-vertex {v} has neighbors outside D")
    every = enumerate_cliques(g, k)
    outside = [c for c in every if not set(c.vertices) <= D]
    if [set(c.vertices) for c in outside] != [hidden]:
        problems.append(f"{len(outside)} k-cliques outside D; expected only the hidden one")
    total = len(every)
    if total != inst.achieved_nk:
        problems.append(f"graph has {total} k-cliques, answer key says {inst.achieved_nk}")
    return {"pass": not problems, "problems": problems}
