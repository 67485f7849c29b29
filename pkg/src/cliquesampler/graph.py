"""Immutable graph storage and the instrumented query oracle.

Vertices are 1-based ids ``1..n``. Neighbor lists are kept in ascending id
order, so ``neighbor(v, i)`` is a stable port numbering fixed at load time.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, asdict
from typing import IO, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    BudgetExhausted,
    IndexOutOfRange,
    NonSymmetricInput,
    ParseError,
    PreconditionError,
    UnknownVertex,
)
from .rng import uniform_index


class Graph:
    """Simple undirected graph with sorted, immutable adjacency tuples."""

    __slots__ = ("n", "m", "_adj", "_deg", "_nbrsets", "_csr")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        lists: list[set[int]] = [set() for _ in range(n + 1)]
        m = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise UnknownVertex(f"edge ({u}, {v}) outside 1..{n}")
            if v in lists[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            lists[u].add(v)
            lists[v].add(u)
            m += 1
        self.n = n
        self.m = m
        self._adj = tuple(tuple(sorted(s)) for s in lists)
        self._deg = tuple(len(a) for a in self._adj)
        self._nbrsets = tuple(frozenset(s) for s in lists)
        self._csr = None

    @classmethod
    def from_adjacency(cls, adjacency: Mapping[int, Iterable[int]] | Sequence[Iterable[int]],
                       n: int | None = None) -> "Graph":
        """Build from per-vertex neighbor lists, rejecting asymmetric input."""
        if isinstance(adjacency, Mapping):
            items = {int(v): [int(w) for w in ws] for v, ws in adjacency.items()}
        else:
            items = {i + 1: [int(w) for w in ws] for i, ws in enumerate(adjacency)}
        if n is None:
            n = max([0, *items.keys(), *(w for ws in items.values() for w in ws)])
        edges = set()
        for v, ws in items.items():
            if len(set(ws)) != len(ws):
                raise ValueError(f"duplicate neighbor in list of {v}")
            for w in ws:
                if w == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if v not in items.get(w, ()):
                    raise NonSymmetricInput(f"{w} in list of {v} but not vice versa")
                edges.add((min(v, w), max(v, w)))
        return cls(n, sorted(edges))

    def degree(self, v: int) -> int:
        return self._deg[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbrsets[u]

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(1, self.n + 1):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    @property
    def degrees(self) -> tuple[int, ...]:
        """Degree table indexed by vertex id (entry 0 unused)."""
        return self._deg

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, indices, degrees) arrays indexed by vertex id, for batched code."""
        if self._csr is None:
            deg = np.asarray(self._deg, dtype=np.int64)
            indptr = np.zeros(self.n + 2, dtype=np.int64)
            np.cumsum(deg, out=indptr[1:])
            flat = [w for a in self._adj for w in a]
            indices = np.asarray(flat, dtype=np.int64)
            self._csr = (indptr, indices, deg)
        return self._csr

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass
class QueryStats:
    degree: int = 0
    neighbor: int = 0
    pair: int = 0
    vertex_draws: int = 0

    def total(self) -> int:
        return self.degree + self.neighbor + self.pair

    def copy(self) -> "QueryStats":
        return QueryStats(self.degree, self.neighbor, self.pair, self.vertex_draws)

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["vertex_draws"]
        d["total"] = self.total()
        return d


class Oracle:
    """Per-session query access to a graph with counters and an optional budget.

    Only ``degree``, ``neighbor`` and ``pair`` count toward the budget. Drawing
    a uniform vertex id is free in the query model and is tallied separately.
    """

    def __init__(self, graph: Graph, budget: int | None = None):
        self.graph = graph
        self.stats = QueryStats()
        self.budget = budget
        self._deg = graph._deg
        self._adj = graph._adj
        self._sets = graph._nbrsets
        self._n = graph.n

    def _check_budget(self) -> None:
        if self.budget is not None and self.stats.total() >= self.budget:
            raise BudgetExhausted(f"query budget {self.budget} reached")

    def degree(self, v: int) -> int:
        if not 0 < v <= self._n:
            raise UnknownVertex(v)
        if self.budget is not None:
            self._check_budget()
        self.stats.degree += 1
        return self._deg[v]

    def neighbor(self, v: int, i: int) -> int:
        if not 0 < v <= self._n:
            raise UnknownVertex(v)
        adj = self._adj[v]
        if not 0 < i <= len(adj):
            raise IndexOutOfRange(f"neighbor index {i} for vertex {v} of degree {len(adj)}")
        if self.budget is not None:
            self._check_budget()
        self.stats.neighbor += 1
        return adj[i - 1]

    def pair(self, u: int, v: int) -> bool:
        if u == v:
            raise PreconditionError("pair query needs two distinct vertices")
        if not (0 < u <= self._n and 0 < v <= self._n):
            raise UnknownVertex((u, v))
        if self.budget is not None:
            self._check_budget()
        self.stats.pair += 1
        return v in self._sets[u]

    def uniform_vertex(self, rng) -> int:
        self.stats.vertex_draws += 1
        return uniform_index(rng, self._n) + 1

    def charge(self, degree: int = 0, neighbor: int = 0, pair: int = 0,
               vertex_draws: int = 0) -> None:
        """Bulk-charge queries made by a vectorized twin of a scalar procedure."""
        if self.budget is not None and self.stats.total() + degree + neighbor + pair > self.budget:
            raise BudgetExhausted(f"query budget {self.budget} reached")
        self.stats.degree += degree
        self.stats.neighbor += neighbor
        self.stats.pair += pair
        self.stats.vertex_draws += vertex_draws


# ---------------------------------------------------------------- text format

def _open_text(source) -> tuple[IO[str], bool]:
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8"), True
    return source, False


def load_graph(source: str | os.PathLike | IO[str]) -> Graph:
    """Parse the ``n m`` header plus ``u v`` edge-line format."""
    fh, close = _open_text(source)
    try:
        header = None
        edges: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected two integers, got {line!r}", lineno)
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer token in {line!r}", lineno) from None
            if header is None:
                if a < 0 or b < 0:
                    raise ParseError("negative header value", lineno)
                header = (a, b)
                continue
            n = header[0]
            if a == b:
                raise ParseError(f"self-loop at vertex {a}", lineno)
            if not (1 <= a <= n and 1 <= b <= n):
                raise ParseError(f"vertex out of range 1..{n}", lineno)
            if a > b:
                raise ParseError(f"edge endpoints must satisfy u < v, got {a} {b}", lineno)
            if (a, b) in seen:
                raise ParseError(f"duplicate edge {a} {b}", lineno)
            seen.add((a, b))
            edges.append((a, b))
        if header is None:
            raise ParseError("missing 'n m' header", None)
        if len(edges) != header[1]:
            raise ParseError(f"header declares {header[1]} edges, found {len(edges)}", None)
        return Graph(header[0], edges)
    finally:
        if close:
            fh.close()


def dumps_graph(graph: Graph) -> str:
    out = io.StringIO()
    store_graph(graph, out)
    return out.getvalue()


def store_graph(graph: Graph, sink: str | os.PathLike | IO[str]) -> None:
    lines = [f"{graph.n} {graph.m}\n"]
    lines.extend(f"{u} {v}\n" for u, v in graph.edges())
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.writelines(lines)
    else:
        sink.writelines(lines)


def loads_graph(text: str) -> Graph:
    return load_graph(io.StringIO(text))
