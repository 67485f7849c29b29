"""Vertex and clique ordering, and the assignment of cliques to sub-cliques.

Vertices are ordered by ``(degree, id)``. A clique is stored with its members
sorted under that order, together with their degrees, so the clique degree
(degree of the first member) and the comparison key come for free.

Cliques are compared by ``(degree, id sequence)`` where the id sequence lists
member ids in vertex order and is compared element-wise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import NotAssigned

DegreeOf = Callable[[int], int]
CliqueKey = tuple  # (clique degree, id sequence in vertex order)


def vertex_less(u: int, v: int, degree_of: DegreeOf) -> bool:
    du, dv = degree_of(u), degree_of(v)
    return du < dv or (du == dv and u < v)


@dataclass(frozen=True)
class Clique:
    vertices: tuple[int, ...]
    degrees: tuple[int, ...]

    @classmethod
    def of(cls, members: Iterable[int], degree_of: DegreeOf) -> "Clique":
        pairs = sorted((degree_of(v), v) for v in set(members))
        return cls(tuple(v for _, v in pairs), tuple(d for d, _ in pairs))

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return self.degrees[0]

    @property
    def first(self) -> int:
        return self.vertices[0]

    @property
    def key(self) -> CliqueKey:
        return (self.degrees[0], self.vertices)

    def sorted_ids(self) -> list[int]:
        return sorted(self.vertices)

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def with_vertex(self, w: int, dw: int) -> "Clique":
        pairs = sorted(zip(self.degrees, self.vertices))
        pairs.append((dw, w))
        pairs.sort()
        return Clique(tuple(v for _, v in pairs), tuple(d for d, _ in pairs))

    def without(self, index: int) -> "Clique":
        return Clique(self.vertices[:index] + self.vertices[index + 1:],
                      self.degrees[:index] + self.degrees[index + 1:])

    def ids_key(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))


def clique_degree(c: Clique) -> int:
    return c.degrees[0]


def clique_less(a: Clique, b: Clique) -> bool:
    return a.key < b.key


def assigned_pair(c: Clique) -> tuple[Clique, Clique]:
    """The two smallest size-(k-1) sub-cliques of ``c``, smallest first.

    Every sub-clique is compared explicitly; dropping the two largest members is
    not a valid shortcut once member degrees differ. For an edge this yields
    the two endpoint singletons.
    """
    k = len(c.vertices)
    if k < 2:
        raise ValueError("assignment needs a clique of size at least 2")
    best = second = None
    for i in range(k):
        sub = c.without(i)
        key = sub.key
        if best is None or key < best.key:
            best, second = sub, best
        elif second is None or key < second.key:
            second = sub
    return best, second


def is_assigned(c: Clique, q: Clique) -> bool:
    q1, q2 = assigned_pair(c)
    return q.vertices == q1.vertices or q.vertices == q2.vertices


def other_assigned(c: Clique, q: Clique) -> Clique:
    q1, q2 = assigned_pair(c)
    if q.vertices == q1.vertices:
        return q2
    if q.vertices == q2.vertices:
        return q1
    raise NotAssigned(f"{q.sorted_ids()} is not assigned {c.sorted_ids()}")


def assigned_extension(oracle, q: Clique, w: int, dw: int | None = None) -> Clique | None:
    """Return ``q + w`` when it is a clique assigned to ``q``, else ``None``.

    Pair queries come first and stop at the first non-edge; the degree of
    ``w`` is queried only when it is not already known.
    """
    if w in q.vertices:
        return None
    pair = oracle.pair
    for x in q.vertices:
        if not pair(w, x):
            return None
    if dw is None:
        dw = oracle.degree(w)
    c = q.with_vertex(w, dw)
    return c if is_assigned(c, q) else None


def is_assigned_to(oracle, q: Clique, w: int, dw: int | None = None) -> bool:
    return assigned_extension(oracle, q, w, dw) is not None
