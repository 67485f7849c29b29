import pytest

from cliquesampler import Clique, Oracle, assigned_pair, clique_degree, clique_less, other_assigned
from cliquesampler import is_assigned_to, vertex_less
from cliquesampler.errors import NotAssigned

from helpers import g1

G = g1()
DEG = G.degree


def c(*vs):
    return Clique.of(vs, DEG)


def ids(q):
    return set(q.vertices)


def test_vertex_less_examples():
    assert vertex_less(5, 2, DEG)
    assert vertex_less(2, 3, DEG)
    assert not vertex_less(3, 3, DEG)


def test_clique_construction_sorts_by_order():
    assert c(1, 2, 3).vertices == (2, 3, 1)
    assert c(2, 3, 4).vertices == (2, 3, 4)
    assert c(1, 5).vertices == (5, 1)


def test_clique_degree_examples():
    assert clique_degree(c(2, 3, 4)) == 3
    assert clique_degree(c(1, 2, 3)) == 3
    assert clique_degree(c(5)) == 1


def test_clique_less_examples():
    assert clique_less(c(1, 2), c(2, 3))
    assert not clique_less(c(2, 3), c(1, 2))
    for other in [(2, 3), (1, 2), (3, 4)]:
        assert clique_less(c(5, 1), c(*other))
    assert not clique_less(c(2, 3), c(2, 3))


def test_assigned_pair_examples():
    q1, q2 = assigned_pair(c(2, 3, 4))
    assert (ids(q1), ids(q2)) == ({2, 3}, {2, 4})
    q1, q2 = assigned_pair(c(1, 2, 3))
    assert (ids(q1), ids(q2)) == ({1, 2}, {2, 3})
    q1, q2 = assigned_pair(c(1, 5))
    assert {q1.vertices, q2.vertices} == {(1,), (5,)}


def test_is_assigned_to_examples():
    o = Oracle(G)
    assert is_assigned_to(o, c(2, 3), 4)
    assert not is_assigned_to(o, c(3, 4), 2)
    assert not is_assigned_to(o, c(2, 3), 5)


def test_other_assigned_examples():
    assert ids(other_assigned(c(2, 3, 4), c(2, 3))) == {2, 4}
    assert ids(other_assigned(c(1, 5), c(5))) == {1}
    with pytest.raises(NotAssigned):
        other_assigned(c(2, 3, 4), c(3, 4))


def test_assigned_extension_rejects_members():
    from cliquesampler.order import assigned_extension

    o = Oracle(G)
    assert assigned_extension(o, c(2, 3), 3) is None
    assert o.stats.total() == 0


def test_assigned_pair_is_repeatable():
    x = c(1, 2, 3, 4)
    assert assigned_pair(x) == assigned_pair(x)
