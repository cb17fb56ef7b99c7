import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbp.tree import Arc, Tree


def test_path_identity():
    t = Tree(3, [(0, 1, 1.0), (1, 2, 1.0)])
    p = t.path_between(1, 1)
    assert p.vertices == (1,) and p.length == 0 and p.edges == ()


def test_line_path():
    t = Tree(3, [(0, 1, 1.0), (1, 2, 1.0)])
    assert t.path_between(0, 2).length == 2
    assert t.path_between(2, 0).vertices == (2, 1, 0)


def test_star_leaf_to_leaf():
    t = Tree(3, [(0, 1, 2.0), (0, 2, 3.0)])
    p = t.path_between(1, 2)
    assert p.length == 5 and p.vertices == (1, 0, 2)


def test_two_edge_example_path():
    # u1=0, u2=1, v=2; e1 = (u1, v), e2 = (u2, u1)
    t = Tree(3, [(0, 2, 1.0), (1, 0, 1.0)])
    p = t.path_to_subgraph(1, frozenset({2}))
    assert p.arcs == (Arc(1, 0), Arc(0, 2))
    assert p.length == 2


def test_path_to_subgraph_cases():
    t = Tree(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 4.0)])
    assert len(t.path_to_subgraph(1, frozenset({1, 0}))) == 0
    assert t.path_to_subgraph(3, frozenset({0, 2})).arcs == (Arc(3, 0),)
    with pytest.raises(ValueError):
        t.path_to_subgraph(1, frozenset())


# u=0, v1=1, v2=2 (leaf); 3 hangs off v1, 4 hangs off u
FIG = Tree(5, [(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (0, 4, 1.0)])


def test_figure_precedence():
    assert FIG.precedes(Arc(1, 2), Arc(0, 1))
    assert FIG.precedes(Arc(1, 2), Arc(4, 0))
    assert not FIG.precedes(Arc(0, 1), Arc(1, 2))


def test_nothing_precedes_arc_into_leaf():
    target = Arc(1, 2)
    arcs = [Arc(u, v) for u in range(5) for v in FIG.adj[u]]
    assert not any(FIG.precedes(a, target) for a in arcs)


def test_reverse_never_precedes():
    arcs = [Arc(u, v) for u in range(5) for v in FIG.adj[u]]
    for a in arcs:
        assert not FIG.precedes(a.reversed(), a)
        assert not FIG.precedes(a, a)


def test_siblings_unrelated():
    assert not FIG.precedes(Arc(1, 3), Arc(1, 2))
    assert not FIG.precedes(Arc(1, 2), Arc(1, 3))


@st.composite
def trees(draw):
    n = draw(st.integers(2, 9))
    return Tree(n, [(draw(st.integers(0, v - 1)), v, float(draw(st.integers(1, 5)))) for v in range(1, n)])


def _arcs(t):
    return [Arc(u, v) for u in range(t.vertex_count) for v in t.adj[u]]


def _brute_precedes(t, a, b):
    """Does some simple directed path traverse b and later a?"""
    for x, y in itertools.product(range(t.vertex_count), repeat=2):
        arcs = t.path_between(x, y).arcs
        if b in arcs and a in arcs and arcs.index(b) < arcs.index(a):
            return True
    return False


@settings(max_examples=40, deadline=None)
@given(trees())
def test_precedes_matches_path_definition(t):
    for a, b in itertools.product(_arcs(t), repeat=2):
        assert t.precedes(a, b) == _brute_precedes(t, a, b)


@settings(max_examples=40, deadline=None)
@given(trees())
def test_precedes_irreflexive_and_transitive(t):
    arcs = _arcs(t)
    rel = {(a, b) for a, b in itertools.product(arcs, repeat=2) if t.precedes(a, b)}
    assert not any((a, a) in rel for a in arcs)
    for (a, b), (c, d) in itertools.product(rel, repeat=2):
        if b == c:
            assert (a, d) in rel


@settings(max_examples=40, deadline=None)
@given(trees())
def test_tree_distance_is_metric(t):
    n = t.vertex_count
    d = np.array([[t.distance(u, v) for v in range(n)] for u in range(n)])
    assert np.allclose(d, d.T)
    for u, v, w in itertools.product(range(n), repeat=3):
        assert d[u, w] <= d[u, v] + d[v, w] + 1e-9
    for u, v in itertools.product(range(n), repeat=2):
        p = t.path_between(u, v)
        assert p.length == pytest.approx(sum(t.length[e] for e in p.edges))
