import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hsse.hypergraph import (
    Graph,
    Hypergraph,
    InvalidInstance,
    VertexSet,
    as_fraction,
    degree_profile,
    edges_cut,
    expansion,
    hhat_bounds,
    inner_boundary,
    outer_boundary,
    symmetric_vertex_expansion,
    vertex_expansion,
)


@st.composite
def hypergraphs(draw, max_n=9, max_m=12):
    n = draw(st.integers(2, max_n))
    edges = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1, max_size=n).map(sorted), max_size=max_m))
    return Hypergraph(n, tuple(tuple(e) for e in edges))


@st.composite
def hypergraph_and_set(draw):
    H = draw(hypergraphs())
    S = draw(st.sets(st.integers(0, H.n - 1), min_size=1, max_size=H.n - 1))
    return H, S


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(2, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def test_path_expansion():
    H = Hypergraph(4, ((0, 1), (1, 2), (2, 3)))
    assert expansion(H, {0, 1}) == Fraction(1, 2)
    assert expansion(H, {0}) == 1
    assert edges_cut(H, {1}) == [0, 1]


def test_expansion_undefined_on_trivial_sets():
    H = Hypergraph(3, ((0, 1, 2),))
    with pytest.raises(InvalidInstance):
        expansion(H, set())
    with pytest.raises(InvalidInstance):
        expansion(H, {0, 1, 2})


@pytest.mark.parametrize(
    "edges",
    [((),), ((0, 0),), ((0, 5),), ((-1, 0),)],
)
def test_invalid_edges(edges):
    with pytest.raises(InvalidInstance):
        Hypergraph(3, edges)


def test_anchor_validation():
    with pytest.raises(InvalidInstance):
        Hypergraph(3, ((0, 1),), ((2,),))
    with pytest.raises(InvalidInstance):
        Hypergraph(3, ((0, 1),), ((),))
    with pytest.raises(InvalidInstance):
        Hypergraph(3, ((0, 1),), ((0,), (1,)))


def test_duplicate_edges_kept():
    H = Hypergraph(3, ((0, 1), (1, 0)))
    assert H.m == 2
    assert expansion(H, {0}) == 2


def test_graph_validation():
    with pytest.raises(InvalidInstance):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(InvalidInstance):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(InvalidInstance):
        Graph.from_edges(3, [(0, 3)])


def test_vertex_set_bounds():
    with pytest.raises(InvalidInstance):
        VertexSet(frozenset({4}), 4)
    S = VertexSet.of([2, 0], 4)
    assert S.sorted() == (0, 2)
    assert S.complement().sorted() == (1, 3)
    assert S.mask().tolist() == [True, False, True, False]


def test_as_fraction_snaps_floats():
    assert as_fraction(1 / 3) == Fraction(1, 3)
    assert as_fraction(0.125) == Fraction(1, 8)
    assert as_fraction(Fraction(2, 7)) == Fraction(2, 7)


def test_cycle_vertex_expansion():
    C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert vertex_expansion(C4, {0, 1}) == 1
    assert symmetric_vertex_expansion(C4, {0, 1}) == 2
    assert outer_boundary(C4, VertexSet.of({0}, 4)) == {1, 3}
    assert inner_boundary(C4, VertexSet.of({0, 1}, 4)) == {0, 1}


def test_degree_profile_uniform_regular():
    # 3-uniform, every vertex in exactly 3 edges
    H = Hypergraph(4, tuple(combinations(range(4), 3)))
    prof = degree_profile(H)
    assert prof.eta_max == pytest.approx(3 * math.log2(3) / 3)
    assert prof.hhat_bound == prof.eta_max
    b = hhat_bounds(H)
    assert b["uniform"] == pytest.approx(3 * math.log2(3) / 3)
    assert b["distinct_representatives"] == pytest.approx(math.log2(3))
    assert sorted(b["representatives"]) == [0, 1, 2, 3]


def test_degree_profile_with_anchors():
    H = Hypergraph(3, ((0, 1, 2), (1, 2)), ((0,), (1, 2)))
    prof = degree_profile(H)
    assert prof.eta.tolist() == pytest.approx([math.log2(3), 0.5, 0.5])


@given(hypergraph_and_set())
def test_expansion_complement_symmetric(hs):
    H, S = hs
    S = VertexSet.of(S, H.n)
    assert expansion(H, S) == expansion(H, S.complement())


@given(hypergraph_and_set())
def test_expansion_matches_definition(hs):
    H, S = hs
    cut = sum(1 for e in H.edges if 0 < len(set(e) & S) < len(e))
    assert expansion(H, S) == Fraction(cut, min(len(S), H.n - len(S)))


@given(hypergraphs())
def test_eta_nonnegative_and_max(H):
    prof = degree_profile(H)
    assert np.all(prof.eta >= 0)
    if H.n:
        assert prof.eta_max == pytest.approx(prof.eta.max())


@given(graphs(), st.data())
def test_symmetric_dominates_outer_boundary(G, data):
    S = data.draw(st.sets(st.integers(0, G.n - 1), min_size=1, max_size=G.n - 1))
    k = len(S)
    # outer boundary over |S| is at most (inner + outer) / min(|S|, n - |S|) when |S| <= n/2
    if k <= G.n - k:
        assert vertex_expansion(G, S) <= symmetric_vertex_expansion(G, S)
