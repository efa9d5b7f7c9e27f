from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsse.hypergraph import Graph, Hypergraph, expansion, symmetric_vertex_expansion, vertex_expansion
from hsse.oracle import (
    TooLarge,
    _lex_key,
    boundaries,
    brute_force_hsse,
    brute_force_ssve,
    cut_counts,
    gen_gap_instance,
    gen_planted,
    gen_random_hypergraph,
    masks_of_size,
    popcount,
    separator_lower_bound_test,
)

from test_hypergraph import graphs, hypergraphs


@pytest.mark.parametrize("n,k", [(5, 0), (5, 2), (6, 3), (10, 4), (3, 4)])
def test_masks_of_size(n, k):
    masks = masks_of_size(n, k)
    assert len(masks) == (comb(n, k) if k <= n else 0)
    assert len(set(masks.tolist())) == len(masks)
    assert np.all(popcount(masks) == k)


def test_path_optimum():
    H = Hypergraph(4, ((0, 1), (1, 2), (2, 3)))
    S, phi = brute_force_hsse(H, Fraction(1, 2))
    assert phi == Fraction(1, 2)
    assert S.sorted() == (0, 1)


def test_gap_optimum():
    for r in (4, 8):
        H, delta = gen_gap_instance(r)
        S, phi = brute_force_hsse(H, delta)
        assert phi == 1 and S.sorted() == (0,)


def test_ties_prefer_smaller_then_lexicographic():
    # every pair and every single vertex has expansion 0: the answer is {0}
    H = Hypergraph(6, ())
    S, phi = brute_force_hsse(H, Fraction(1, 2))
    assert phi == 0 and S.sorted() == (0,)
    # on a 4-cycle both {0, 1} and {1, 2} reach 1; {0, 1} comes first
    C4 = Hypergraph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
    assert brute_force_hsse(C4, Fraction(1, 2))[0].sorted() == (0, 1)


def test_lex_key_orders_member_lists():
    masks = np.array([0b0011, 0b0101, 0b0110, 0b1001], dtype=np.int64)
    order = np.argsort(-_lex_key(masks, 4))
    lists = [tuple(i for i in range(4) if m >> i & 1) for m in masks[order]]
    assert lists == sorted(lists)


def test_ssve_examples():
    C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    S, phi_v, sym = brute_force_ssve(C4, Fraction(1, 2))
    assert phi_v == 1 and sym == 2
    K4 = Graph.from_edges(4, list(combinations(range(4), 2)))
    _, phi_v, sym = brute_force_ssve(K4, Fraction(1, 2))
    assert phi_v == 1 and sym == 2
    tri = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert brute_force_ssve(tri, Fraction(1, 2))[2] == 0


def test_too_large():
    with pytest.raises(TooLarge):
        brute_force_hsse(Hypergraph(25, ()), Fraction(1, 2))
    with pytest.raises(ValueError):
        brute_force_hsse(Hypergraph(3, ()), Fraction(1, 4))


@given(hypergraphs(max_n=8), st.sampled_from([Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)]))
@settings(max_examples=60)
def test_matches_naive_enumeration(H, delta):
    cap = int(delta * H.n)
    if cap < 1:
        return
    naive = min(expansion(H, S) for k in range(1, cap + 1) for S in combinations(range(H.n), k) if k < H.n)
    S, phi = brute_force_hsse(H, delta)
    assert phi == naive == expansion(H, S)
    assert len(S) <= cap


@given(hypergraphs(max_n=8))
@settings(max_examples=40)
def test_cut_counts_match(H):
    masks = np.arange(1, (1 << H.n) - 1, dtype=np.int64)
    cuts = cut_counts(H, masks)
    for m, c in zip(masks[:50], cuts[:50]):
        S = [i for i in range(H.n) if int(m) >> i & 1]
        k = len(S)
        assert Fraction(int(c), min(k, H.n - k)) == expansion(H, S)


@given(graphs(max_n=8))
@settings(max_examples=40)
def test_boundaries_match(G):
    if G.n < 2:
        return
    masks = np.arange(1, (1 << G.n) - 1, dtype=np.int64)
    out, inner = boundaries(G, masks)
    for m, o, i in zip(masks[:40], out[:40], inner[:40]):
        S = [v for v in range(G.n) if int(m) >> v & 1]
        k = len(S)
        assert Fraction(int(popcount(np.array([o]))[0]), k) == vertex_expansion(G, S)
        assert Fraction(int(popcount(np.array([o | i]))[0]), min(k, G.n - k)) == symmetric_vertex_expansion(G, S)


def test_generators_deterministic():
    a = gen_random_hypergraph(10, 12, (2, 4), seed=7)
    assert a == gen_random_hypergraph(10, 12, (2, 4), seed=7)
    assert all(2 <= len(e) <= 4 for e in a.edges)
    p = gen_planted(12, 3, 1.0, 0.2, seed=1)
    assert p.partition == ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11))
    cluster_of = {v: c for c, part in enumerate(p.partition) for v in part}
    crossing = sum(1 for e in p.H.edges if len({cluster_of[v] for v in e}) > 1)
    assert crossing >= round(0.2 * 12)
    assert p.H.m == 12 + round(0.2 * 12)


def test_generator_errors():
    with pytest.raises(ValueError):
        gen_gap_instance(1)
    with pytest.raises(ValueError):
        gen_random_hypergraph(3, 2, 5)


def test_lower_bound_report():
    rep = separator_lower_bound_test(8, 30_000, seed=1)
    assert rep.r == 8 and rep.marginal_ok and rep.passed
    assert rep.distortion >= 1.8


def test_lower_bound_catches_a_bad_sampler():
    # a sampler that always returns every vertex never cuts the edge
    def everything(emb, params, rng, size):
        return np.ones((size, emb.n), dtype=bool)

    rep = separator_lower_bound_test(8, 1000, sampler=everything)
    assert not rep.passed
