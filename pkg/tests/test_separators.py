import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsse.embedding import normalize
from hsse.oracle import gen_random_hypergraph
from hsse.separators import (
    ScaleNet,
    SeparatorParams,
    Variant,
    _choose_words,
    amplification_count,
    cut_probability_bound,
    diagnostic_dump,
    estimate_p,
    omega_l1,
    omega_l2,
    poisson_parity,
    sample_separator,
    sample_separators,
    word_length,
)
from hsse.streams import make_rng

from conftest import orthogonal_gram, solved, solved_gap
from fractions import Fraction


@pytest.mark.parametrize("m,l", [(4.5, 38), (8, 12), (16, 10), (32, 10), (64, 11)])
def test_word_length_values(m, l):
    assert word_length(m) == l


@pytest.mark.parametrize("m,p,K", [(8, 0.15, 2), (16, 0.15, 2), (16, 0.05, 7), (64, 0.05, 9), (4.5, 0.15, 1)])
def test_amplification_values(m, p, K):
    assert amplification_count(m, p) == K


def test_parameter_domain():
    with pytest.raises(ValueError):
        word_length(4)
    with pytest.raises(ValueError):
        amplification_count(16, 0.25)
    with pytest.raises(ValueError):
        SeparatorParams.build(16, 1.2, 4)


@given(st.floats(4.01, 1e6))
def test_xor_of_k_beats_goal(m):
    # the XOR of K bits that each separate w.p. 2p separates w.p. (1 - (1 - 4p)^K) / 2
    p = 0.15
    K = amplification_count(m, p)
    assert (1 - 4 * p) ** K <= 1 / math.log2(m) + 1e-12


@given(st.floats(4.01, 1e6))
def test_word_length_collision_bound(m):
    l = word_length(m)
    assert (0.5 + 1 / math.log2(m)) ** l <= 1 / m * (1 + 1e-9)


def test_alpha_floor():
    P = SeparatorParams.build(16, 0.25, 4)
    assert P.alpha == pytest.approx(0.25)
    P = SeparatorParams.build(16, 0.25, 10_000)
    assert P.alpha == pytest.approx(2.0**-10)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.integers(0, 2**32))
@settings(max_examples=40)
def test_poisson_parity_consistent(xs, seed):
    x = np.array([xs + xs])  # every point appears twice
    bits = poisson_parity(x, 2.0, make_rng(seed))
    h = len(xs)
    assert set(np.unique(bits)) <= {0, 1}
    assert np.array_equal(bits[:, :h], bits[:, h:])


def test_parity_at_origin_is_one():
    bits = poisson_parity(np.zeros((100, 1)), 3.0, make_rng(1))
    assert np.all(bits == 1)


def test_choose_words_uniform_over_n_atoms():
    # n = 3 < 2^l: each vertex word must be picked with probability 1/3, including repeats
    words = np.tile(np.array([[5, 5, 9]], dtype=np.uint64), (60_000, 1))
    W = _choose_words(words, 4, make_rng(2))
    assert np.mean(W == 5) == pytest.approx(1 / 3, abs=0.01)
    assert np.mean(W == 9) == pytest.approx(1 / 3, abs=0.01)
    unused = W[(W != 5) & (W != 9)]
    assert set(unused.tolist()) == {0}


def test_choose_words_large_n():
    words = np.zeros((1000, 20), dtype=np.uint64)
    W = _choose_words(words, 3, make_rng(0))
    assert np.all(W < 8)


def _gap_params(variant, n=8):
    return SeparatorParams.build(16, 0.125, n, variant)


@pytest.mark.parametrize("variant", ["l1", "l2"])
def test_batch_structure(variant):
    _, _, _, _, emb = solved_gap(8)
    P = _gap_params(variant)
    b = sample_separators(emb, P, make_rng(3), 5000)
    assert len(b) == 5000
    assert b.members.shape == (5000, 8)
    expect = (emb.norms_sq[None, :] >= b.r[:, None]) & (b.words == b.W[:, None])
    assert np.array_equal(b.members, expect)
    assert np.all((b.r > 0) & (b.r < 1))
    again = sample_separators(emb, P, make_rng(3), 5000)
    assert np.array_equal(again.members, b.members)


def test_chunking_is_invisible_to_size():
    _, _, _, _, emb = solved_gap(8)
    P = _gap_params("l2")
    a = sample_separators(emb, P, make_rng(5), 3000)
    assert a.members.shape[0] == 3000


def test_zero_rows_never_selected():
    G = np.zeros((4, 4))
    G[:3, :3] = np.eye(3) / 3
    emb = normalize(G)
    b = sample_separators(emb, SeparatorParams.build(16, 0.125, 4, "l2"), make_rng(0), 20_000)
    assert not b.members[:, 3].any()


def test_single_sample():
    _, _, _, sol, emb = solved_gap(8)
    s = sample_separator(sol, emb, _gap_params("l2"), make_rng(0))
    assert s.S.n == 8
    assert len(s.words) == 8


def test_base_assignments_shapes():
    emb = normalize(orthogonal_gram(6))
    assert omega_l2(emb, 0.25, make_rng(0), 10).shape == (10, 6)
    assert omega_l1(emb, 0.25, make_rng(0), 10).shape == (10, 6)
    assert ScaleNet()(np.zeros((6, 6)), 1.0, make_rng(0), 7).shape == (7, 6)


def test_estimate_p_range():
    emb = normalize(orthogonal_gram(6))
    p = estimate_p(emb, 0.25, make_rng(0))
    assert 0.01 <= p <= 0.249
    # a single point has no far pair
    assert estimate_p(normalize(np.ones((1, 1))), 0.25, make_rng(0)) == 0.05


@pytest.mark.parametrize("variant", ["l1", "l2"])
def test_cut_bound_dominates_empirical_rate(variant):
    H = gen_random_hypergraph(10, 14, (2, 4), seed=301)
    _, _, emb = solved(H, Fraction(1, 4))
    P = SeparatorParams.build(16, 0.125, 10, variant)
    b = sample_separators(emb, P, make_rng(11), 40_000)
    for e in H.edges:
        sub = b.members[:, list(e)]
        rate = np.mean(sub.any(axis=1) & ~sub.all(axis=1))
        bound = cut_probability_bound(emb, e, P)
        se = math.sqrt(max(rate * (1 - rate), 1e-9) / 40_000)
        assert rate <= bound.total + 4 * se
        assert bound.e1 >= 0 and bound.e2 >= 0


def test_cut_bound_singleton_edge():
    emb = normalize(orthogonal_gram(4))
    assert cut_probability_bound(emb, (2,), SeparatorParams.build(16, 0.125, 4)).total == 0


def test_diagnostic_dump():
    _, _, _, _, emb = solved_gap(8)
    b = sample_separators(emb, _gap_params("l2"), make_rng(0), 1000)
    d = diagnostic_dump(b)
    assert d["samples"] == 1000
    assert sum(d["size_hist"]) == 1000
    assert sum(d["r_hist"]) == 1000


def test_variant_enum():
    assert Variant("l1") is Variant.L1_WORDS
    assert SeparatorParams.build(16, 0.25, 4, "l2").describe()["K"] == 2
