import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsse.embedding import NotNormalizable, normalize, target_gram

from conftest import orthogonal_gram, solved_gap


def test_orthogonal_vectors():
    emb = normalize(orthogonal_gram(5))
    assert np.allclose(emb.phi @ emb.phi.T, np.eye(5))
    assert np.allclose(emb.sq_distances(), 2 * (1 - np.eye(5)))


def test_zero_vectors_stay_zero():
    G = np.zeros((3, 3))
    G[:2, :2] = 0.5
    emb = normalize(G)
    assert list(emb.nonzero) == [True, True, False]
    assert np.allclose(emb.phi[2], 0)
    assert np.allclose(emb.phi[0], emb.phi[1])


def test_target_identity():
    G = np.array([[0.5, 0.2], [0.2, 0.25]])
    M, nz = target_gram(G)
    assert M[0, 1] == pytest.approx(0.4)
    assert np.all(nz)


def test_rejects_non_metric_input():
    # unit vectors at angles 0, 45 and 90 degrees break the l2^2 triangle inequality
    ang = np.array([0.0, np.pi / 4, np.pi / 2])
    V = np.stack([np.cos(ang), np.sin(ang)], axis=1) / np.sqrt(3)
    with pytest.raises(NotNormalizable):
        normalize(V @ V.T)


def test_gap_solution_normalizes():
    _, _, _, sol, emb = solved_gap(8)
    assert emb.violations["unit"] < 1e-8
    D = emb.sq_distances()
    assert D[~np.eye(8, dtype=bool)].min() > 1.9


@st.composite
def nested_sets_gram(draw):
    # Gram matrices of scaled indicator-like vectors satisfy triangle and box constraints
    n = draw(st.integers(2, 7))
    k = draw(st.integers(1, 4))
    A = draw(st.lists(st.lists(st.sampled_from([0.0, 1.0]), min_size=k, max_size=k), min_size=n, max_size=n))
    scale = draw(st.lists(st.floats(0.2, 2.0), min_size=n, max_size=n))
    V = np.array(A) * np.array(scale)[:, None]
    return V @ V.T


@given(nested_sets_gram())
@settings(max_examples=60)
def test_normalization_properties(G):
    try:
        emb = normalize(G)
    except NotNormalizable:
        return
    nz = emb.nonzero
    assert np.allclose(np.linalg.norm(emb.phi[nz], axis=1), 1)
    D = emb.sq_distances()
    tri = D[:, None, :] - D[:, :, None] - D[None, :, :]
    assert tri.max() <= 1e-6
    phiG = emb.phi @ emb.phi.T
    both = nz[:, None] & nz[None, :]
    assert np.allclose(phiG[both], emb.target[both], atol=1e-6)
