from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsse.hypergraph import Hypergraph, InvalidInstance, expansion
from hsse.oracle import brute_force_hsse, gen_random_hypergraph
from hsse.sdp import (
    FAMILIES,
    NonConvergence,
    SdpSolution,
    build_relaxation,
    check_feasibility,
    factorize,
    intended_solution,
    objective,
    solve,
)

from conftest import solved_gap


def test_build_rejects_bad_delta():
    H = Hypergraph(4, ((0, 1),))
    with pytest.raises(InvalidInstance):
        build_relaxation(H, Fraction(3, 5))
    with pytest.raises(InvalidInstance):
        build_relaxation(H, Fraction(1, 8))
    assert build_relaxation(H, 0.25).delta == Fraction(1, 4)


def test_constraint_counts():
    H = Hypergraph(4, ((0, 1, 2), (2, 3)))
    c = build_relaxation(H, Fraction(1, 2)).constraint_counts()
    assert c == {"spread": 4, "normalization": 1, "triangle": 24, "box": 12, "epigraph": 4}


@given(st.integers(2, 10), st.data())
@settings(max_examples=40)
def test_intended_solution_exact(n, data):
    H = gen_random_hypergraph(n, data.draw(st.integers(0, 8)), (1, n), seed=data.draw(st.integers(0, 999)))
    k = data.draw(st.integers(1, n // 2))
    S = data.draw(st.sets(st.integers(0, n - 1), min_size=k, max_size=k))
    sol = intended_solution(H, S, Fraction(1, 2))
    rep = check_feasibility(sol, build_relaxation(H, Fraction(1, 2)))
    assert all(v == 0 for v in rep.residuals.values())
    assert set(rep.residuals) == set(FAMILIES)
    assert sol.sdpcost == expansion(H, S)


def test_intended_solution_rejects_large_set():
    with pytest.raises(InvalidInstance):
        intended_solution(Hypergraph(4, ()), {0, 1, 2}, Fraction(1, 2))


def test_factorize_roundtrip():
    A = np.random.default_rng(0).normal(size=(5, 3))
    G = A @ A.T
    V = factorize(G)
    assert np.allclose(V @ V.T, G)


@pytest.mark.parametrize("r", [4, 8])
def test_gap_instance_value(r):
    _, _, spec, sol, _ = solved_gap(r)
    assert sol.converged
    # one hyperedge whose widest pair sits at squared distance 2/r
    assert sol.sdpcost == pytest.approx(2 / r, abs=1e-4)
    assert check_feasibility(sol, spec).passed


def test_relaxation_lower_bounds_optimum():
    H = gen_random_hypergraph(9, 12, (2, 3), seed=4)
    for delta in (Fraction(1, 3), Fraction(1, 2)):
        sol = solve(build_relaxation(H, delta))
        _, opt = brute_force_hsse(H, delta)
        assert sol.sdpcost <= float(opt) + 1e-4
        assert sol.sdpcost == pytest.approx(float(objective(build_relaxation(H, delta), sol.gram)))


def test_nonconvergence_carries_iterate():
    spec = build_relaxation(gen_random_hypergraph(8, 10, (2, 3), seed=1), Fraction(1, 2))
    with pytest.raises(NonConvergence) as exc:
        solve(spec, max_iters=100)
    assert exc.value.solution is not None
    assert exc.value.iterations == 100
    sol = solve(spec, max_iters=100, raise_on_failure=False)
    assert not sol.converged


def test_solution_json_roundtrip():
    _, _, _, sol, _ = solved_gap(4)
    back = SdpSolution.from_json(sol.to_json())
    assert np.allclose(back.gram, sol.gram)
    assert back.sdpcost == pytest.approx(sol.sdpcost)


def _cvxpy_value(H, delta):
    cp = pytest.importorskip("cvxpy")
    n = H.n
    X = cp.Variable((n, n), PSD=True)
    t = cp.Variable(len(H.edges))
    d = lambda u, v: X[u, u] + X[v, v] - 2 * X[u, v]
    cons = [cp.trace(X) == 1]
    dn = float(delta * n)
    for u in range(n):
        cons.append(cp.sum(X[u, :]) <= dn * X[u, u])
        for v in range(n):
            if u != v:
                cons += [X[u, v] >= 0, X[u, v] <= X[u, u]]
                for w in range(n):
                    if w not in (u, v):
                        cons.append(d(u, w) + d(w, v) >= d(u, v))
    for k, e in enumerate(H.edges):
        for a in e:
            for b in e:
                if a < b:
                    cons.append(t[k] >= d(a, b))
        if len(e) < 2:
            cons.append(t[k] == 0)
    prob = cp.Problem(cp.Minimize(cp.sum(t)), cons)
    prob.solve(solver=cp.CLARABEL)
    return prob.value


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_matches_reference_solver(seed):
    H = gen_random_hypergraph(7, 9, (2, 3), seed=seed)
    delta = Fraction(3, 7)
    ref = _cvxpy_value(H, delta)
    ours = solve(build_relaxation(H, delta)).sdpcost
    assert ours == pytest.approx(ref, abs=1e-4)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_solution_invariants(seed):
    H = gen_random_hypergraph(10, 14, (2, 4), seed=seed)
    sol = solve(build_relaxation(H, Fraction(1, 2)), tol=1e-6)
    V = sol.vectors
    assert np.abs(V @ V.T - sol.gram).max() <= 1e-8
    assert np.linalg.eigvalsh(sol.gram).min() >= -1e-8
    # the epigraph scalars agree with the per-edge maxima of the recovered vectors
    assert sol.info["epigraph_total"] == pytest.approx(sol.sdpcost, abs=1e-6 * (1 + H.m))
    assert sol.residuals["triangle"] <= 1e-6


def test_zero_edges_value():
    sol = solve(build_relaxation(Hypergraph(6, ()), Fraction(1, 2)))
    assert sol.sdpcost <= 1e-6
