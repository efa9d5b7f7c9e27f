"""SDP relaxation for hypergraph small set expansion.

The relaxation over Gram matrices ``X = [<u, v>]`` is

    minimise    sum_e t_e
    subject to  t_e >= |u - v|^2                   for u, v in e
                sum_v X_uv <= delta n X_uu          for every u       (spread)
                trace X = 1                                          (normalization)
                d_uv + d_vw >= d_uw                 for all triples    (triangle)
                0 <= X_uv <= X_uu                   for u != v         (box)
                X PSD

with ``d_uv = X_uu + X_vv - 2 X_uv``. The per-edge ``max`` of the objective is
linearised through the epigraph scalars ``t_e``.

:func:`solve` runs an operator-splitting (ADMM) method on the standard form
``min c.x  s.t.  A x in C`` where ``C`` is a product of an affine set, a
non-positive orthant and the PSD cone. Triangle inequalities, ``O(n^3)`` of
them, are kept in an active set that is grown by full scans.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .hypergraph import Hypergraph, InvalidInstance, VertexSet, as_fraction

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 50_000
TOL_PSD = 1e-8

FAMILIES = ("spread", "normalization", "triangle", "box", "diag", "psd", "epigraph")


class NonConvergence(RuntimeError):
    """The solver hit ``max_iters`` before meeting the tolerance.

    ``solution`` holds the last iterate, usable with care.
    """

    def __init__(self, iterations, residuals, solution=None):
        self.iterations = iterations
        self.residuals = residuals
        self.solution = solution
        worst = max(residuals, key=lambda k: residuals[k]) if residuals else None
        super().__init__(
            f"SDP solver did not converge in {iterations} iterations"
            + (f" (worst family {worst}: {float(residuals[worst]):.3g})" if worst else "")
        )


@dataclass(frozen=True)
class RelaxationSpec:
    n: int
    delta: Fraction
    edges: tuple

    @property
    def delta_n(self) -> Fraction:
        return self.delta * self.n

    @property
    def pair_edges(self) -> list[int]:
        """Indices of edges that contribute an epigraph variable (size >= 2)."""
        return [i for i, e in enumerate(self.edges) if len(e) >= 2]

    def epigraph_pairs(self) -> list[tuple[int, int, int]]:
        out = []
        for k, i in enumerate(self.pair_edges):
            e = self.edges[i]
            for a in range(len(e)):
                for b in range(a + 1, len(e)):
                    out.append((k, e[a], e[b]))
        return out

    def constraint_counts(self) -> dict:
        n = self.n
        return {
            "spread": n,
            "normalization": 1,
            "triangle": n * (n - 1) * (n - 2),
            "box": n * (n - 1),
            "epigraph": sum(len(e) * (len(e) - 1) // 2 for e in self.edges),
        }


@dataclass(frozen=True)
class ExactGram:
    """Gram matrix ``num / den`` with an integer certificate ``num == factor @ factor.T``."""

    num: np.ndarray
    den: int
    factor: np.ndarray


@dataclass
class SdpSolution:
    gram: np.ndarray
    vectors: np.ndarray
    sdpcost: float | Fraction
    residuals: dict = field(default_factory=dict)
    iterations: int = 0
    converged: bool = True
    exact: Optional[ExactGram] = None
    epigraph: Optional[np.ndarray] = None
    info: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    @property
    def norms_sq(self) -> np.ndarray:
        return np.clip(np.diag(self.gram).astype(float), 0.0, None)

    def to_json(self) -> str:
        obj = {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "gram": [float(x) for x in np.asarray(self.gram, dtype=float).ravel()],
            "sdpcost": float(self.sdpcost),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "iterations": self.iterations,
            "converged": self.converged,
        }
        return json.dumps(obj, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SdpSolution":
        obj = json.loads(text)
        n = int(obj["n"])
        gram = np.array(obj["gram"], dtype=float).reshape(n, n)
        return cls(
            gram=gram,
            vectors=factorize(gram),
            sdpcost=float(obj["sdpcost"]),
            residuals=dict(obj.get("residuals", {})),
            iterations=int(obj.get("iterations", 0)),
            converged=bool(obj.get("converged", True)),
        )


@dataclass(frozen=True)
class FeasibilityReport:
    residuals: dict
    tol: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.residuals.values())

    @property
    def worst(self):
        return max(self.residuals.values())


def build_relaxation(H: Hypergraph, delta) -> RelaxationSpec:
    delta = as_fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise InvalidInstance(f"delta must lie in (0, 1/2], got {delta}")
    if delta * H.n < 1:
        raise InvalidInstance(f"delta * n = {float(delta * H.n):.4g} < 1: no admissible set")
    return RelaxationSpec(n=H.n, delta=delta, edges=H.edges)


def factorize(gram: np.ndarray) -> np.ndarray:
    """Rows ``v_u`` with ``<v_u, v_w> = gram[u, w]``; negative eigenvalues clamped to 0."""
    gram = np.asarray(gram, dtype=float)
    w, U = np.linalg.eigh((gram + gram.T) / 2)
    keep = w > 0
    if not np.any(keep):
        return np.zeros((gram.shape[0], 1))
    return U[:, keep] * np.sqrt(w[keep])


def pair_distances(gram: np.ndarray) -> np.ndarray:
    diag = np.diagonal(gram, axis1=-2, axis2=-1)
    return diag[..., :, None] + diag[..., None, :] - 2 * gram


def objective(spec: RelaxationSpec, gram) -> float | Fraction:
    """``sum_e max_{u,v in e} |u - v|^2``; exact when ``gram`` holds Fractions."""
    d = pair_distances(gram)
    total = 0
    for e in spec.edges:
        if len(e) < 2:
            continue
        idx = np.array(e)
        total += d[np.ix_(idx, idx)].max()
    return total


def _residual_arrays(X, spec: RelaxationSpec, t=None):
    """Per-family constraint violations of ``X`` (shape ``(..., n, n)``), unscaled.

    Works for integer and float arrays alike; the caller divides by the
    common denominator for integer input.
    """
    n = spec.n
    dn = spec.delta_n
    p, q = dn.numerator, dn.denominator
    diag = np.diagonal(X, axis1=-2, axis2=-1)
    zero = np.zeros(X.shape[:-2], dtype=X.dtype)

    spread = (q * X.sum(axis=-1) - p * diag).max(axis=-1)
    d = pair_distances(X)
    tri = (d[..., :, None, :] - d[..., :, :, None] - d[..., None, :, :]).max(axis=(-3, -2, -1))
    off = ~np.eye(n, dtype=bool)
    lower = (-X[..., off]).max(axis=-1) if n > 1 else zero
    upper = (X - diag[..., :, None])[..., off].max(axis=-1) if n > 1 else zero
    box = np.maximum(lower, upper)
    epi = zero
    if t is not None and spec.pair_edges:
        pairs = spec.epigraph_pairs()
        k, u, v = (np.array(c) for c in zip(*pairs))
        epi = (d[..., u, v] - t[..., k]).max(axis=-1)
    return {
        "spread": (np.maximum(spread, 0), q),
        "triangle": (np.maximum(tri, 0), 1),
        "box": (np.maximum(box, 0), 1),
        "diag": (np.maximum(np.maximum(-diag, 0).max(axis=-1), 0), 1),
        "epigraph": (np.maximum(epi, 0), 1),
        "trace": diag.sum(axis=-1),
    }


def check_feasibility(sol: SdpSolution, spec: RelaxationSpec, tol: float = DEFAULT_TOL) -> FeasibilityReport:
    """Largest violation of every constraint family.

    Solutions carrying an :class:`ExactGram` are checked in integer arithmetic
    and their residuals are exact fractions.
    """
    if sol.n != spec.n:
        raise ValueError(f"solution has {sol.n} vertices, relaxation has {spec.n}")
    if sol.exact is not None:
        ex = sol.exact
        num = np.asarray(ex.num, dtype=np.int64)
        raw = _residual_arrays(num, spec)
        res = {}
        for fam in ("spread", "triangle", "box", "diag", "epigraph"):
            val, scale = raw[fam]
            res[fam] = Fraction(int(val), scale * ex.den)
        res["normalization"] = abs(Fraction(int(raw["trace"]), ex.den) - 1)
        diag_hi = int(np.max(np.diag(num))) - ex.den
        res["diag"] = max(res["diag"], Fraction(max(diag_hi, 0), ex.den))
        F = np.asarray(ex.factor, dtype=np.int64)
        if np.array_equal(num, F @ F.T):
            res["psd"] = Fraction(0)
        else:
            res["psd"] = Fraction(max(0.0, -float(np.linalg.eigvalsh(num / ex.den).min())))
        return FeasibilityReport({k: res[k] for k in FAMILIES}, tol)

    X = np.asarray(sol.gram, dtype=float)
    raw = _residual_arrays(X, spec, sol.epigraph)
    res = {fam: float(raw[fam][0]) / raw[fam][1] for fam in ("spread", "triangle", "box", "diag", "epigraph")}
    res["normalization"] = abs(float(raw["trace"]) - 1.0)
    res["diag"] = max(res["diag"], max(float(np.diag(X).max()) - 1.0, 0.0))
    res["psd"] = max(0.0, -float(np.linalg.eigvalsh((X + X.T) / 2).min()))
    return FeasibilityReport({k: res[k] for k in FAMILIES}, tol)


def intended_solution(H: Hypergraph, S, delta) -> SdpSolution:
    """Solution ``u = e / sqrt|S|`` on ``S`` and ``0`` elsewhere, in exact arithmetic."""
    S = VertexSet.of(S, H.n)
    delta = as_fraction(delta)
    k = len(S)
    if k == 0:
        raise InvalidInstance("intended solution needs a nonempty set")
    if k > delta * H.n:
        raise InvalidInstance(f"|S| = {k} exceeds delta n = {float(delta * H.n):.4g}")
    factor = S.mask().astype(np.int64)[:, None]
    num = factor @ factor.T
    gram = num / k
    spec = RelaxationSpec(n=H.n, delta=delta, edges=H.edges)
    fgram = np.empty((H.n, H.n), dtype=object)
    fgram[...] = [[Fraction(int(x), k) for x in row] for row in num]
    cost = objective(spec, fgram)
    vectors = factor / math.sqrt(k)
    return SdpSolution(
        gram=gram,
        vectors=vectors,
        sdpcost=Fraction(cost),
        exact=ExactGram(num=num, den=k, factor=factor),
        info={"kind": "intended", "set": list(S)},
    )


def intended_batch_residuals(H: Hypergraph, masks: np.ndarray, delta) -> tuple[dict, list]:
    """Exact residuals and objectives of the intended solutions of many sets at once.

    ``masks`` is a boolean ``(B, n)`` array whose rows all have the same size
    ``k``. Returns per-family integer-scaled violations (zero iff feasible) and
    the list of exact objectives.
    """
    masks = np.asarray(masks, dtype=np.int64)
    sizes = masks.sum(axis=1)
    if masks.size and not np.all(sizes == sizes[0]):
        raise ValueError("batch rows must have equal size")
    k = int(sizes[0]) if masks.size else 1
    delta = as_fraction(delta)
    spec = RelaxationSpec(n=H.n, delta=delta, edges=H.edges)
    num = masks[:, :, None] * masks[:, None, :]
    raw = _residual_arrays(num, spec)
    res = {fam: raw[fam][0] for fam in ("spread", "triangle", "box", "diag")}
    res["normalization"] = np.abs(raw["trace"] - k)
    F = masks[:, :, None]
    res["psd"] = np.any(num != F @ np.swapaxes(F, 1, 2), axis=(1, 2)).astype(np.int64)
    d = pair_distances(num)
    costs = np.zeros(len(masks), dtype=np.int64)
    for e in H.edges:
        if len(e) >= 2:
            idx = np.array(e)
            costs += d[:, idx][:, :, idx].max(axis=(1, 2))
    return res, [Fraction(int(c), k) for c in costs]


# ---------------------------------------------------------------------------
# Solver


class _Layout:
    """Variable layout ``x = [svec(X), t]`` with the isometric ``sqrt 2`` scaling."""

    def __init__(self, spec: RelaxationSpec):
        n = spec.n
        self.n = n
        self.N = n * (n + 1) // 2
        iu, ju = np.triu_indices(n)
        self.iu, self.ju = iu, ju
        self.index = np.zeros((n, n), dtype=np.int64)
        self.index[iu, ju] = np.arange(self.N)
        self.index[ju, iu] = np.arange(self.N)
        self.scale = np.where(iu == ju, 1.0, 1.0 / math.sqrt(2.0))
        self.n_t = len(spec.pair_edges)
        self.dim = self.N + self.n_t

    def entry(self, i, j):
        """Column and coefficient factor for the scalar entry ``X_ij``."""
        k = self.index[i, j]
        return k, self.scale[k]

    def unpack(self, x):
        X = np.zeros((self.n, self.n))
        vals = x[: self.N] * self.scale
        X[self.iu, self.ju] = vals
        X[self.ju, self.iu] = vals
        return X, x[self.N:]

    def pack(self, X, t):
        return np.concatenate([X[self.iu, self.ju] / self.scale, t])


class _RowBuilder:
    def __init__(self, layout: _Layout):
        self.L = layout
        self.rows, self.cols, self.vals, self.rhs, self.kinds = [], [], [], [], []

    def add(self, entries, tcoefs=(), rhs=0.0, kind="le"):
        r = len(self.rhs)
        acc = {}
        for (i, j), c in entries:
            col, f = self.L.entry(i, j)
            acc[col] = acc.get(col, 0.0) + c * f
        for k, c in tcoefs:
            col = self.L.N + k
            acc[col] = acc.get(col, 0.0) + c
        for col, v in acc.items():
            if v != 0.0:
                self.rows.append(r)
                self.cols.append(col)
                self.vals.append(v)
        self.rhs.append(rhs)
        self.kinds.append(kind)

    def matrix(self):
        A = sp.csr_matrix(
            (self.vals, (self.rows, self.cols)), shape=(len(self.rhs), self.L.dim)
        )
        return A, np.array(self.rhs, dtype=float), np.array(self.kinds)


def _base_rows(spec: RelaxationSpec, L: _Layout):
    n = spec.n
    dn = float(spec.delta_n)
    B = _RowBuilder(L)
    B.add([((u, u), 1.0) for u in range(n)], rhs=1.0, kind="eq")
    for u in range(n):
        B.add([((u, u), 1.0 - dn)] + [((u, v), 1.0) for v in range(n) if v != u])
    for u in range(n):
        for v in range(u + 1, n):
            B.add([((u, v), -1.0)])
    for u in range(n):
        for v in range(n):
            if u != v:
                B.add([((u, v), 1.0), ((u, u), -1.0)])
    for k, u, v in spec.epigraph_pairs():
        B.add([((u, u), 1.0), ((v, v), 1.0), ((u, v), -2.0)], [(k, -1.0)])
    return B.matrix()


def _triangle_rows(triples, L: _Layout):
    B = _RowBuilder(L)
    for u, v, w in triples:
        # d_uw - d_uv - d_vw <= 0
        B.add([((v, v), -2.0), ((u, w), -2.0), ((u, v), 2.0), ((v, w), 2.0)])
    return B.matrix()


def _violated_triangles(X, threshold):
    """Triples ``(u, v, w)`` with ``u < w`` and ``d_uw - d_uv - d_vw > threshold``."""
    d = pair_distances(X)
    viol = d[:, None, :] - d[:, :, None] - d[None, :, :]
    u, v, w = np.nonzero(viol > threshold)
    keep = (u < w) & (v != u) & (v != w)
    return list(zip(u[keep].tolist(), v[keep].tolist(), w[keep].tolist()))


def _psd_project_svec(z, L: _Layout):
    M = np.zeros((L.n, L.n))
    vals = z * L.scale
    M[L.iu, L.ju] = vals
    M[L.ju, L.iu] = vals
    w, U = np.linalg.eigh(M)
    w = np.clip(w, 0.0, None)
    P = (U * w) @ U.T
    return P[L.iu, L.ju] / L.scale


class _Admm:
    """ADMM on ``min c.x s.t. A x = z, z in C`` with per-row step sizes."""

    RHO_EQ_SCALE = 1e3

    def __init__(self, spec: RelaxationSpec, rho=0.1, sigma=1e-6, relax=1.6):
        self.spec = spec
        self.L = _Layout(spec)
        self.sigma, self.relax = sigma, relax
        self.rho_base = rho
        self.c = np.zeros(self.L.dim)
        self.c[self.L.N:] = 1.0
        A_lin, rhs, kinds = _base_rows(spec, self.L)
        self.triples: list = []
        self._set_linear(A_lin, rhs, kinds)
        # I/n satisfies every constraint whenever delta n >= 1
        X0 = np.eye(spec.n) / spec.n
        d0 = pair_distances(X0)
        t0 = np.array([d0[np.ix_(spec.edges[i], spec.edges[i])].max() for i in spec.pair_edges])
        self.x = self.L.pack(X0, t0)
        self.z = self.A @ self.x
        self.z = self._project(self.z)
        self.y = np.zeros(self.A.shape[0])
        self._factor()

    def _set_linear(self, A_lin, rhs, kinds):
        norms = np.sqrt(np.asarray(A_lin.multiply(A_lin).sum(axis=1)).ravel())
        norms[norms == 0] = 1.0
        Dinv = sp.diags(1.0 / norms)
        self.A_lin = Dinv @ A_lin
        self.b_lin = rhs / norms
        self.kinds = kinds
        self.row_norms = norms
        self.n_lin = self.A_lin.shape[0]
        psd = sp.hstack([sp.identity(self.L.N), sp.csr_matrix((self.L.N, self.L.n_t))])
        self.A = sp.vstack([self.A_lin, psd]).tocsr()
        self.AT = self.A.T.tocsr()
        self.eq = np.zeros(self.A.shape[0], dtype=bool)
        self.eq[: self.n_lin] = kinds == "eq"
        self._rho_vec()

    def _rho_vec(self):
        self.rho = np.full(self.A.shape[0], self.rho_base)
        self.rho[self.eq] *= self.RHO_EQ_SCALE

    def _factor(self):
        K = (self.AT @ sp.diags(self.rho) @ self.A).toarray()
        K[np.diag_indices_from(K)] += self.sigma
        self.chol = scipy.linalg.cho_factor(K)

    def _project(self, v):
        out = v.copy()
        lin = out[: self.n_lin]
        eq = self.eq[: self.n_lin]
        lin[eq] = self.b_lin[eq]
        lin[~eq] = np.minimum(lin[~eq], self.b_lin[~eq])
        out[self.n_lin:] = _psd_project_svec(out[self.n_lin:], self.L)
        return out

    def add_triangles(self, triples):
        A_new, rhs_new, kinds_new = _triangle_rows(triples, self.L)
        self.triples.extend(triples)
        n_old = self.n_lin
        A_lin = sp.vstack([sp.diags(self.row_norms) @ self.A_lin, A_new]).tocsr()
        rhs = np.concatenate([self.b_lin * self.row_norms, rhs_new])
        kinds = np.concatenate([self.kinds, kinds_new])
        z_psd, y_psd = self.z[n_old:], self.y[n_old:]
        z_lin, y_lin = self.z[:n_old], self.y[:n_old]
        self._set_linear(A_lin, rhs, kinds)
        z_new = np.minimum(self.A_lin[n_old:] @ self.x, self.b_lin[n_old:])
        self.z = np.concatenate([z_lin, z_new, z_psd])
        self.y = np.concatenate([y_lin, np.zeros(len(triples)), y_psd])
        self._factor()

    def step(self):
        rhs = self.sigma * self.x - self.c + self.AT @ (self.rho * self.z - self.y)
        xt = scipy.linalg.cho_solve(self.chol, rhs)
        zt = self.A @ xt
        self.x = self.relax * xt + (1 - self.relax) * self.x
        zh = self.relax * zt + (1 - self.relax) * self.z
        z_new = self._project(zh + self.y / self.rho)
        self.y = self.y + self.rho * (zh - z_new)
        self.z = z_new

    def residuals(self):
        Ax = self.A @ self.x
        ATy = self.AT @ self.y
        r_p = np.abs(Ax - self.z).max()
        r_d = np.abs(self.c + ATy).max()
        scale_p = max(np.abs(Ax).max(), np.abs(self.z).max(), 1e-12)
        scale_d = max(np.abs(ATy).max(), np.abs(self.c).max(), 1e-12)
        obj = float(self.c @ self.x)
        gap = obj + float(self.b_lin[self.eq[: self.n_lin]] @ self.y[: self.n_lin][self.eq[: self.n_lin]])
        return r_p, r_d, scale_p, scale_d, obj, gap

    def adapt_rho(self, r_p, r_d, scale_p, scale_d):
        ratio = math.sqrt((r_p / scale_p) / max(r_d / scale_d, 1e-30))
        ratio = min(max(ratio, 1e-3), 1e3)
        if ratio > 5 or ratio < 0.2:
            self.rho_base = min(max(self.rho_base * ratio, 1e-6), 1e6)
            self._rho_vec()
            self._factor()
            return True
        return False

    def current(self):
        X, _ = self.L.unpack(np.concatenate([self.z[self.n_lin:], np.zeros(self.L.n_t)]))
        _, t = self.L.unpack(self.x)
        return X, t


def solve(
    spec: RelaxationSpec,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed=0,
    check_every: int = 50,
    scan_every: int = 200,
    raise_on_failure: bool = True,
    adapt_until: int = 5000,
) -> SdpSolution:
    """Solve the relaxation to ``tol`` in every constraint family.

    Raises :class:`NonConvergence` (carrying the last iterate) when the
    tolerance is not met within ``max_iters`` iterations, unless
    ``raise_on_failure`` is false, in which case the iterate is returned with
    ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    # the iteration is deterministic; seed is accepted for interface symmetry with the samplers
    del seed
    solver = _Admm(spec)
    eps = tol
    it = 0
    last_report = None
    while it < max_iters:
        solver.step()
        it += 1
        if spec.n >= 3 and it % scan_every == 0:
            X, _ = solver.current()
            new = [tr for tr in _violated_triangles(X, tol) if tr not in set(solver.triples)]
            if new:
                solver.add_triangles(new)
                continue
        if it % check_every:
            continue
        r_p, r_d, sp_, sd_, obj, gap = solver.residuals()
        # adapt often at first, then rarely: frequent late changes of rho make the iterates cycle
        if it % (4 * check_every if it <= adapt_until else adapt_until) == 0:
            solver.adapt_rho(r_p, r_d, sp_, sd_)
        if r_p > eps * (1 + sp_) or r_d > eps * (1 + sd_) or abs(gap) > tol * (1 + abs(obj)):
            continue
        X, t = solver.current()
        sol = _make_solution(spec, X, t, it, True, solver)
        last_report = check_feasibility(sol, spec, tol)
        if last_report.passed:
            log.debug("converged after %d iterations, %d active triangles", it, len(solver.triples))
            return sol
        if spec.n >= 3 and last_report.residuals["triangle"] > tol:
            known = set(solver.triples)
            new = [tr for tr in _violated_triangles(X, tol) if tr not in known]
            if new:
                solver.add_triangles(new)
                continue
        eps /= 4
    X, t = solver.current()
    sol = _make_solution(spec, X, t, it, False, solver)
    report = check_feasibility(sol, spec, tol)
    sol.residuals = report.residuals
    if report.passed:
        # tolerance met in the final iterate although the stopping test lagged
        sol.converged = True
        return sol
    if raise_on_failure:
        raise NonConvergence(it, report.residuals, sol)
    log.warning("SDP solver stopped at max_iters=%d without meeting tol=%g", it, tol)
    return sol


def _make_solution(spec, X, t, it, converged, solver):
    X = (X + X.T) / 2
    sol = SdpSolution(
        gram=X,
        vectors=factorize(X),
        sdpcost=float(objective(spec, X)),
        iterations=it,
        converged=converged,
        epigraph=None,
        info={"active_triangles": len(solver.triples), "epigraph_total": float(np.sum(t))},
    )
    sol.residuals = check_feasibility(sol, spec, DEFAULT_TOL).residuals
    return sol
