"""Normalization of SDP vectors onto the unit sphere.

Nonzero vectors are sent to unit vectors with

    <phi(u), phi(v)> = <u, v> / max(|u|^2, |v|^2),

the zero vector to zero. The target Gram matrix is built entrywise from this
identity and factorised; its positive semidefiniteness is what makes the map
exist for inputs obeying the l2^2 triangle and box constraints.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sdp import TOL_PSD, SdpSolution, pair_distances

TOL_ZERO = 1e-9


class NotNormalizable(ValueError):
    """The input is not (close enough to) a feasible l2^2 solution."""


@dataclass(frozen=True)
class NormalizedEmbedding:
    phi: np.ndarray
    norms_sq: np.ndarray
    target: np.ndarray
    source_gram: np.ndarray
    violations: dict = field(default_factory=dict)
    min_eigenvalue: float = 0.0

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    @property
    def nonzero(self) -> np.ndarray:
        return np.linalg.norm(self.phi, axis=1) > 0

    def sq_distances(self) -> np.ndarray:
        """``|phi(u) - phi(v)|^2`` for all pairs."""
        G = self.phi @ self.phi.T
        return np.clip(pair_distances(G), 0.0, None)


def _gram_of(sol) -> np.ndarray:
    if isinstance(sol, SdpSolution):
        return np.asarray(sol.gram, dtype=float)
    return np.asarray(sol, dtype=float)


def target_gram(gram: np.ndarray, tol_zero: float = TOL_ZERO) -> tuple[np.ndarray, np.ndarray]:
    """Target matrix ``M`` and the nonzero mask, before any clamping."""
    norms = np.clip(np.diag(gram), 0.0, None)
    nz = norms > tol_zero
    denom = np.maximum(norms[:, None], norms[None, :])
    M = np.zeros_like(gram)
    both = nz[:, None] & nz[None, :]
    M[both] = gram[both] / denom[both]
    M[np.diag_indices_from(M)] = nz.astype(float)
    return M, nz


def normalize(
    sol,
    tol: float = 1e-6,
    tol_psd: float = TOL_PSD,
    tol_zero: float = TOL_ZERO,
) -> NormalizedEmbedding:
    """Map an SDP solution (or a bare Gram matrix) to unit vectors.

    Violations of the triangle inequality, of the inner-product identity and
    of ``|phi(u) - phi(v)|^2 <= 2 |u - v|^2 / max(|u|^2, |v|^2)`` are measured
    on all pairs and triples. The admissible error of an entry of ``M`` grows
    like ``tol / |u|^2``, so checks are made against ``tol`` scaled by the
    smallest nonzero squared norm.
    """
    gram = _gram_of(sol)
    gram = (gram + gram.T) / 2
    n = gram.shape[0]
    M, nz = target_gram(gram, tol_zero)
    norms = np.clip(np.diag(gram), 0.0, None)
    rho_min = float(norms[nz].min()) if np.any(nz) else 1.0
    slack = tol * (1.0 + 1.0 / rho_min)

    w, U = np.linalg.eigh(M)
    lam_min = float(w.min()) if n else 0.0
    if lam_min < -n * max(tol_psd, slack):
        raise NotNormalizable(f"target Gram matrix has eigenvalue {lam_min:.3g}")
    w = np.clip(w, 0.0, None)
    keep = w > 0
    phi = U[:, keep] * np.sqrt(w[keep]) if np.any(keep) else np.zeros((n, 1))
    lengths = np.linalg.norm(phi, axis=1)
    phi[nz] /= np.where(lengths[nz] > 0, lengths[nz], 1.0)[:, None]
    phi[~nz] = 0.0

    G = phi @ phi.T
    both = nz[:, None] & nz[None, :]
    pd = np.clip(pair_distances(G), 0.0, None)
    viol = {}
    viol["unit"] = float(np.abs(np.linalg.norm(phi[nz], axis=1) - 1).max()) if np.any(nz) else 0.0
    viol["inner_product"] = float(np.abs(G - M)[both].max()) if np.any(both) else 0.0
    tri = pd[:, None, :] - pd[:, :, None] - pd[None, :, :]
    viol["triangle"] = max(float(tri.max()), 0.0) if n else 0.0
    src = np.clip(pair_distances(gram), 0.0, None)
    denom = np.maximum(norms[:, None], norms[None, :])
    bound = np.where(both, 2 * src / np.where(both, denom, 1.0), np.inf)
    viol["distance_bound"] = max(float((pd - bound)[both].max()), 0.0) if np.any(both) else 0.0

    bad = {k: v for k, v in viol.items() if v > slack}
    if bad:
        raise NotNormalizable(
            "normalized vectors break " + ", ".join(f"{k} by {v:.3g}" for k, v in bad.items())
        )
    return NormalizedEmbedding(
        phi=phi, norms_sq=norms, target=M, source_gram=gram, violations=viol, min_eigenvalue=lam_min
    )
