"""Statistical property checks for the samplers.

Each check draws its own Monte Carlo sample from an explicit stream and
returns a :class:`Check` with the measured value, the threshold it was held
to and a pass flag. The CLI ``verify`` command and the test-suite share them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embedding import NormalizedEmbedding, normalize
from .separators import (
    SeparatorParams,
    amplify,
    omega_l1,
    omega_l2,
    poisson_parity,
    sample_separators,
    sqrt_log,
)
from .streams import make_rng

# E[(1 - exp(-2|g|)) / 2] for a standard Gaussian g, i.e. (1 - 2 e^2 Phi(-2)) / 2
FAR_PAIR_SEPARATION = 0.5 * (1 - 2 * math.exp(2) * 0.5 * math.erfc(2 / math.sqrt(2)))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: value={self.value:.6g} threshold={self.threshold:.6g}"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value, "threshold": self.threshold, "detail": self.detail}


def pair_embedding(sq_dist: float) -> NormalizedEmbedding:
    """Two unit vectors at squared distance ``sq_dist`` (each of squared norm 1/2 before normalizing)."""
    c = 1 - sq_dist / 2
    s = math.sqrt(max(1 - c * c, 0.0))
    v = np.array([[1.0, 0.0], [c, s]]) / math.sqrt(2)
    return normalize(v @ v.T)


def marginal_law(emb: NormalizedEmbedding, params: SeparatorParams, samples: int, seed=0, z: float = 4.0) -> Check:
    """Every vertex lands in ``S`` at rate ``alpha |u|^2`` within ``z`` standard errors."""
    batch = sample_separators(emb, params, make_rng(seed), samples)
    norms = np.where(emb.nonzero, emb.norms_sq, 0.0)
    target = params.alpha * norms
    rate = batch.members.mean(axis=0)
    se = np.sqrt(np.maximum(target * (1 - target), 0.0) / samples)
    dev = np.abs(rate - target)
    zs = np.where(se > 0, dev / np.where(se > 0, se, 1.0), np.where(dev > 0, np.inf, 0.0))
    worst = float(zs.max())
    return Check(
        f"marginal[{params.variant.value}]",
        worst <= z,
        worst,
        z,
        {"rate": rate.tolist(), "target": target.tolist(), "samples": samples},
    )


def far_pair_law(emb: NormalizedEmbedding, params: SeparatorParams, samples: int, seed=0, z: float = 4.0) -> Check:
    """Joint membership of far pairs stays below ``alpha min(|u|^2, |v|^2) / m`` plus ``z`` s.e."""
    batch = sample_separators(emb, params, make_rng(seed), samples)
    G = emb.source_gram
    d = np.diag(G)
    src = d[:, None] + d[None, :] - 2 * G
    mn = np.minimum(d[:, None], d[None, :])
    iu, ju = np.triu_indices(emb.n, 1)
    far = (src[iu, ju] >= params.beta * mn[iu, ju]) & (mn[iu, ju] > 0)
    iu, ju = iu[far], ju[far]
    if len(iu) == 0:
        return Check(f"far_pairs[{params.variant.value}]", True, 0.0, 0.0, {"pairs": 0})
    M = batch.members.astype(np.float64)
    joint = (M.T @ M / samples)[iu, ju]
    bound = params.alpha * mn[iu, ju] / params.m
    se = np.sqrt(bound * (1 - bound) / samples)
    excess = joint - (bound + z * se)
    worst = int(np.argmax(excess))
    return Check(
        f"far_pairs[{params.variant.value}]",
        bool(excess.max() <= 0),
        float(joint[worst]),
        float(bound[worst] + z * se[worst]),
        {"pairs": int(len(iu)), "max_joint": float(joint.max()), "samples": samples},
    )


def parity_law(lams=(0.0, 0.5, 1.0, 2.0), trials: int = 100_000, seed=0, beta: float = 0.25, tol: float = 0.01) -> Check:
    """``Pr[N(x) and N(x + lam sqrt(beta)) have equal parity] = (1 + e^{-2 lam}) / 2``.

    The two points sit at a random offset from the origin so the process is
    read through the same cumulative-count path as the samplers use.
    """
    rng = make_rng(seed)
    rate = 1 / math.sqrt(beta)
    errs = {}
    for lam in lams:
        a = rng.normal(size=trials)
        x = np.stack([a, a + lam * math.sqrt(beta)], axis=1)
        bits = poisson_parity(x, rate, rng)
        got = float(np.mean(bits[:, 0] == bits[:, 1]))
        errs[lam] = (got, (1 + math.exp(-2 * lam)) / 2)
    worst = max(abs(g - e) for g, e in errs.values())
    return Check("parity_law", worst <= tol, worst, tol, {str(k): v for k, v in errs.items()})


def l2_separation(trials: int = 100_000, seed=0, beta: float = 0.25, floor: float = 0.32) -> Check:
    """Separation rate of ``omega_l2`` on a pair at squared distance exactly ``beta`` (the worst far pair)."""
    emb = pair_embedding(beta)
    bits = omega_l2(emb, beta, make_rng(seed), trials)
    rate = float(np.mean(bits[:, 0] != bits[:, 1]))
    return Check("l2_separation", rate >= floor, rate, floor, {"exact": FAR_PAIR_SEPARATION, "beta": beta})


def amplified_separation(m: float = 16, p: float = 0.15, trials: int = 100_000, seed=0, beta: float = 0.25, z: float = 4.0) -> Check:
    """XOR of ``K(m, p)`` L2 assignments separates the worst far pair w.p. at least ``1/2 - 1/log2 m``."""
    params = SeparatorParams.build(m, beta, 2, "l2", p=p)
    emb = pair_embedding(beta)
    bits = amplify(lambda g, k: omega_l2(emb, beta, g, k), params.K, make_rng(seed), trials)
    rate = float(np.mean(bits[:, 0] != bits[:, 1]))
    goal = 0.5 - 1 / math.log2(m)
    se = math.sqrt(goal * (1 - goal) / trials)
    p_base = FAR_PAIR_SEPARATION
    return Check(
        "amplified_separation",
        rate >= goal - z * se,
        rate,
        goal - z * se,
        {"K": params.K, "predicted": (1 - (1 - 2 * p_base) ** params.K) / 2},
    )


def word_collision(emb: NormalizedEmbedding, params: SeparatorParams, samples: int, seed=0, z: float = 4.0) -> Check:
    """Far pairs share a word with probability at most ``(1/2 + 1/log2 m)^l``."""
    batch = sample_separators(emb, params, make_rng(seed), samples)
    D = emb.sq_distances()
    iu, ju = np.triu_indices(emb.n, 1)
    far = D[iu, ju] >= params.beta
    iu, ju = iu[far], ju[far]
    bound = (0.5 + 1 / math.log2(params.m)) ** params.l
    if len(iu) == 0:
        return Check("word_collision", True, 0.0, bound, {"pairs": 0})
    rate = (batch.words[:, iu] == batch.words[:, ju]).mean(axis=0)
    se = math.sqrt(bound * (1 - bound) / samples)
    worst = float(rate.max())
    return Check("word_collision", worst <= bound + z * se, worst, bound + z * se, {"pairs": int(len(iu)), "below_1_over_m": bound <= 1 / params.m})


def l1_split(emb: NormalizedEmbedding, beta: float, edge, trials: int = 100_000, seed=0, C: float = 1.0) -> Check:
    """Empirical split rate of ``omega_l1`` on ``edge`` against ``C sqrt(log n) D / beta``.

    The bound holds for any net once the l2^2 triangle inequality holds: the
    distances to the net differ by at most ``D`` across the edge and ``t`` is
    uniform on an interval of length ``beta / (C sqrt(log n))``.
    """
    bits = omega_l1(emb, beta, make_rng(seed), trials, C=C)
    e = list(edge)
    sub = bits[:, e]
    split = float(np.mean(sub.min(axis=1) != sub.max(axis=1)))
    D = float(emb.sq_distances()[np.ix_(e, e)].max())
    bound = min(1.0, C * sqrt_log(emb.n) * D / beta)
    return Check("l1_split", split <= bound + 4 * math.sqrt(max(bound * (1 - bound), 1e-12) / trials), split, bound, {"D": D})
