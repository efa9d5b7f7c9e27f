"""Rounding SDP solutions to small sets of low expansion.

Separator samples are drawn, truncated to size at most ``(1 + eps) delta n``,
and the nonempty truncated set with the smallest ``|E_cut(S')| / |S'|`` is
kept. :func:`solve_hsse` chains relaxation, solver, normalization and rounding
and repeats the rounding ``n`` times on independent streams.
"""
from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import separators as sep
from .embedding import normalize
from .hypergraph import Hypergraph, InvalidInstance, VertexSet, as_fraction, degree_profile, expansion, hhat_bounds
from .sdp import DEFAULT_MAX_ITERS, DEFAULT_TOL, SCHEMA_VERSION, build_relaxation, solve
from .streams import make_rng

log = logging.getLogger(__name__)

DEFAULT_MAX_SAMPLES = 200_000


class AllSamplesEmpty(RuntimeError):
    """Every truncated separator sample was empty."""

    def __init__(self, samples: int, limit: int):
        super().__init__(
            f"all {samples} truncated samples were empty (size limit {limit}); "
            "try a larger --budget or a larger eps"
        )
        self.samples = samples
        self.limit = limit


@dataclass(frozen=True)
class RoundingConfig:
    eps: float = 0.5
    delta: Fraction = Fraction(1, 4)
    variant: sep.Variant = sep.Variant.L2_POISSON
    budget: Optional[int] = None
    max_samples: int = DEFAULT_MAX_SAMPLES
    repeats: Optional[int] = None
    seed: int = 0
    threads: int = 1
    p: Optional[float] = None
    C: float = 1.0
    d_star: Optional[float] = None
    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        object.__setattr__(self, "variant", sep.Variant(self.variant))
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0 < self.delta <= Fraction(1, 2):
            raise ValueError(f"delta must lie in (0, 1/2], got {self.delta}")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be positive")
        if self.max_samples < 1 or self.threads < 1:
            raise ValueError("max_samples and threads must be positive")

    @property
    def m(self) -> float:
        return 4.0 / (self.eps * float(self.delta))

    @property
    def beta(self) -> float:
        return self.eps / 4.0

    def size_limit(self, n: int) -> int:
        return math.floor((1 + as_fraction(self.eps)) * self.delta * n)

    def params(self, n: int, p: Optional[float] = None) -> sep.SeparatorParams:
        return sep.SeparatorParams.build(self.m, self.beta, n, self.variant, p=self.p if p is None else p, C=self.C)

    def default_budget(self, n: int, alpha: float) -> int:
        scale = n if self.variant is sep.Variant.L1_WORDS else n * n
        return math.ceil(4 * scale / alpha)

    def resolved(self, n: int) -> dict:
        """The config as reported: derived values included, thread count left out."""
        d = {k: v for k, v in asdict(self).items() if k != "threads"}
        d["delta"] = str(self.delta)
        d["variant"] = self.variant.value
        d["m"] = self.m
        d["beta"] = self.beta
        d["size_limit"] = self.size_limit(n)
        return d


def truncate(S: VertexSet, eps, delta, n: int) -> VertexSet:
    """``S`` if ``|S| <= (1 + eps) delta n``, else the empty set (exact comparison)."""
    if len(S) <= (1 + as_fraction(eps)) * as_fraction(delta) * n:
        return S
    return VertexSet(frozenset(), n)


@dataclass
class CutReport:
    S: VertexSet
    cut_count: int
    phi: Fraction
    sdpcost: float
    samples_used: int
    params: dict
    oracle_opt: Optional[Fraction] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def ratio(self) -> Optional[float]:
        if self.sdpcost <= 0:
            return None
        return float(self.phi) / float(self.sdpcost)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "S": self.S.sorted(),
            "size": len(self.S),
            "cut_count": self.cut_count,
            "phi": str(self.phi),
            "phi_float": float(self.phi),
            "sdpcost": float(self.sdpcost),
            "ratio": self.ratio,
            "oracle_opt": None if self.oracle_opt is None else str(self.oracle_opt),
            "samples_used": self.samples_used,
            "params": self.params,
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(jsonable(self.to_dict()), sort_keys=True, indent=2) + "\n"


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        obj = float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


# ---------------------------------------------------------------------------
# one rounding pass


@dataclass(frozen=True)
class _Pass:
    """Best truncated sample of one pass plus the sums needed for diagnostics."""

    best: Optional[tuple]  # (cut, size, mask_tuple)
    samples: int
    nonempty: int
    cut_sum: int
    size_sum: int
    z_sum: float
    below_threshold: int


def _incidence(H: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    B = H.incidence().astype(np.int32) if H.m else np.zeros((0, H.n), dtype=np.int32)
    return B, B.sum(axis=1)


def _better(a: tuple, b: Optional[tuple]) -> bool:
    """Smaller cut/size, then smaller size, then lexicographically smaller member list."""
    if b is None:
        return True
    ca, sa, ma = a
    cb, sb, mb = b
    if ca * sb != cb * sa:
        return ca * sb < cb * sa
    if sa != sb:
        return sa < sb
    return ma < mb


def _one_pass(H, emb, params, cfg, budget, rng, sdpcost) -> _Pass:
    B, sizes_e = _incidence(H)
    limit = cfg.size_limit(H.n)
    best = None
    nonempty = cut_sum = size_sum = below = 0
    z_sum = 0.0
    thr = None if cfg.d_star is None else 4 * cfg.d_star * float(sdpcost)
    done = 0
    while done < budget:
        k = min(sep.CHUNK, budget - done)
        batch = sep.sample_separators(emb, params, rng, k)
        done += k
        members = batch.members
        sizes = members.sum(axis=1)
        keep = (sizes >= 1) & (sizes <= limit)
        if not np.any(keep):
            continue
        mem = members[keep]
        sz = sizes[keep].astype(np.int64)
        inside = mem.astype(np.int32) @ B.T
        cuts = ((inside > 0) & (inside < sizes_e[None, :])).sum(axis=1).astype(np.int64)
        nonempty += int(keep.sum())
        cut_sum += int(cuts.sum())
        size_sum += int(sz.sum())
        if thr is not None and thr > 0:
            z_sum += float((sz - cuts / thr).sum())
            below += int((cuts < thr * sz).sum())
        # exact minimum ratio, then smallest size, then lexicographic
        frac = cuts / sz
        cand = np.flatnonzero(frac <= frac.min() + 1e-12)
        cand = cand[sz[cand] == sz[cand].min()]
        rows, first = np.unique(mem[cand], axis=0, return_index=True)
        for row, i in zip(rows, cand[first]):
            c = (int(cuts[i]), int(sz[i]), tuple(np.flatnonzero(row).tolist()))
            if _better(c, best):
                best = c
    return _Pass(best, done, nonempty, cut_sum, size_sum, z_sum, below)


def _merge(passes: list[_Pass]) -> tuple[Optional[tuple], dict]:
    best = None
    for p in passes:
        if p.best is not None and _better(p.best, best):
            best = p.best
    samples = sum(p.samples for p in passes)
    nonempty = sum(p.nonempty for p in passes)
    return best, {
        "samples": samples,
        "nonempty": nonempty,
        "cut_sum": sum(p.cut_sum for p in passes),
        "size_sum": sum(p.size_sum for p in passes),
        "z_sum": sum(p.z_sum for p in passes),
        "below_threshold": sum(p.below_threshold for p in passes),
    }


def _budgets(cfg: RoundingConfig, n: int, alpha: float, repeats: int) -> tuple[int, dict]:
    requested = cfg.budget if cfg.budget is not None else cfg.default_budget(n, alpha)
    per = min(requested, max(1, cfg.max_samples // repeats))
    return per, {
        "requested_per_repeat": requested,
        "per_repeat": per,
        "repeats": repeats,
        "cap": cfg.max_samples,
        "capped": per < requested,
    }


def _run(H, sol, emb, cfg, params, repeats, seed_seq) -> CutReport:
    n = H.n
    per, budget_info = _budgets(cfg, n, params.alpha, repeats)
    streams = [make_rng(s) for s in seed_seq.spawn(repeats)]

    def work(rng):
        return _one_pass(H, emb, params, cfg, per, rng, sol.sdpcost)

    if cfg.threads > 1 and repeats > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            passes = list(pool.map(work, streams))
    else:
        passes = [work(r) for r in streams]
    best, tot = _merge(passes)
    if best is None:
        raise AllSamplesEmpty(tot["samples"], cfg.size_limit(n))
    cut, size, members = best
    S = VertexSet(frozenset(members), n)
    phi = expansion(H, S) if 0 < size < n else Fraction(cut, size)
    samples = tot["samples"]
    diag = {
        "budget": budget_info,
        "nonempty_rate": tot["nonempty"] / samples,
        "nonempty_rate_floor": params.alpha / 2,
        "mean_cut": tot["cut_sum"] / samples,
        "separator": params.describe(),
    }
    if cfg.d_star is not None:
        diag["d_star"] = cfg.d_star
        diag["mean_Z"] = tot["z_sum"] / samples
        diag["below_threshold"] = tot["below_threshold"]
    return CutReport(
        S=S,
        cut_count=cut,
        phi=phi,
        sdpcost=float(sol.sdpcost),
        samples_used=samples,
        params=cfg.resolved(n),
        diagnostics=diag,
    )


def _seed_seq(cfg: RoundingConfig, rng=None) -> np.random.SeedSequence:
    if isinstance(rng, np.random.SeedSequence):
        return rng
    if isinstance(rng, np.random.Generator):
        return np.random.SeedSequence(int(rng.integers(0, 2**63)))
    return np.random.SeedSequence(cfg.seed if rng is None else rng)


def round_l1(H: Hypergraph, sol, emb, cfg: RoundingConfig, rng=None, repeats: int = 1, p: Optional[float] = None) -> CutReport:
    """Best-ratio rounding with the net-threshold separator."""
    cfg = _with_variant(cfg, sep.Variant.L1_WORDS)
    ss = _seed_seq(cfg, rng)
    p_stream, body = ss.spawn(2)
    if p is None:
        p = cfg.p
    if p is None:
        p = sep.estimate_p(emb, cfg.beta, make_rng(p_stream), net=sep.ScaleNet(), C=cfg.C)
    params = cfg.params(H.n, p=p)
    report = _run(H, sol, emb, cfg, params, repeats, body)
    report.diagnostics["p_estimated"] = cfg.p is None
    return report


def round_l2(H: Hypergraph, sol, emb, cfg: RoundingConfig, rng=None, repeats: int = 1) -> CutReport:
    """Best-ratio rounding with the Gaussian/Poisson separator, plus the degree-based bound terms."""
    cfg = _with_variant(cfg, sep.Variant.L2_POISSON)
    ss = _seed_seq(cfg, rng)
    _, body = ss.spawn(2)
    params = cfg.params(H.n)
    report = _run(H, sol, emb, cfg, params, repeats, body)
    prof = degree_profile(H)
    hb = hhat_bounds(H)
    m = cfg.m
    cost = max(float(sol.sdpcost), 0.0)
    report.diagnostics["cauchy_schwarz"] = {
        "C_empirical": report.diagnostics["mean_cut"] / params.alpha,
        "term_linear": m * cost,
        "term_sqrt": m * math.log2(m) * math.log2(math.log2(m)) * math.sqrt(prof.hhat_bound * cost),
        "hhat": prof.hhat_bound,
        "hhat_bounds": {k: v for k, v in hb.items() if k != "representatives"},
    }
    return report


def _with_variant(cfg: RoundingConfig, variant: sep.Variant) -> RoundingConfig:
    if cfg.variant is variant:
        return cfg
    d = asdict(cfg)
    d["variant"] = variant
    return RoundingConfig(**d)


def solve_hsse(H: Hypergraph, delta=None, eps=None, cfg: Optional[RoundingConfig] = None) -> CutReport:
    """Relax, solve, normalize and round; the rounding is repeated ``cfg.repeats`` (default ``n``) times."""
    cfg = cfg or RoundingConfig()
    over = {}
    if delta is not None:
        over["delta"] = as_fraction(delta)
    if eps is not None:
        over["eps"] = eps
    if over:
        d = asdict(cfg)
        d.update(over)
        cfg = RoundingConfig(**d)
    if H.n < 2:
        raise InvalidInstance("need at least two vertices for a proper subset")
    spec = build_relaxation(H, cfg.delta)
    sol = solve(spec, tol=cfg.tol, max_iters=cfg.max_iters)
    # solver noise of order tol on a zero vector must not be blown up to unit length
    emb = normalize(sol, tol=cfg.tol, tol_zero=10 * cfg.tol)
    repeats = cfg.repeats if cfg.repeats is not None else H.n
    ss = np.random.SeedSequence(cfg.seed)
    if cfg.variant is sep.Variant.L1_WORDS:
        report = round_l1(H, sol, emb, cfg, rng=ss, repeats=repeats)
    else:
        report = round_l2(H, sol, emb, cfg, rng=ss, repeats=repeats)
    report.diagnostics["sdp"] = {
        "iterations": sol.iterations,
        "residuals": {k: float(v) for k, v in sorted(sol.residuals.items())},
        "zero_vectors": int((~emb.nonzero).sum()),
    }
    return report
