"""Random binary assignments and hypergraph orthogonal separators.

A separator sample is built from ``l`` amplified assignments (each the XOR of
``K`` base assignments) that spell a word ``W(u)`` per vertex; a random word
``W`` and a random threshold ``r`` then select

    S = {u : |u|^2 >= r and W(u) = W}.

Two base assignments are provided. ``L2_POISSON`` projects the normalized
vectors on a Gaussian direction and records the parity of a rate
``1/sqrt(beta)`` Poisson process at the projection. ``L1_WORDS`` thresholds the
l2^2 distance to a random net ``U`` at a uniform ``t``; the net is drawn by a
pluggable :class:`NetGenerator`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

import numpy as np

from .embedding import NormalizedEmbedding
from .hypergraph import VertexSet

DEFAULT_P = {"l1": 0.05, "l2": 0.15}
CHUNK = 2048  # samples drawn per vectorised block


class Variant(str, enum.Enum):
    L1_WORDS = "l1"
    L2_POISSON = "l2"


def word_length(m: float) -> int:
    """``ceil(log2 m / (1 - log2(1 + 2 / log2 m)))``, defined for ``m > 4``."""
    if m <= 4:
        raise ValueError(f"word length needs m > 4, got {m}")
    lm = math.log2(m)
    return math.ceil(lm / (1 - math.log2(1 + 2 / lm)))


def amplification_count(m: float, p: float) -> int:
    """``max(ceil(log2 log2 m / -log2(1 - 4p)), 1)``."""
    if not 0 < p < 0.25:
        raise ValueError(f"p must lie in (0, 1/4), got {p}")
    if m <= 2:
        return 1
    return max(math.ceil(math.log2(math.log2(m)) / -math.log2(1 - 4 * p)), 1)


def sqrt_log(n: int) -> float:
    """``sqrt(ln n)`` floored at 1, the scale of the net threshold."""
    return math.sqrt(max(math.log(max(n, 1)), 1.0))


class NetGenerator(Protocol):
    def __call__(self, sq_dist: np.ndarray, scale: float, rng: np.random.Generator, size: int) -> np.ndarray:
        """Boolean ``(size, n)`` array of net memberships."""


@dataclass(frozen=True)
class ScaleNet:
    """Heuristic net: a scale ``j`` uniform in ``0..ceil(log2 n)``, then each vertex kept w.p. ``2^-j``.

    Carries no approximation guarantee; the pair-separation constant it
    achieves is measured per instance by :func:`estimate_p`.
    """

    def __call__(self, sq_dist, scale, rng, size):
        n = sq_dist.shape[0]
        top = math.ceil(math.log2(n)) if n > 1 else 0
        j = rng.integers(0, top + 1, size=size)
        keep = 2.0 ** (-j)
        return rng.random((size, n)) < keep[:, None]


@dataclass(frozen=True)
class SeparatorParams:
    m: float
    beta: float
    n: int
    variant: Variant = Variant.L2_POISSON
    p: float = 0.15
    C: float = 1.0
    net: NetGenerator = field(default_factory=ScaleNet, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.n < 1:
            raise ValueError("need at least one vertex")
        word_length(self.m)
        amplification_count(self.m, self.p)

    @classmethod
    def build(cls, m, beta, n, variant=Variant.L2_POISSON, p=None, **kw) -> "SeparatorParams":
        variant = Variant(variant)
        return cls(m=m, beta=beta, n=n, variant=variant, p=DEFAULT_P[variant.value] if p is None else p, **kw)

    @property
    def l(self) -> int:
        return word_length(self.m)

    @property
    def K(self) -> int:
        return amplification_count(self.m, self.p)

    @property
    def alpha(self) -> float:
        return max(2.0 ** (-self.l), 1.0 / self.n)

    def describe(self) -> dict:
        return {
            "m": self.m,
            "beta": self.beta,
            "l": self.l,
            "K": self.K,
            "p": self.p,
            "alpha": self.alpha,
            "C": self.C,
            "variant": self.variant.value,
        }


@dataclass(frozen=True)
class SeparatorSample:
    S: VertexSet
    W: int
    r: float
    words: tuple


@dataclass(frozen=True)
class SeparatorBatch:
    """``size`` independent separator samples stored row-wise."""

    members: np.ndarray
    words: np.ndarray
    W: np.ndarray
    r: np.ndarray

    def __len__(self):
        return self.members.shape[0]

    def sample(self, i: int) -> SeparatorSample:
        n = self.members.shape[1]
        return SeparatorSample(
            S=VertexSet(frozenset(np.flatnonzero(self.members[i]).tolist()), n),
            W=int(self.W[i]),
            r=float(self.r[i]),
            words=tuple(int(w) for w in self.words[i]),
        )


# ---------------------------------------------------------------------------
# base assignments


def poisson_parity(x: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Parity bits of a rate-``rate`` Poisson process on the line, read at ``x``.

    ``x`` has shape ``(size, n)``; each row uses an independent process
    anchored at the origin. The bit is 1 when the signed count ``N(x)`` is even.
    Counts over consecutive gaps of the sorted points are drawn directly as
    Poisson variables, which has the same law as walking exponential gaps.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    size, n = x.shape
    pts = np.concatenate([np.zeros((size, 1)), x], axis=1)
    order = np.argsort(pts, axis=1, kind="stable")
    srt = np.take_along_axis(pts, order, axis=1)
    counts = rng.poisson(np.diff(srt, axis=1) * rate)
    cum = np.concatenate([np.zeros((size, 1), dtype=np.int64), np.cumsum(counts, axis=1)], axis=1)
    at = np.empty_like(cum)
    np.put_along_axis(at, order, cum, axis=1)
    signed = at[:, 1:] - at[:, :1]
    return (signed % 2 == 0).astype(np.uint8)


def omega_l2(emb: NormalizedEmbedding, beta: float, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Gaussian projection plus Poisson parity; bits of shape ``(n,)`` or ``(size, n)``."""
    k = 1 if size is None else size
    g = rng.standard_normal((k, emb.phi.shape[1]))
    bits = poisson_parity(g @ emb.phi.T, 1.0 / math.sqrt(beta), rng)
    return bits[0] if size is None else bits


def omega_l1(
    emb: NormalizedEmbedding,
    beta: float,
    rng: np.random.Generator,
    size: Optional[int] = None,
    net: Optional[NetGenerator] = None,
    C: float = 1.0,
    sq_dist: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Bit 0 iff the l2^2 distance from ``phi(u)`` to the net is at most ``t``.

    ``t`` is uniform on ``(0, beta / (C sqrt(log n)))``; an empty net gives all ones.
    """
    net = ScaleNet() if net is None else net
    k = 1 if size is None else size
    D = emb.sq_distances() if sq_dist is None else sq_dist
    U = np.asarray(net(D, beta, rng, k), dtype=bool)
    t_max = beta / (C * sqrt_log(emb.n))
    t = rng.uniform(0.0, t_max, size=k)
    # only net points within t_max of u can switch its bit
    nbr, dist = _close_points(D, t_max)
    dU = np.where(U[:, nbr], dist[None], np.inf).min(axis=2)
    bits = (dU > t[:, None]).astype(np.uint8)
    return bits[0] if size is None else bits


def _close_points(D: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Padded ``(n, k)`` indices and distances of the points within ``radius`` of each row."""
    close = D <= radius
    k = max(int(close.sum(axis=1).max()), 1)
    order = np.argsort(np.where(close, D, np.inf), axis=1, kind="stable")[:, :k]
    dist = np.take_along_axis(D, order, axis=1)
    dist = np.where(np.take_along_axis(close, order, axis=1), dist, np.inf)
    return order, dist


def amplify(base: Callable[[np.random.Generator, int], np.ndarray], K: int, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """XOR of ``K`` independent draws of ``base(rng, size)``."""
    if K < 1:
        raise ValueError("K must be at least 1")
    k = 1 if size is None else size
    draws = np.asarray(base(rng, k * K), dtype=np.uint8)
    out = np.bitwise_xor.reduce(draws.reshape(k, K, -1), axis=1)
    return out[0] if size is None else out


def base_sampler(emb: NormalizedEmbedding, params: SeparatorParams) -> Callable[[np.random.Generator, int], np.ndarray]:
    if params.variant is Variant.L2_POISSON:
        return lambda rng, size: omega_l2(emb, params.beta, rng, size)
    D = emb.sq_distances()
    return lambda rng, size: omega_l1(emb, params.beta, rng, size, net=params.net, C=params.C, sq_dist=D)


def estimate_p(
    emb: NormalizedEmbedding,
    beta: float,
    rng: np.random.Generator,
    samples: int = 2000,
    net: Optional[NetGenerator] = None,
    C: float = 1.0,
    floor: float = 0.01,
    default: float = DEFAULT_P["l1"],
) -> float:
    """Half the smallest empirical separation rate of the L1 base over far pairs.

    Far pairs have ``|phi(u) - phi(v)|^2 >= beta``. The estimate is clipped to
    ``[floor, 0.249]``; with no far pair ``default`` is returned.
    """
    D = emb.sq_distances()
    iu, ju = np.triu_indices(emb.n, 1)
    far = D[iu, ju] >= beta
    if not np.any(far):
        return default
    bits = omega_l1(emb, beta, rng, samples, net=net, C=C, sq_dist=D)
    sep = (bits[:, iu[far]] != bits[:, ju[far]]).mean(axis=0)
    return float(min(max(sep.min() / 2, floor), 0.249))


# ---------------------------------------------------------------------------
# separators


def _pack_words(bits: np.ndarray) -> np.ndarray:
    """``(size, l, n)`` bits to ``(size, n)`` integers, first letter most significant."""
    size, l, n = bits.shape
    weights = (np.uint64(1) << np.arange(l - 1, -1, -1, dtype=np.uint64))
    return np.einsum("sln,l->sn", bits.astype(np.uint64), weights).astype(np.uint64)


def _choose_words(words: np.ndarray, l: int, rng: np.random.Generator) -> np.ndarray:
    """Pick ``W`` per row so that ``Pr(W = W(u)) = max(2^-l, 1/n)`` for every vertex."""
    size, n = words.shape
    if n >= 2**l:
        return rng.integers(0, 2**l, size=size, dtype=np.uint64)
    # support: the distinct observed words first, then the smallest unused words,
    # n atoms of mass 1/n each
    srt = np.sort(words, axis=1)
    first = np.ones_like(srt, dtype=bool)
    first[:, 1:] = srt[:, 1:] != srt[:, :-1]
    rank = np.cumsum(first, axis=1) - 1
    n_distinct = rank[:, -1] + 1
    idx = rng.integers(0, n, size=size)
    hit = first & (rank == idx[:, None])
    observed = hit.any(axis=1)
    W = np.zeros(size, dtype=np.uint64)
    W[observed] = srt[hit]
    pad = ~observed
    if np.any(pad):
        # the j-th smallest unused word: fixed point of c = j + #{observed <= c}
        j = (idx[pad] - n_distinct[pad]).astype(np.int64)
        s = srt[pad].astype(np.int64)
        f = first[pad]
        cand = j.copy()
        while True:
            fixed = j + ((s <= cand[:, None]) & f).sum(axis=1)
            if np.array_equal(fixed, cand):
                break
            cand = fixed
        W[pad] = cand.astype(np.uint64)
    return W


def sample_separators(
    emb: NormalizedEmbedding,
    params: SeparatorParams,
    rng: np.random.Generator,
    size: int,
    norms_sq: Optional[np.ndarray] = None,
) -> SeparatorBatch:
    """Draw ``size`` independent separator samples."""
    n = emb.n
    if n != params.n:
        raise ValueError(f"params built for n={params.n}, embedding has n={n}")
    norms = emb.norms_sq if norms_sq is None else np.asarray(norms_sq, dtype=float)
    # vertices normalized to the zero row never pass the threshold
    norms = np.where(emb.nonzero, norms, 0.0)
    l, K = params.l, params.K
    if l > 63:
        raise ValueError(f"word length {l} exceeds 63 bits")
    base = base_sampler(emb, params)
    parts = []
    for lo in range(0, size, CHUNK):
        k = min(CHUNK, size - lo)
        bits = amplify(base, K, rng, k * l).reshape(k, l, n)
        words = _pack_words(bits)
        W = _choose_words(words, l, rng)
        r = rng.random(k)
        # r uniform on (0, 1): a zero draw has probability 2^-53 and is redrawn
        while np.any(r == 0.0):
            r[r == 0.0] = rng.random(int(np.sum(r == 0.0)))
        parts.append((words, W, r))
    words = np.concatenate([p[0] for p in parts]) if parts else np.zeros((0, n), dtype=np.uint64)
    W = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, dtype=np.uint64)
    r = np.concatenate([p[2] for p in parts]) if parts else np.zeros(0)
    members = (norms[None, :] >= r[:, None]) & (words == W[:, None])
    return SeparatorBatch(members=members, words=words, W=W, r=r)


def sample_separator(sol, emb: NormalizedEmbedding, params: SeparatorParams, rng: np.random.Generator) -> SeparatorSample:
    """One separator sample; ``sol`` supplies the squared norms when given."""
    norms = None if sol is None else np.clip(np.diag(np.asarray(sol.gram, dtype=float)), 0.0, None)
    return sample_separators(emb, params, rng, 1, norms_sq=norms).sample(0)


@dataclass(frozen=True)
class CutBound:
    """Analytic upper bound on ``Pr[e is cut by S]`` split into its two events.

    ``e1``: the threshold ``r`` falls between the smallest and largest squared
    norm in ``e``; ``e2``: every vertex passes the threshold but the words
    disagree. ``l2sq_term`` and ``l2_term`` restate ``e1 + e2`` in the
    ``alpha D max|u - v|^2`` (and ``alpha D(|e|) min|w| max|u - v|``) form.
    """

    e1: float
    e2: float
    total: float
    l2sq_term: float
    l2_term: float
    D_l2sq: float
    D_l2: float
    rho_min: float
    rho_max: float


def cut_probability_bound(emb: NormalizedEmbedding, e, params: SeparatorParams) -> CutBound:
    e = sorted(set(int(v) for v in e))
    if len(e) < 2:
        return CutBound(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    idx = np.array(e)
    gram = emb.source_gram
    norms = emb.norms_sq[idx]
    rho_m, rho_M = float(norms.min()), float(norms.max())
    src = np.clip(gram[idx][:, idx].diagonal()[:, None] + gram[idx][:, idx].diagonal()[None, :] - 2 * gram[idx][:, idx], 0.0, None)
    max_sq = float(src.max())
    phi_sq = emb.sq_distances()[np.ix_(idx, idx)]
    phi_max_sq = float(phi_sq.max())
    l, K, alpha, beta = params.l, params.K, params.alpha, params.beta
    e1 = min(rho_M - rho_m, max_sq)

    if params.variant is Variant.L1_WORDS:
        per = params.C * sqrt_log(params.n) / beta
        e2 = rho_m * min(1.0, l * K * per * phi_max_sq)
        D_l2sq = (1.0 + 2.0 * l * K * per) / alpha
        D_l2 = 0.0
        l2sq_term = alpha * D_l2sq * max_sq
        l2_term = 0.0
    else:
        pairs = len(e) * (len(e) - 1)
        # expected spread of |e|(|e|-1) Gaussians of deviation <= diam is at most diam sqrt(2 ln N)
        per = math.sqrt(2 * math.log(pairs)) / math.sqrt(beta)
        e2 = rho_m * min(1.0, l * K * per * math.sqrt(phi_max_sq))
        D_l2sq = 1.0 / alpha
        D_l2 = 2.0 * l * K * math.sqrt(math.log(pairs)) / (math.sqrt(beta) * alpha)
        l2sq_term = alpha * D_l2sq * max_sq
        l2_term = alpha * D_l2 * math.sqrt(rho_m) * math.sqrt(max_sq)
    total = min(1.0, e1 + e2)
    return CutBound(e1, e2, total, l2sq_term, l2_term, D_l2sq, D_l2, rho_m, rho_M)


def diagnostic_dump(batch: SeparatorBatch, r_bins: int = 10) -> dict:
    """Histograms of ``|S|``, ``r`` and ``W`` over a batch, JSON-ready."""
    sizes = batch.members.sum(axis=1)
    size_hist = np.bincount(sizes, minlength=batch.members.shape[1] + 1)
    r_hist, edges = np.histogram(batch.r, bins=r_bins, range=(0.0, 1.0))
    words, counts = np.unique(batch.W, return_counts=True)
    return {
        "samples": len(batch),
        "size_hist": size_hist.tolist(),
        "r_hist": r_hist.tolist(),
        "r_edges": edges.tolist(),
        "W_hist": {str(int(w)): int(c) for w, c in zip(words, counts)},
    }
