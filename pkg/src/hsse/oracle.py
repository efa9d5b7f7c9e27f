"""Exact brute-force solvers and instance generators.

Vertex sets are bitmasks (vertex ``i`` is bit ``i``); all sets of one size
are scored at once with numpy. Sizes are visited in increasing order and the
search stops at the first size that reaches expansion zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .embedding import normalize
from .hypergraph import Graph, Hypergraph, VertexSet, as_fraction
from .separators import SeparatorParams, Variant, sample_separators
from .streams import make_rng

MAX_N = 24
_BLOCK = 1 << 20


class TooLarge(ValueError):
    """Exhaustive enumeration refused above :data:`MAX_N` vertices."""


def _guard(n: int):
    if n > MAX_N:
        raise TooLarge(f"brute force is limited to n <= {MAX_N}, got n = {n}")


def masks_of_size(n: int, k: int) -> np.ndarray:
    """All ``k``-subsets of ``range(n)`` as int64 bitmasks."""
    if k < 0 or k > n:
        return np.zeros(0, dtype=np.int64)
    # rows[j] holds the j-subsets of the first i vertices; add vertex i at each step
    rows = [np.zeros(1, dtype=np.int64)] + [np.zeros(0, dtype=np.int64)] * k
    for i in range(n):
        bit = np.int64(1) << i
        for j in range(min(i + 1, k), 0, -1):
            rows[j] = np.concatenate([rows[j], rows[j - 1] | bit])
    return rows[k]


def popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


def edge_masks(H: Hypergraph) -> np.ndarray:
    return np.array([sum(1 << v for v in e) for e in H.edges], dtype=np.int64)


def cut_counts(H: Hypergraph, masks: np.ndarray) -> np.ndarray:
    """``|E_cut(S)|`` for every bitmask ``S``."""
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape, dtype=np.int64)
    for em in edge_masks(H):
        inter = masks & em
        out += (inter != 0) & (inter != em)
    return out


def boundaries(G: Graph, masks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Outer and inner vertex boundaries of every bitmask, as bitmasks."""
    masks = np.asarray(masks, dtype=np.int64)
    nbr = [sum(1 << u for u in G.neighbors(v)) for v in range(G.n)]
    reach = np.zeros_like(masks)
    inner = np.zeros_like(masks)
    for v in range(G.n):
        inside = (masks >> v) & 1 == 1
        reach |= np.where(inside, nbr[v], 0)
        inner |= np.where(inside & ((nbr[v] & ~masks) != 0), 1 << v, 0)
    return reach & ~masks, inner


def _lex_key(masks: np.ndarray, n: int) -> np.ndarray:
    """Key whose maximum is the lexicographically smallest member list among equal-size sets."""
    rev = np.zeros_like(masks)
    for i in range(n):
        rev |= ((masks >> i) & 1) << (n - 1 - i)
    return rev


def _pick(masks, num, n):
    """Index of the minimal ``num``, ties to the lexicographically smallest member list."""
    exact = np.flatnonzero(num == num.min())
    keys = _lex_key(masks[exact], n)
    return exact[int(np.argmax(keys))]


def _search(n: int, max_size: int, score: Callable[[np.ndarray, int], tuple[np.ndarray, int]]):
    """Minimise ``num/den`` over bitmasks of size ``1..max_size`` (proper subsets only).

    ``score(masks, k)`` returns the numerators and the common denominator of
    the size-``k`` sets.
    """
    best = None  # (Fraction, size, mask)
    for k in range(1, min(max_size, n - 1) + 1):
        masks = masks_of_size(n, k)
        for lo in range(0, len(masks), _BLOCK):
            blk = masks[lo : lo + _BLOCK]
            num, den = score(blk, k)
            i = _pick(blk, num, n)
            val = Fraction(int(num[i]), den)
            if best is None or val < best[0]:
                best = (val, k, int(blk[i]))
        # a later size cannot beat zero, and ties prefer the smaller size
        if best is not None and best[0] == 0:
            break
    return best


def _members(mask: int, n: int) -> VertexSet:
    return VertexSet(frozenset(i for i in range(n) if mask >> i & 1), n)


def brute_force_hsse(H: Hypergraph, delta_cap) -> tuple[VertexSet, Fraction]:
    """Exact ``min phi(S)`` over proper nonempty ``S`` with ``|S| <= delta_cap * n``."""
    _guard(H.n)
    n = H.n
    cap = math.floor(as_fraction(delta_cap) * n)
    if cap < 1 or n < 2:
        raise ValueError("no admissible set: need 1 <= delta_cap * n and n >= 2")

    def score(masks, k):
        return cut_counts(H, masks), min(k, n - k)

    val, _, mask = _search(n, cap, score)
    return _members(mask, n), val


def brute_force_ssve(G: Graph, delta_cap) -> tuple[VertexSet, Fraction, Fraction]:
    """Minimiser of ``phi^V`` with its value, and the minimum symmetric vertex expansion.

    Both minima are over the same family of proper nonempty sets of size at
    most ``delta_cap * n``.
    """
    _guard(G.n)
    n = G.n
    cap = math.floor(as_fraction(delta_cap) * n)
    if cap < 1 or n < 2:
        raise ValueError("no admissible set: need 1 <= delta_cap * n and n >= 2")

    def outer(masks, k):
        out, _ = boundaries(G, masks)
        return popcount(out), k

    def symmetric(masks, k):
        out, inner = boundaries(G, masks)
        return popcount(out | inner), min(k, n - k)

    val, _, mask = _search(n, cap, outer)
    sym, _, _ = _search(n, cap, symmetric)
    return _members(mask, n), val, sym


# ---------------------------------------------------------------------------
# generators


def gen_gap_instance(r: int) -> tuple[Hypergraph, Fraction]:
    """``r`` vertices, one hyperedge on all of them, ``delta = 1/r``."""
    if r < 2:
        raise ValueError("r must be at least 2")
    return Hypergraph(r, (tuple(range(r)),)), Fraction(1, r)


SizeLaw = Union[int, tuple, Callable[[np.random.Generator], int]]


def _draw_size(size_law: SizeLaw, rng, upper: int) -> int:
    if callable(size_law):
        s = int(size_law(rng))
    elif isinstance(size_law, (tuple, list)):
        lo, hi = size_law
        s = int(rng.integers(lo, hi + 1))
    else:
        s = int(size_law)
    if not 1 <= s <= upper:
        raise ValueError(f"edge size {s} outside [1, {upper}]")
    return s


def gen_random_hypergraph(n: int, m: int, size_law: SizeLaw = (2, 3), seed=0) -> Hypergraph:
    """``m`` edges, each a uniform random ``size``-subset with ``size`` drawn from ``size_law``."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    rng = make_rng(seed)
    edges = []
    for _ in range(m):
        s = _draw_size(size_law, rng, n)
        edges.append(tuple(sorted(int(v) for v in rng.choice(n, size=s, replace=False))))
    return Hypergraph(n, tuple(edges))


@dataclass(frozen=True)
class PlantedInstance:
    H: Hypergraph
    partition: tuple  # tuple of cluster tuples
    meta: dict = field(default_factory=dict)


def gen_planted(
    n: int,
    cluster_count: int = 2,
    intra_rate: float = 1.0,
    inter_rate: float = 0.1,
    seed=0,
    size_law: SizeLaw = (2, 3),
) -> PlantedInstance:
    """Contiguous clusters of near-equal size with planted sparse cross edges.

    ``round(intra_rate * n)`` edges lie inside uniformly chosen clusters and
    ``round(inter_rate * n)`` edges touch at least two clusters.
    """
    if cluster_count < 1 or n < cluster_count:
        raise ValueError("need 1 <= cluster_count <= n")
    rng = make_rng(seed)
    bounds = np.linspace(0, n, cluster_count + 1).round().astype(int)
    clusters = tuple(tuple(range(bounds[i], bounds[i + 1])) for i in range(cluster_count))
    edges = []
    for _ in range(int(round(intra_rate * n))):
        c = clusters[int(rng.integers(cluster_count))]
        s = min(_draw_size(size_law, rng, n), len(c))
        edges.append(tuple(sorted(int(v) for v in rng.choice(c, size=s, replace=False))))
    if cluster_count > 1:
        for _ in range(int(round(inter_rate * n))):
            a, b = rng.choice(cluster_count, size=2, replace=False)
            u, v = int(rng.choice(clusters[a])), int(rng.choice(clusters[b]))
            s = max(_draw_size(size_law, rng, n), 2)
            rest = [w for w in range(n) if w not in (u, v)]
            extra = rng.choice(rest, size=s - 2, replace=False) if s > 2 else []
            edges.append(tuple(sorted({u, v, *(int(w) for w in extra)})))
    H = Hypergraph(n, tuple(edges))
    return PlantedInstance(H, clusters, {"intra_rate": intra_rate, "inter_rate": inter_rate})


# ---------------------------------------------------------------------------
# the distortion lower bound on the gap instance


@dataclass(frozen=True)
class LowerBoundReport:
    m: float
    r: int
    samples: int
    alpha: float
    marginal_ok: bool
    marginal_worst_z: float
    p_single: float
    p_single_se: float
    p_cut: float
    single_ok: bool
    distortion: Optional[float]
    threshold: float
    slack: float
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


Sampler = Callable[[object, SeparatorParams, np.random.Generator, int], np.ndarray]


def _default_sampler(emb, params, rng, size):
    return sample_separators(emb, params, rng, size).members


def separator_lower_bound_test(
    m: float,
    samples: int,
    seed=0,
    variant=Variant.L2_POISSON,
    beta: float = 0.25,
    slack: float = 0.1,
    sampler: Optional[Sampler] = None,
) -> LowerBoundReport:
    """Monte Carlo check that a separator on the gap solution has distortion near ``ceil(m)/4``.

    On ``n = r = ceil(m)`` orthogonal vectors of squared norm ``1/r`` every set
    of size one cuts the single hyperedge, and ``Pr[|S| = 1] >= alpha/2``
    follows from the marginal and far-pair laws. Dividing the cut probability
    by ``alpha * max |u - v|^2 = 2 alpha / r`` bounds the distortion from below.
    """
    if m <= 4:
        raise ValueError("need m > 4")
    r = math.ceil(m)
    gram = np.eye(r) / r
    emb = normalize(gram)
    params = SeparatorParams.build(m, beta, r, variant)
    alpha = params.alpha
    draw = sampler or _default_sampler
    members = np.asarray(draw(emb, params, make_rng(seed), samples), dtype=bool)
    N = members.shape[0]
    sizes = members.sum(axis=1)

    target = alpha / r
    rate = members.mean(axis=0)
    se = math.sqrt(target * (1 - target) / N)
    z = np.abs(rate - target) / se
    marginal_ok = bool(np.all(z <= 4))

    p_single = float(np.mean(sizes == 1))
    p_single_se = math.sqrt(max(p_single * (1 - p_single), 1e-300) / N)
    p_cut = float(np.mean((sizes > 0) & (sizes < r)))
    single_ok = p_single >= alpha / 2 - 4 * p_single_se
    threshold = r / 4
    distortion = p_cut / (alpha * 2 / r) if marginal_ok else None
    passed = marginal_ok and single_ok and distortion >= (1 - slack) * threshold
    return LowerBoundReport(
        m=m,
        r=r,
        samples=N,
        alpha=alpha,
        marginal_ok=marginal_ok,
        marginal_worst_z=float(z.max()),
        p_single=p_single,
        p_single_se=p_single_se,
        p_cut=p_cut,
        single_ok=bool(single_ok),
        distortion=distortion,
        threshold=threshold,
        slack=slack,
        passed=bool(passed),
    )
