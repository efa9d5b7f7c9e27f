"""Hypergraphs, graphs, vertex sets and the expansion measures defined on them.

All expansion values are returned as exact :class:`fractions.Fraction`s so that
comparisons against the brute-force oracle are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching


class InvalidInstance(ValueError):
    """Raised when a hypergraph, graph or vertex set violates its invariants."""


def as_fraction(x) -> Fraction:
    """Exact fraction for a parameter such as ``delta``.

    Floats are snapped to the nearest fraction with denominator at most 10**6,
    so ``1/3`` typed as ``0.3333333333333333`` means one third.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**6)
    return Fraction(x)


@dataclass(frozen=True)
class VertexSet:
    """A subset of ``{0, ..., n-1}``."""

    members: frozenset
    n: int

    def __post_init__(self):
        members = frozenset(int(v) for v in self.members)
        for v in members:
            if not 0 <= v < self.n:
                raise InvalidInstance(f"vertex {v} outside universe of size {self.n}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, members: Iterable[int] | "VertexSet", n: int) -> "VertexSet":
        if isinstance(members, VertexSet):
            if members.n != n:
                raise InvalidInstance(f"vertex set over universe {members.n}, expected {n}")
            return members
        return cls(frozenset(members), n)

    def complement(self) -> "VertexSet":
        return VertexSet(frozenset(range(self.n)) - self.members, self.n)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def mask(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[list(self.members)] = True
        return out

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, v):
        return v in self.members


@dataclass(frozen=True)
class Hypergraph:
    """Unweighted hypergraph on vertices ``0..n-1``.

    ``edges`` is an ordered multiset of hyperedges; duplicates are kept and
    counted with multiplicity. ``anchors`` holds the per-edge subset used by the
    degree profile and defaults to the edge itself.
    """

    n: int
    edges: tuple
    anchors: tuple = None

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInstance("negative vertex count")
        edges = []
        for i, e in enumerate(self.edges):
            e = tuple(int(v) for v in e)
            if not e:
                raise InvalidInstance(f"edge {i} is empty")
            if len(set(e)) != len(e):
                raise InvalidInstance(f"edge {i} repeats a vertex")
            if min(e) < 0 or max(e) >= self.n:
                raise InvalidInstance(f"edge {i} has a vertex outside 0..{self.n - 1}")
            edges.append(tuple(sorted(e)))
        object.__setattr__(self, "edges", tuple(edges))

        if self.anchors is None:
            anchors = tuple(edges)
        else:
            if len(self.anchors) != len(edges):
                raise InvalidInstance("need exactly one anchor set per edge")
            anchors = []
            for i, (a, e) in enumerate(zip(self.anchors, edges)):
                a = tuple(sorted(set(int(v) for v in a)))
                if not a:
                    raise InvalidInstance(f"anchor of edge {i} is empty")
                if not set(a) <= set(e):
                    raise InvalidInstance(f"anchor of edge {i} is not a subset of the edge")
                anchors.append(a)
            anchors = tuple(anchors)
        object.__setattr__(self, "anchors", anchors)

    @property
    def m(self) -> int:
        return len(self.edges)

    def incidence(self) -> np.ndarray:
        """Dense ``m x n`` 0/1 incidence matrix."""
        inc = np.zeros((self.m, self.n), dtype=np.int64)
        for i, e in enumerate(self.edges):
            inc[i, list(e)] = 1
        return inc

    def edge_sizes(self) -> np.ndarray:
        return np.array([len(e) for e in self.edges], dtype=np.int64)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for e in self.edges:
            deg[list(e)] += 1
        return deg

    def with_anchors(self, anchors: Sequence[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(self.n, self.edges, tuple(tuple(a) for a in anchors))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``adjacency`` holds pairs ``(u, v)`` with ``u < v``."""

    n: int
    adjacency: frozenset
    _neighbors: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        pairs = set()
        for uv in self.adjacency:
            u, v = (int(x) for x in uv)
            if u == v:
                raise InvalidInstance(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInstance(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            pair = (min(u, v), max(u, v))
            if pair in pairs:
                raise InvalidInstance(f"duplicate edge {pair}")
            pairs.add(pair)
        object.__setattr__(self, "adjacency", frozenset(pairs))
        nbrs = [set() for _ in range(self.n)]
        for u, v in pairs:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "_neighbors", tuple(frozenset(s) for s in nbrs))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        edges = [tuple(int(x) for x in e) for e in edges]
        seen = set()
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidInstance(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(edges))

    def neighbors(self, v: int) -> frozenset:
        return self._neighbors[v]

    def degree(self, v: int) -> int:
        return len(self._neighbors[v])

    @property
    def max_degree(self) -> int:
        return max((len(s) for s in self._neighbors), default=0)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.adjacency)


@dataclass(frozen=True)
class DegreeProfile:
    eta: np.ndarray
    eta_max: float
    hhat_bound: float


def _proper(S: VertexSet, n: int, what: str):
    if len(S) == 0 or len(S) == n:
        raise InvalidInstance(f"{what} is undefined for the empty set and the full vertex set")


def edges_cut(H: Hypergraph, S: Iterable[int] | VertexSet) -> list[int]:
    """Indices of hyperedges with at least one vertex inside and one outside ``S``."""
    S = VertexSet.of(S, H.n).members
    cut = []
    for i, e in enumerate(H.edges):
        inside = sum(1 for v in e if v in S)
        if 0 < inside < len(e):
            cut.append(i)
    return cut


def expansion(H: Hypergraph, S: Iterable[int] | VertexSet) -> Fraction:
    """``|E_cut(S)| / min(|S|, n - |S|)`` as an exact fraction."""
    S = VertexSet.of(S, H.n)
    _proper(S, H.n, "expansion")
    return Fraction(len(edges_cut(H, S)), min(len(S), H.n - len(S)))


def outer_boundary(G: Graph, S: VertexSet) -> set[int]:
    return {u for u in range(G.n) if u not in S and G.neighbors(u) & S.members}


def inner_boundary(G: Graph, S: VertexSet) -> set[int]:
    return {u for u in S.members if G.neighbors(u) - S.members}


def vertex_expansion(G: Graph, S: Iterable[int] | VertexSet) -> Fraction:
    """Outer vertex boundary of ``S`` divided by ``|S|``."""
    S = VertexSet.of(S, G.n)
    _proper(S, G.n, "vertex expansion")
    return Fraction(len(outer_boundary(G, S)), len(S))


def symmetric_vertex_expansion(G: Graph, S: Iterable[int] | VertexSet) -> Fraction:
    """Inner plus outer vertex boundary over ``min(|S|, n - |S|)``."""
    S = VertexSet.of(S, G.n)
    _proper(S, G.n, "symmetric vertex expansion")
    boundary = inner_boundary(G, S) | outer_boundary(G, S)
    return Fraction(len(boundary), min(len(S), G.n - len(S)))


def degree_profile(H: Hypergraph) -> DegreeProfile:
    """Per-vertex ``eta(u) = sum over e with u in anchor(e) of log2|e| / |anchor(e)|``.

    The value is computed for the anchors stored on ``H``; no minimisation over
    anchor choices is attempted.
    """
    eta = np.zeros(H.n)
    for e, a in zip(H.edges, H.anchors):
        w = math.log2(len(e)) / len(a)
        for u in a:
            eta[u] += w
    eta_max = float(eta.max()) if H.n else 0.0
    return DegreeProfile(eta=eta, eta_max=eta_max, hhat_bound=eta_max)


def hhat_bounds(H: Hypergraph) -> dict:
    """The three closed-form upper bounds on the anchored degree.

    ``full_anchor``: anchors equal to whole edges. ``uniform``: ``d_max log2 r / r``
    when every edge has size ``r`` (else ``None``). ``distinct_representatives``:
    ``log2 r_max`` when each edge can be assigned its own private vertex (else
    ``None``); the matching is returned alongside.
    """
    full = degree_profile(Hypergraph(H.n, H.edges)).eta_max
    sizes = {len(e) for e in H.edges}
    uniform = None
    if len(sizes) == 1:
        r = sizes.pop()
        d_max = int(H.degrees().max())
        uniform = d_max * math.log2(r) / r
    representatives = None
    sdr_bound = None
    if H.m == 0:
        sdr_bound = 0.0
        representatives = []
    elif H.m <= H.n:
        inc = csr_matrix(H.incidence())
        match = maximum_bipartite_matching(inc, perm_type="column")
        if np.all(match >= 0):
            representatives = [int(v) for v in match]
            sdr_bound = max(math.log2(len(e)) for e in H.edges)
    return {
        "full_anchor": full,
        "uniform": uniform,
        "distinct_representatives": sdr_bound,
        "representatives": representatives,
    }
