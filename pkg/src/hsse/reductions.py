"""Vertex expansion in graphs as hyperedge expansion.

Each vertex ``v`` becomes the hyperedge ``{v} | N(v)`` anchored at ``{v}``.
A hyperedge is cut by ``S`` exactly when ``v`` lies on the inner or outer
vertex boundary of ``S``, so hypergraph expansion equals symmetric vertex
expansion set by set.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .hypergraph import Graph, Hypergraph, symmetric_vertex_expansion, vertex_expansion
from .rounding import CutReport, RoundingConfig, jsonable, solve_hsse


def vertex_to_hypergraph(G: Graph) -> Hypergraph:
    edges = tuple(tuple(sorted({v} | set(G.neighbors(v)))) for v in range(G.n))
    anchors = tuple((v,) for v in range(G.n))
    return Hypergraph(G.n, edges, anchors)


@dataclass
class SsveReport:
    """A :class:`CutReport` on the reduced hypergraph plus both graph measures of ``S'``."""

    hypergraph: CutReport
    symmetric_vertex_expansion: object
    vertex_expansion: object

    @property
    def S(self):
        return self.hypergraph.S

    def to_dict(self) -> dict:
        d = self.hypergraph.to_dict()
        d["symmetric_vertex_expansion"] = str(self.symmetric_vertex_expansion)
        d["vertex_expansion"] = str(self.vertex_expansion)
        return d

    def to_json(self) -> str:
        return json.dumps(jsonable(self.to_dict()), sort_keys=True, indent=2) + "\n"


def ssve_solve(G: Graph, delta=None, eps=None, cfg: Optional[RoundingConfig] = None) -> SsveReport:
    H = vertex_to_hypergraph(G)
    rep = solve_hsse(H, delta, eps, cfg)
    return SsveReport(
        hypergraph=rep,
        symmetric_vertex_expansion=symmetric_vertex_expansion(G, rep.S),
        vertex_expansion=vertex_expansion(G, rep.S),
    )
