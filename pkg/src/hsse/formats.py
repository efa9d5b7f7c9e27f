"""Reading and writing instance files.

Hypergraphs: hMETIS text (``m n`` header, then one line of 1-indexed vertex ids
per edge) or JSON ``{"n": ..., "edges": [[...], ...], "anchors": [[...], ...]}``
with 0-indexed ids. Graphs: ``n m`` header then ``u v`` lines, 0-indexed.
Lines starting with ``%`` or ``#`` are comments.
"""
from __future__ import annotations

import json
from pathlib import Path

from .hypergraph import Graph, Hypergraph, InvalidInstance


class FormatError(ValueError):
    """Malformed instance file."""


def _data_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s[0] in "%#":
            continue
        out.append(s)
    return out


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise FormatError(f"line {lineno}: expected integers, got {line!r}") from exc


def parse_hmetis(text: str) -> Hypergraph:
    lines = _data_lines(text)
    if not lines:
        raise FormatError("empty hypergraph file")
    header = _ints(lines[0], 1)
    if len(header) < 2:
        raise FormatError("hMETIS header must be 'm n'")
    if len(header) > 2 and header[2] != 0:
        raise FormatError("weighted hMETIS files are not supported")
    m, n = header[0], header[1]
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges, file has {len(body)}")
    edges = []
    for i, line in enumerate(body):
        ids = _ints(line, i + 2)
        edges.append([v - 1 for v in ids])
    try:
        return Hypergraph(n, tuple(edges))
    except InvalidInstance as exc:
        raise FormatError(str(exc)) from exc


def format_hmetis(H: Hypergraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"% {c}" for c in comment.splitlines())
    lines.append(f"{H.m} {H.n}")
    lines.extend(" ".join(str(v + 1) for v in e) for e in H.edges)
    return "\n".join(lines) + "\n"


def parse_hypergraph_json(text: str) -> Hypergraph:
    try:
        obj = json.loads(text)
        anchors = obj.get("anchors")
        return Hypergraph(
            int(obj["n"]),
            tuple(tuple(e) for e in obj["edges"]),
            None if anchors is None else tuple(tuple(a) for a in anchors),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad hypergraph JSON: {exc}") from exc


def format_hypergraph_json(H: Hypergraph, comment: str | None = None) -> str:
    obj = {"n": H.n, "edges": [list(e) for e in H.edges]}
    if H.anchors != H.edges:
        obj["anchors"] = [list(a) for a in H.anchors]
    if comment:
        obj["comment"] = comment
    return json.dumps(obj) + "\n"


def parse_graph(text: str) -> Graph:
    lines = _data_lines(text)
    if not lines:
        raise FormatError("empty graph file")
    header = _ints(lines[0], 1)
    if len(header) != 2:
        raise FormatError("graph header must be 'n m'")
    n, m = header
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges, file has {len(body)}")
    pairs = []
    for i, line in enumerate(body):
        uv = _ints(line, i + 2)
        if len(uv) != 2:
            raise FormatError(f"line {i + 2}: expected 'u v'")
        pairs.append(tuple(uv))
    try:
        return Graph.from_edges(n, pairs)
    except InvalidInstance as exc:
        raise FormatError(str(exc)) from exc


def format_graph(G: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    edges = G.sorted_edges()
    lines.append(f"{G.n} {len(edges)}")
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse either hypergraph format, sniffing JSON by its leading brace."""
    if text.lstrip().startswith("{"):
        return parse_hypergraph_json(text)
    return parse_hmetis(text)


def read_hypergraph(path) -> Hypergraph:
    return parse_hypergraph(Path(path).read_text())


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())
