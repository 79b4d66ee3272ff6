"""Plain-text graph files.

Bipartite::

    # comment
    bip <n> <m>
    <u> <v> <w>        (m lines, 1 <= u, v <= n)

Digraph files use the header ``dig <n> <m>`` and arc lines ``<u> <v> <w>``.
Indices are 1-based on disk and 0-based in memory.
"""

from __future__ import annotations

from pathlib import Path

from .graphs import MAX_WEIGHT, BipartiteGraph, Digraph


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"{message} (line {line})" if line is not None else message)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_int(tok: str, what: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"malformed {what}", lineno) from None


def _parse(text: str, kind: str):
    lines = list(_content_lines(text))
    if not lines:
        raise GraphFormatError("missing header")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != kind:
        raise GraphFormatError(f"malformed header, expected '{kind} <n> <m>'", lineno)
    n = _parse_int(parts[1], "header", lineno)
    m = _parse_int(parts[2], "header", lineno)
    if n < 0 or m < 0:
        raise GraphFormatError("malformed header", lineno)
    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else lineno
        raise GraphFormatError(f"expected {m} edge lines, found {len(body)}", last)
    first, second = ("left", "right") if kind == "bip" else ("tail", "head")
    seen: set[tuple[int, int]] = set()
    items = []
    for lineno, line in body:
        toks = line.split()
        if len(toks) != 3:
            raise GraphFormatError("malformed edge line", lineno)
        u, v, w = (_parse_int(t, "edge line", lineno) for t in toks)
        if not 1 <= u <= n:
            raise GraphFormatError(f"{first} index out of range", lineno)
        if not 1 <= v <= n:
            raise GraphFormatError(f"{second} index out of range", lineno)
        if w < 0:
            raise GraphFormatError("negative weight", lineno)
        if w > MAX_WEIGHT:
            raise GraphFormatError("weight exceeds 2^40", lineno)
        if kind == "dig" and u == v:
            raise GraphFormatError("self-loop", lineno)
        if (u, v) in seen:
            raise GraphFormatError("duplicate edge", lineno)
        seen.add((u, v))
        items.append((u - 1, v - 1, w))
    return n, items


def parse_bipartite(text: str) -> BipartiteGraph:
    n, edges = _parse(text, "bip")
    return BipartiteGraph(n, edges)


def parse_digraph(text: str) -> Digraph:
    n, arcs = _parse(text, "dig")
    return Digraph(n, arcs)


def parse_graph(text: str) -> BipartiteGraph | Digraph:
    """Parse either format, dispatching on the header keyword."""
    for lineno, line in _content_lines(text):
        if line.startswith("bip"):
            return parse_bipartite(text)
        if line.startswith("dig"):
            return parse_digraph(text)
        raise GraphFormatError("unknown header", lineno)
    raise GraphFormatError("missing header")


def serialize_bipartite(G: BipartiteGraph, comments: list[str] | None = None) -> str:
    out = [f"# {c}" for c in comments or ()]
    out.append(f"bip {G.n} {G.m}")
    out.extend(f"{u + 1} {v + 1} {w}" for u, v, w in sorted(G.edges))
    return "\n".join(out) + "\n"


def serialize_digraph(D: Digraph, comments: list[str] | None = None) -> str:
    out = [f"# {c}" for c in comments or ()]
    out.append(f"dig {D.n} {D.m}")
    out.extend(f"{u + 1} {v + 1} {w}" for u, v, w in sorted(D.arcs))
    return "\n".join(out) + "\n"


def serialize(graph: BipartiteGraph | Digraph, comments: list[str] | None = None) -> str:
    if isinstance(graph, BipartiteGraph):
        return serialize_bipartite(graph, comments)
    return serialize_digraph(graph, comments)


def read_graph(path: str | Path) -> BipartiteGraph | Digraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))
