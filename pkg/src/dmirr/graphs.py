"""Core graph types: balanced bipartite graphs, digraphs, edge sets and matchings.

Vertices are 0-based internally.  A bipartite graph with ``n`` vertices per
side keeps left and right indices in separate namespaces; whenever a single
vertex numbering is needed (auxiliary digraphs, forests, ear decompositions)
left vertex ``u`` is ``u`` and right vertex ``v`` is ``n + v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

MAX_WEIGHT = 2**40


class GraphError(ValueError):
    """Raised when a graph or edge set violates a structural invariant."""


class BipartiteGraph:
    """Weighted balanced bipartite graph ``(V+, V-; E)``.

    Edge ``i`` is ``edges[i] == (u, v, w)`` with ``u`` a left index, ``v`` a
    right index and ``w`` a nonnegative integer weight.  Instances are treated
    as immutable.
    """

    __slots__ = ("n", "edges", "_index", "_left_adj", "_right_adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        self.n = n
        cleaned = []
        index: dict[tuple[int, int], int] = {}
        for i, e in enumerate(edges):
            u, v, w = (int(x) for x in e)
            if not (0 <= u < n):
                raise GraphError(f"left index out of range in edge {i}")
            if not (0 <= v < n):
                raise GraphError(f"right index out of range in edge {i}")
            if not (0 <= w <= MAX_WEIGHT):
                raise GraphError(f"weight out of range in edge {i}")
            if (u, v) in index:
                raise GraphError(f"duplicate edge ({u}, {v})")
            index[(u, v)] = i
            cleaned.append((u, v, w))
        self.edges: tuple[tuple[int, int, int], ...] = tuple(cleaned)
        self._index = index
        left: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        right: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i, (u, v, _) in enumerate(cleaned):
            left[u].append((v, i))
            right[v].append((u, i))
        self._left_adj = tuple(tuple(a) for a in left)
        self._right_adj = tuple(tuple(a) for a in right)

    @property
    def m(self) -> int:
        return len(self.edges)

    def left_adj(self, u: int) -> tuple[tuple[int, int], ...]:
        """``(right vertex, edge id)`` pairs at left vertex ``u``."""
        return self._left_adj[u]

    def right_adj(self, v: int) -> tuple[tuple[int, int], ...]:
        """``(left vertex, edge id)`` pairs at right vertex ``v``."""
        return self._right_adj[v]

    def edge_id(self, u: int, v: int) -> int | None:
        return self._index.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._index

    def weight(self, ids: Iterable[int]) -> int:
        return sum(self.edges[i][2] for i in ids)

    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def endpoints(self, i: int) -> tuple[int, int]:
        """Endpoints of edge ``i`` in the combined vertex numbering."""
        u, v, _ = self.edges[i]
        return u, self.n + v

    def subgraph(self, ids: Iterable[int]) -> tuple["BipartiteGraph", list[int]]:
        """Spanning subgraph on the given edges and the map new id -> old id."""
        keep = sorted(set(ids))
        return BipartiteGraph(self.n, [self.edges[i] for i in keep]), keep

    def induced(self, left: Iterable[int], right: Iterable[int]):
        """Induced subgraph on equally sized vertex sets, relabelled densely.

        Returns ``(graph, edge_map, left_map, right_map)`` where the maps send
        new indices to old ones.
        """
        lmap = sorted(set(left))
        rmap = sorted(set(right))
        if len(lmap) != len(rmap):
            raise GraphError("induced subgraph is not balanced")
        lpos = {u: i for i, u in enumerate(lmap)}
        rpos = {v: i for i, v in enumerate(rmap)}
        new_edges, emap = [], []
        for i, (u, v, w) in enumerate(self.edges):
            if u in lpos and v in rpos:
                new_edges.append((lpos[u], rpos[v], w))
                emap.append(i)
        return BipartiteGraph(len(lmap), new_edges), emap, lmap, rmap

    def with_weights(self, weights: Sequence[int]) -> "BipartiteGraph":
        return BipartiteGraph(self.n, [(u, v, w) for (u, v, _), w in zip(self.edges, weights)])

    def vertex_label(self, x: int) -> str:
        """1-based label of a combined vertex index, e.g. ``u3`` or ``v1``."""
        return f"u{x + 1}" if x < self.n else f"v{x - self.n + 1}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self.n == other.n and sorted(self.edges) == sorted(other.edges)

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self.edges))))

    def __repr__(self) -> str:
        return f"BipartiteGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class ArcOrigin:
    """Provenance of an auxiliary-graph arc: the bipartite edge and its direction."""

    edge: int
    forward: bool


class Digraph:
    """Weighted digraph with arcs ``(u, v, w)``; arc ids are list positions."""

    __slots__ = ("n", "arcs", "origin", "_out", "_in")

    def __init__(
        self,
        n: int,
        arcs: Iterable[Sequence[int]],
        *,
        allow_loops: bool = False,
        origin: Sequence[ArcOrigin] | None = None,
    ):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        self.n = n
        cleaned = []
        for i, a in enumerate(arcs):
            u, v, w = (int(x) for x in a)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"endpoint out of range in arc {i}")
            if w < 0 or w > MAX_WEIGHT:
                raise GraphError(f"weight out of range in arc {i}")
            if u == v and not allow_loops:
                raise GraphError(f"self-loop at vertex {u}")
            cleaned.append((u, v, w))
        self.arcs: tuple[tuple[int, int, int], ...] = tuple(cleaned)
        if origin is not None and len(origin) != len(cleaned):
            raise GraphError("provenance length mismatch")
        self.origin = tuple(origin) if origin is not None else None
        out: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v, _) in enumerate(cleaned):
            out[u].append(i)
            inc[v].append(i)
        self._out = tuple(tuple(a) for a in out)
        self._in = tuple(tuple(a) for a in inc)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def out_arcs(self, u: int) -> tuple[int, ...]:
        return self._out[u]

    def in_arcs(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def weight(self, ids: Iterable[int]) -> int:
        return sum(self.arcs[i][2] for i in ids)

    def reverse(self) -> "Digraph":
        return Digraph(self.n, [(v, u, w) for u, v, w in self.arcs], allow_loops=True, origin=self.origin)

    def with_weights(self, weights: Sequence[int]) -> "Digraph":
        return Digraph(
            self.n,
            [(u, v, w) for (u, v, _), w in zip(self.arcs, weights)],
            allow_loops=True,
            origin=self.origin,
        )

    def subgraph(self, ids: Iterable[int]) -> tuple["Digraph", list[int]]:
        keep = sorted(set(ids))
        origin = [self.origin[i] for i in keep] if self.origin is not None else None
        return Digraph(self.n, [self.arcs[i] for i in keep], allow_loops=True, origin=origin), keep

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class UndirectedView:
    """Underlying undirected graph of a digraph.

    ``edges[j]`` is a sorted vertex pair and ``arcs[j]`` lists the arc ids that
    collapsed onto it.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    arcs: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class EdgeSet:
    """A subset of edge (or arc) ids of a host graph."""

    host: BipartiteGraph | Digraph = field(repr=False, compare=False)
    ids: tuple[int, ...]

    def __post_init__(self):
        ids = tuple(sorted(set(self.ids)))
        m = self.host.m
        for i in ids:
            if not (0 <= i < m):
                raise GraphError(f"edge id {i} not in host graph")
        object.__setattr__(self, "ids", ids)

    @property
    def weight(self) -> int:
        return self.host.weight(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __contains__(self, i: object) -> bool:
        return i in set(self.ids)

    def pairs(self) -> list[tuple[int, int]]:
        """Endpoint pairs of the members, in id order."""
        if isinstance(self.host, BipartiteGraph):
            return [self.host.edges[i][:2] for i in self.ids]
        return [self.host.arcs[i][:2] for i in self.ids]


class Matching(EdgeSet):
    """Vertex-disjoint edges of a bipartite host graph."""

    def __post_init__(self):
        super().__post_init__()
        if not isinstance(self.host, BipartiteGraph):
            raise GraphError("matching requires a bipartite host")
        seen_l, seen_r = set(), set()
        for i in self.ids:
            u, v, _ = self.host.edges[i]
            if u in seen_l or v in seen_r:
                raise GraphError("edges of a matching must be vertex-disjoint")
            seen_l.add(u)
            seen_r.add(v)

    @property
    def is_perfect(self) -> bool:
        return len(self.ids) == self.host.n

    def mate_of_left(self) -> dict[int, int]:
        return {self.host.edges[i][0]: self.host.edges[i][1] for i in self.ids}

    def mate_of_right(self) -> dict[int, int]:
        return {self.host.edges[i][1]: self.host.edges[i][0] for i in self.ids}


def build_auxiliary(G: BipartiteGraph, M: Matching) -> Digraph:
    """Auxiliary digraph ``G_M``: every edge oriented left to right, plus the
    matching edges oriented right to left.

    Arc ``i < m`` is the forward copy of edge ``i``; the backward arcs follow
    in increasing matching-edge id.  Every arc records its source edge.
    """
    if M.host is not G and M.host != G:
        raise GraphError("matching belongs to a different graph")
    if not M.is_perfect:
        raise GraphError("matching not perfect")
    n = G.n
    arcs = [(u, n + v, w) for u, v, w in G.edges]
    origin = [ArcOrigin(i, True) for i in range(G.m)]
    for i in M.ids:
        u, v, w = G.edges[i]
        arcs.append((n + v, u, w))
        origin.append(ArcOrigin(i, False))
    return Digraph(2 * n, arcs, origin=origin)


def underlying(D: Digraph) -> UndirectedView:
    """Collapse directions and antiparallel/parallel arcs into undirected edges."""
    groups: dict[tuple[int, int], list[int]] = {}
    for i, (u, v, _) in enumerate(D.arcs):
        key = (u, v) if u <= v else (v, u)
        groups.setdefault(key, []).append(i)
    keys = sorted(groups)
    return UndirectedView(D.n, tuple(keys), tuple(tuple(groups[k]) for k in keys))


def arcs_to_edges(D: Digraph, arc_ids: Iterable[int]) -> list[int]:
    """Bipartite edge ids underlying a set of auxiliary-graph arcs."""
    if D.origin is None:
        raise GraphError("digraph carries no provenance")
    return sorted({D.origin[a].edge for a in arc_ids})
