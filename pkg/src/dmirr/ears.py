"""Ear decompositions of strongly connected digraphs and of DM-irreducible
balanced bipartite graphs.

Bipartite ears use the combined vertex numbering (left ``u`` -> ``u``, right
``v`` -> ``n + v``) and carry bipartite edge ids; digraph ears carry arc ids.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import chain

from .connectivity import is_dm_irreducible
from .graphs import BipartiteGraph, Digraph, build_auxiliary
from .matching import max_matching

INITIAL = "initial-cycle"
PATH = "path"
LOOP = "cycle-through-one-vertex"


class EarError(ValueError):
    pass


@dataclass(frozen=True)
class Ear:
    kind: str
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def inner(self) -> tuple[int, ...]:
        if self.kind == PATH:
            return self.vertices[1:-1]
        return self.vertices[1:]


@dataclass(frozen=True)
class EarDecomposition:
    """Ordered ears ``P_0 .. P_f``.

    For long-ear-maximal decompositions ``s`` counts the long ears (placed
    first after ``P_0``), ``r`` the nontrivial ears, and ``X``/``Y`` split the
    vertices into those covered by ``P_0 .. P_s`` and the rest.  These are
    ``None`` for unordered decompositions.
    """

    ears: tuple[Ear, ...]
    s: int | None = None
    r: int | None = None
    X: frozenset[int] | None = field(default=None)
    Y: frozenset[int] | None = field(default=None)

    @property
    def f(self) -> int:
        return len(self.ears) - 1

    def prefix_edges(self, i: int) -> list[int]:
        return sorted(chain.from_iterable(e.edges for e in self.ears[: i + 1]))

    def prefix_vertices(self, i: int) -> set[int]:
        return set(chain.from_iterable(e.vertices for e in self.ears[: i + 1]))


def _bfs_to_covered(D: Digraph, start: int, covered: list[bool]) -> tuple[list[int], list[int]] | None:
    """Shortest path from uncovered ``start`` through uncovered vertices to any
    covered vertex.  Returns ``(vertices, arcs)`` including the final covered
    vertex."""
    parent = {start: None}
    q = deque([start])
    while q:
        x = q.popleft()
        for a in D.out_arcs(x):
            y = D.arcs[a][1]
            if covered[y]:
                verts, arcs = [y], [a]
                while parent[x] is not None:
                    verts.append(x)
                    px, pa = parent[x]
                    arcs.append(pa)
                    x = px
                verts.append(x)
                return verts[::-1], arcs[::-1]
            if y not in parent:
                parent[y] = (x, a)
                q.append(y)
    return None


def _shortest_path(D: Digraph, s: int, t: int) -> tuple[list[int], list[int]] | None:
    parent = {s: None}
    q = deque([s])
    while q:
        x = q.popleft()
        if x == t:
            break
        for a in D.out_arcs(x):
            y = D.arcs[a][1]
            if y not in parent:
                parent[y] = (x, a)
                q.append(y)
    if t not in parent:
        return None
    verts, arcs = [t], []
    x = t
    while parent[x] is not None:
        px, pa = parent[x]
        arcs.append(pa)
        verts.append(px)
        x = px
    return verts[::-1], arcs[::-1]


def ear_decomposition(D: Digraph, initial: tuple[list[int], list[int]] | None = None) -> EarDecomposition:
    """Ear decomposition of a strongly connected digraph.

    ``initial`` optionally fixes ``P_0`` as ``(vertices, arcs)`` of a directed
    cycle where arc ``i`` leaves ``vertices[i]``.  Ears are then grown from the
    covered vertices in the order they became covered, scanning out-arcs by id.
    """
    if D.n == 0:
        raise EarError("empty digraph")
    if initial is None:
        found = None
        for a in D.out_arcs(0):
            back = _shortest_path(D, D.arcs[a][1], 0)
            if back is not None:
                found = ([0] + back[0][:-1], [a] + back[1])
                break
        if found is None:
            raise EarError("digraph has no cycle through vertex 1")
        initial = found
    verts0, arcs0 = initial
    covered = [False] * D.n
    used = [False] * D.m
    order: list[int] = []
    for v in verts0:
        covered[v] = True
        order.append(v)
    for a in arcs0:
        used[a] = True
    ears = [Ear(INITIAL, tuple(verts0), tuple(arcs0))]
    i = 0
    while i < len(order):
        a_vertex = order[i]
        i += 1
        for a in D.out_arcs(a_vertex):
            if used[a]:
                continue
            b = D.arcs[a][1]
            used[a] = True
            if covered[b]:
                ears.append(Ear(PATH, (a_vertex, b), (a,)))
                continue
            tail = _bfs_to_covered(D, b, covered)
            if tail is None:
                raise EarError("digraph is not strongly connected")
            tverts, tarcs = tail
            for x in tverts[:-1]:
                covered[x] = True
                order.append(x)
            for t in tarcs:
                used[t] = True
            end = tverts[-1]
            if end == a_vertex:
                ears.append(Ear(LOOP, (a_vertex, *tverts[:-1]), (a, *tarcs)))
            else:
                ears.append(Ear(PATH, (a_vertex, *tverts), (a, *tarcs)))
    if not all(covered) or not all(used):
        raise EarError("digraph is not strongly connected")
    return EarDecomposition(tuple(ears))


def odd_proper_ear_decomposition(G: BipartiteGraph) -> EarDecomposition:
    """Odd proper ear decomposition of a DM-irreducible graph with ``n >= 2``.

    Take a perfect matching ``M``, close the first non-matching edge into a
    cycle through ``G_M``, decompose ``G_M`` into ears from there, and read the
    ears back as undirected ones.  Single-arc ears that duplicate a matching
    edge are dropped.
    """
    if G.n < 2:
        raise EarError("ear decompositions need at least four vertices")
    cert = is_dm_irreducible(G)
    if not cert:
        raise EarError(f"graph is not DM-irreducible ({cert.reason})")
    M = cert.matching
    in_m = set(M.ids)
    D = build_auxiliary(G, M)
    e0 = next(e for e in range(G.m) if e not in in_m)
    u0, v0 = G.endpoints(e0)
    back = _shortest_path(D, v0, u0)
    assert back is not None
    initial = ([u0] + back[0][:-1], [e0] + back[1])
    dec = ear_decomposition(D, initial)
    ears = []
    for ear in dec.ears:
        if ear.length == 1:
            o = D.origin[ear.edges[0]]
            if o.edge in in_m:
                continue
        edges = tuple(D.origin[a].edge for a in ear.edges)
        ears.append(Ear(ear.kind, ear.vertices, edges))
    return EarDecomposition(tuple(ears))


def _combined_adjacency(G: BipartiteGraph) -> list[list[tuple[int, int]]]:
    n = G.n
    adj: list[list[tuple[int, int]]] = [[] for _ in range(2 * n)]
    for i, (u, v, _) in enumerate(G.edges):
        adj[u].append((n + v, i))
        adj[n + v].append((u, i))
    for a in adj:
        a.sort()
    return adj


def _complement_has_pm(G: BipartiteGraph, covered: set[int]) -> bool:
    n = G.n
    left = [u for u in range(n) if u not in covered]
    right = [v for v in range(n) if n + v not in covered]
    if len(left) != len(right):
        return False
    if not left:
        return True
    sub, *_ = G.induced(left, right)
    return max_matching(sub).is_perfect


def _edge_between(G: BipartiteGraph, x: int, y: int) -> int:
    n = G.n
    u, v = (x, y - n) if x < n else (y, x - n)
    e = G.edge_id(u, v)
    assert e is not None
    return e


def _ear_from_vertices(G: BipartiteGraph, verts: list[int]) -> Ear:
    edges = tuple(_edge_between(G, a, b) for a, b in zip(verts, verts[1:]))
    return Ear(PATH, tuple(verts), edges)


def _simple_paths(adj, src: int, targets: set[int], blocked: set[int]):
    """All simple paths from ``src`` to a vertex of ``targets`` avoiding ``blocked``."""
    stack = [(src, iter(adj[src]))]
    path = [src]
    on_path = {src}
    if src in targets:
        yield list(path)
    while stack:
        x, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        y = nxt[0]
        if y in blocked or y in on_path:
            continue
        path.append(y)
        on_path.add(y)
        if y in targets:
            yield list(path)
        stack.append((y, iter(adj[y])))


def find_long_ear(G: BipartiteGraph, covered: set[int], adj=None) -> Ear | None:
    """First addable long ear (odd path of length >= 5) for the subgraph on
    ``covered``, or ``None``.

    Candidates are enumerated by their first three vertices ``a, p1, p2`` and
    the last two ``q1, b`` in increasing vertex order; the middle is joined by
    BFS through uncovered vertices.  An ear is addable only if the vertices it
    leaves uncovered still have a perfect matching, since otherwise no ear
    decomposition can continue from it.
    """
    if adj is None:
        adj = _combined_adjacency(G)
    N = 2 * G.n
    outside = [x for x in range(N) if x not in covered]
    if len(outside) < 4:
        return None
    for a in sorted(covered):
        for p1, _ in adj[a]:
            if p1 in covered:
                continue
            for p2, _ in adj[p1]:
                if p2 in covered:
                    continue
                for q1 in outside:
                    if q1 == p2 or (q1 < G.n) != (p2 < G.n):
                        continue
                    ends = [b for b, _ in adj[q1] if b in covered]
                    if not ends:
                        continue
                    b = ends[0]
                    goals = {y for y, _ in adj[q1] if y not in covered and y != p1}
                    if not goals:
                        continue
                    blocked = covered | {p1, q1}
                    mid = _bfs_path(adj, p2, goals, blocked)
                    if mid is None:
                        continue
                    verts = [a, p1, *mid, q1, b]
                    if _complement_has_pm(G, covered | set(verts)):
                        return _ear_from_vertices(G, verts)
                    for mid in _simple_paths(adj, p2, goals, blocked):
                        verts = [a, p1, *mid, q1, b]
                        if _complement_has_pm(G, covered | set(verts)):
                            return _ear_from_vertices(G, verts)
    return None


def _bfs_path(adj, src: int, goals: set[int], blocked: set[int]) -> list[int] | None:
    parent = {src: None}
    q = deque([src])
    while q:
        x = q.popleft()
        if x in goals:
            path = [x]
            while parent[x] is not None:
                x = parent[x]
                path.append(x)
            return path[::-1]
        for y, _ in adj[x]:
            if y in blocked or y in parent:
                continue
            parent[y] = x
            q.append(y)
    return None


def long_ear_maximal_decomposition(G: BipartiteGraph) -> EarDecomposition:
    """Odd proper ear decomposition whose long ears come first and form an
    inclusion-wise maximal set.

    Starts from the initial cycle of :func:`odd_proper_ear_decomposition`,
    adds long ears greedily, then covers the remaining vertices with ears of
    length 3 and finishes with the unused edges as trivial ears in id order.
    """
    base = odd_proper_ear_decomposition(G)
    adj = _combined_adjacency(G)
    p0 = base.ears[0]
    ears = [p0]
    covered = set(p0.vertices)
    used = set(p0.edges)
    while True:
        ear = find_long_ear(G, covered, adj)
        if ear is None:
            break
        ears.append(ear)
        covered.update(ear.vertices)
        used.update(ear.edges)
    s = len(ears) - 1
    X = frozenset(covered)
    n = G.n
    while len(covered) < 2 * n:
        ear = None
        for e, (u, v, _) in enumerate(G.edges):
            yp, ym = u, n + v
            if yp in covered or ym in covered:
                continue
            xp = next((x for x, _ in adj[ym] if x in covered), None)
            xm = next((x for x, _ in adj[yp] if x in covered), None)
            if xp is None or xm is None:
                continue
            if not _complement_has_pm(G, covered | {yp, ym}):
                continue
            ear = _ear_from_vertices(G, [xp, ym, yp, xm])
            break
        if ear is None:
            raise EarError("no ear of length 3 extends the decomposition")
        ears.append(ear)
        covered.update(ear.vertices)
        used.update(ear.edges)
    r = len(ears) - 1
    for e in range(G.m):
        if e not in used:
            a, b = G.endpoints(e)
            ears.append(Ear(PATH, (a, b), (e,)))
    return EarDecomposition(tuple(ears), s=s, r=r, X=X, Y=frozenset(range(2 * n)) - X)


def validate_odd_proper(G: BipartiteGraph, dec: EarDecomposition) -> tuple[bool, str | None]:
    """Check every defining condition of an odd proper ear decomposition.

    Returns ``(True, None)`` or ``(False, first violated condition)``.
    """
    if not dec.ears:
        return False, "no ears"
    seen_edges: set[int] = set()
    seen_verts: set[int] = set()
    for idx, ear in enumerate(dec.ears):
        L = ear.length
        if idx == 0:
            if ear.kind != INITIAL:
                return False, "ear 0 is not a cycle"
            if L < 4:
                return False, "initial cycle too short"
            if len(ear.vertices) != L:
                return False, "ear 0 vertex count mismatch"
            if len(set(ear.vertices)) != L:
                return False, "ear 0 repeats a vertex"
            pairs = zip(ear.vertices, ear.vertices[1:] + ear.vertices[:1])
        else:
            if ear.kind != PATH:
                return False, f"ear {idx} is not a path"
            if L < 1 or len(ear.vertices) != L + 1:
                return False, f"ear {idx} vertex count mismatch"
            if L % 2 == 0:
                return False, f"ear {idx} has even length"
            first, last = ear.vertices[0], ear.vertices[-1]
            if first == last or first not in seen_verts or last not in seen_verts:
                return False, f"ear {idx} endpoints not attached"
            inner = ear.vertices[1:-1]
            if len(set(inner)) != len(inner) or any(x in seen_verts for x in inner):
                return False, f"ear {idx} inner vertex not fresh"
            pairs = zip(ear.vertices, ear.vertices[1:])
        for e, (a, b) in zip(ear.edges, pairs):
            if not (0 <= e < G.m) or set(G.endpoints(e)) != {a, b}:
                return False, f"ear {idx} edge does not join consecutive vertices"
            if e in seen_edges:
                return False, f"edge {e} used twice"
            seen_edges.add(e)
        seen_verts.update(ear.vertices)
    if len(seen_edges) != G.m:
        return False, "edges not covered"
    if len(seen_verts) != 2 * G.n:
        return False, "vertices not covered"
    return True, None


def validate_long_ear_order(dec: EarDecomposition) -> tuple[bool, str | None]:
    """Check the long / short / trivial ordering recorded by ``s`` and ``r``."""
    if dec.s is None or dec.r is None:
        return False, "decomposition carries no classification"
    for i, ear in enumerate(dec.ears[1:], start=1):
        if i <= dec.s and ear.length < 5:
            return False, f"ear {i} should be long"
        if dec.s < i <= dec.r and ear.length != 3:
            return False, f"ear {i} should have length 3"
        if i > dec.r and ear.length != 1:
            return False, f"ear {i} should be trivial"
    return True, None
