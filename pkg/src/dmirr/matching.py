"""Maximum-cardinality and minimum-weight perfect bipartite matchings."""

from __future__ import annotations

import heapq
from collections import deque

from .graphs import BipartiteGraph, Matching

_INF = float("inf")


class NoPerfectMatching(ValueError):
    """No perfect matching exists; ``violator`` is a left set with a too small
    neighbourhood (0-based left indices)."""

    def __init__(self, violator: list[int], neighbourhood: list[int]):
        self.violator = violator
        self.neighbourhood = neighbourhood
        super().__init__(
            f"no perfect matching: {len(violator)} left vertices have only "
            f"{len(neighbourhood)} neighbours"
        )


def _hopcroft_karp(G: BipartiteGraph) -> list[int]:
    """Return ``mate_edge[u]`` (edge id or -1) for every left vertex."""
    n = G.n
    mate_l = [-1] * n  # right vertex matched to u
    mate_r = [-1] * n
    dist = [0] * n
    adj = [[v for v, _ in G.left_adj(u)] for u in range(n)]

    def bfs() -> bool:
        q = deque()
        for u in range(n):
            if mate_l[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = -1
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = mate_r[v]
                if w == -1:
                    found = True
                elif dist[w] == -1:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(root: int) -> bool:
        # iterative DFS along the layered graph
        stack = [(root, 0)]
        path = []
        while stack:
            u, k = stack[-1]
            if k == len(adj[u]):
                dist[u] = -1
                stack.pop()
                if path:
                    path.pop()
                continue
            stack[-1] = (u, k + 1)
            v = adj[u][k]
            w = mate_r[v]
            if w == -1:
                path.append((u, v))
                for a, b in path:
                    mate_l[a] = b
                    mate_r[b] = a
                return True
            if dist[w] == dist[u] + 1:
                path.append((u, v))
                stack.append((w, 0))
        return False

    while bfs():
        for u in range(n):
            if mate_l[u] == -1:
                dfs(u)
    return [G.edge_id(u, mate_l[u]) if mate_l[u] != -1 else -1 for u in range(n)]


def max_matching(G: BipartiteGraph) -> Matching:
    """A maximum-cardinality matching (Hopcroft-Karp, fixed scan order)."""
    ids = [e for e in _hopcroft_karp(G) if e != -1]
    return Matching(G, tuple(ids))


def hall_violator(G: BipartiteGraph, M: Matching | None = None) -> tuple[list[int], list[int]] | None:
    """Left set ``X`` with ``|N(X)| < |X|`` or ``None`` if ``G`` has a perfect matching.

    Built from a maximum matching: the left vertices reachable by alternating
    paths from an exposed left vertex.
    """
    if M is None:
        M = max_matching(G)
    if M.is_perfect:
        return None
    mate_l = M.mate_of_left()
    mate_r = M.mate_of_right()
    start = next(u for u in range(G.n) if u not in mate_l)
    seen_l, seen_r = {start}, set()
    q = deque([start])
    while q:
        u = q.popleft()
        for v, _ in G.left_adj(u):
            if v in seen_r:
                continue
            seen_r.add(v)
            w = mate_r[v]  # v is matched, otherwise M would not be maximum
            if w not in seen_l:
                seen_l.add(w)
                q.append(w)
    return sorted(seen_l), sorted(seen_r)


def _min_cost_duals(G: BipartiteGraph) -> tuple[list[int], list[int]]:
    """Successive shortest paths with Dijkstra and vertex potentials.

    Returns integer potentials ``(pl, pr)`` such that ``w(e) + pl[u] - pr[v]``
    is nonnegative on every edge and zero on the edges of some minimum-weight
    perfect matching.  Assumes a perfect matching exists.
    """
    n = G.n
    pl = [0] * n
    pr = [0] * n
    mate_l = [-1] * n
    mate_r = [-1] * n
    for s in range(n):
        dist_l = [_INF] * n
        dist_r = [_INF] * n
        prev_r = [-1] * n  # left vertex preceding right vertex on the tree
        done_r = [False] * n
        dist_l[s] = 0
        heap = [(0, 0, s)]  # (dist, side, vertex) with side 0 = left, 1 = right
        target = -1
        while heap:
            d, side, x = heapq.heappop(heap)
            if side == 0:
                if d > dist_l[x]:
                    continue
                for v, e in G.left_adj(x):
                    nd = d + G.edges[e][2] + pl[x] - pr[v]
                    if nd < dist_r[v]:
                        dist_r[v] = nd
                        prev_r[v] = x
                        heapq.heappush(heap, (nd, 1, v))
            else:
                if d > dist_r[x] or done_r[x]:
                    continue
                done_r[x] = True
                if mate_r[x] == -1:
                    target = x
                    break
                u = mate_r[x]
                if d < dist_l[u]:
                    dist_l[u] = d
                    heapq.heappush(heap, (d, 0, u))
        if target == -1:
            raise NoPerfectMatching(*hall_violator(G))
        dt = dist_r[target]
        for u in range(n):
            if dist_l[u] < dt:
                pl[u] += dist_l[u] - dt
        for v in range(n):
            if dist_r[v] < dt:
                pr[v] += dist_r[v] - dt
        v = target
        while v != -1:
            u = prev_r[v]
            nxt = mate_l[u]
            mate_l[u] = v
            mate_r[v] = u
            v = nxt
    return pl, pr


def _lex_smallest_perfect(G: BipartiteGraph, allowed: list[bool]) -> list[int]:
    """Perfect matching within ``allowed`` edges whose sorted id sequence is
    lexicographically smallest.

    Greedy over edge ids: an edge is kept when some perfect matching uses it
    together with all previously kept edges and none of the rejected ones.
    The check looks for an alternating cycle through the edge.
    """
    n = G.n
    sub, emap = G.subgraph(i for i in range(G.m) if allowed[i])
    cur = [emap[e] for e in _hopcroft_karp(sub)]
    mate_l = [G.edges[e][1] for e in cur]
    mate_r = [0] * n
    for u, v in enumerate(mate_l):
        mate_r[v] = u
    fixed_l = [False] * n
    fixed_r = [False] * n
    banned = [not a for a in allowed]
    for e in range(G.m):
        if banned[e]:
            continue
        u, v, _ = G.edges[e]
        if fixed_l[u] or fixed_r[v]:
            continue
        if mate_l[u] == v:
            fixed_l[u] = fixed_r[v] = True
            continue
        # alternating path from v's mate back to a right neighbour reaching u:
        # v -> mate_r[v] -> (free edge) v' -> mate_r[v'] ... -> mate_l[u] then close via u
        goal = mate_l[u]
        start = mate_r[v]
        parent = {start: None}
        q = deque([start])
        found = None
        while q and found is None:
            a = q.popleft()
            for b, f in G.left_adj(a):
                if banned[f] or fixed_r[b] or b == mate_l[a]:
                    continue
                c = mate_r[b]
                if c in parent:
                    continue
                parent[c] = (a, b)
                if b == goal:
                    found = c
                    break
                q.append(c)
        if found is None:
            banned[e] = True
            continue
        # rematch along the cycle: a gets b for each tree step, u gets v
        c = found
        while parent[c] is not None:
            a, b = parent[c]
            mate_l[a] = b
            mate_r[b] = a
            c = a
        mate_l[u] = v
        mate_r[v] = u
        fixed_l[u] = fixed_r[v] = True
    return sorted(G.edge_id(u, mate_l[u]) for u in range(n))


def min_weight_perfect_matching(G: BipartiteGraph) -> Matching:
    """Minimum-weight perfect matching.

    Ties are broken towards the lexicographically smallest sorted sequence of
    edge ids.  Raises :class:`NoPerfectMatching` with a Hall violator when no
    perfect matching exists.
    """
    viol = hall_violator(G)
    if viol is not None:
        raise NoPerfectMatching(*viol)
    if G.n == 0:
        return Matching(G, ())
    pl, pr = _min_cost_duals(G)
    tight = [w + pl[u] - pr[v] == 0 for u, v, w in G.edges]
    return Matching(G, tuple(_lex_smallest_perfect(G, tight)))
