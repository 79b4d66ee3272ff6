"""Minimum-weight spanning arborescences (Chu-Liu/Edmonds)."""

from __future__ import annotations

from collections import deque

from .graphs import Digraph, EdgeSet


class ArborescenceError(ValueError):
    def __init__(self, message: str, unreachable: list[int]):
        self.unreachable = unreachable
        super().__init__(message)


def _reachable_from(D: Digraph, r: int) -> list[bool]:
    seen = [False] * D.n
    seen[r] = True
    q = deque([r])
    while q:
        x = q.popleft()
        for a in D.out_arcs(x):
            y = D.arcs[a][1]
            if not seen[y]:
                seen[y] = True
                q.append(y)
    return seen


def _edmonds(n: int, root: int, U, V, W) -> list[int]:
    """Indices of the arcs of a minimum out-arborescence.

    Arcs are given as parallel lists; ties between equal reduced weights go
    to the smaller original index.  Contraction levels are kept on a stack and
    expanded afterwards, so deep contraction chains need no recursion.
    """
    OID = list(range(len(U)))
    levels = []
    cur_n, cur_root = n, root
    while True:
        best = [-1] * cur_n
        bw = [0] * cur_n
        bo = [0] * cur_n
        for i in range(len(U)):
            v = V[i]
            if v == cur_root or U[i] == v:
                continue
            w = W[i]
            if best[v] == -1 or w < bw[v] or (w == bw[v] and OID[i] < bo[v]):
                best[v], bw[v], bo[v] = i, w, OID[i]
        # cycles of the chosen-parent map
        stamp = [-1] * cur_n
        cyc_id = [-1] * cur_n
        cycles: list[list[int]] = []
        for s in range(cur_n):
            x = s
            while x != cur_root and stamp[x] == -1 and cyc_id[x] == -1:
                stamp[x] = s
                x = U[best[x]]
            if x != cur_root and stamp[x] == s and cyc_id[x] == -1:
                members = [x]
                cyc_id[x] = len(cycles)
                y = U[best[x]]
                while y != x:
                    members.append(y)
                    cyc_id[y] = len(cycles)
                    y = U[best[y]]
                cycles.append(members)
        if not cycles:
            chosen = [best[v] for v in range(cur_n) if v != cur_root]
            break
        comp = [-1] * cur_n
        nxt = 0
        cyc_node = []
        for c in cycles:
            cyc_node.append(nxt)
            for x in c:
                comp[x] = nxt
            nxt += 1
        for x in range(cur_n):
            if comp[x] == -1:
                comp[x] = nxt
                nxt += 1
        nU, nV, nW, nO, nP = [], [], [], [], []
        for i in range(len(U)):
            u, v = U[i], V[i]
            cu, cv = comp[u], comp[v]
            if cu == cv:
                continue
            w = W[i] - bw[v] if cyc_id[v] != -1 else W[i]
            nU.append(cu)
            nV.append(cv)
            nW.append(w)
            nO.append(OID[i])
            nP.append(i)
        levels.append((V, best, cyc_id, cycles, nP))
        cur_root = comp[cur_root]
        cur_n = nxt
        U, V, W, OID = nU, nV, nW, nO
    for V_prev, best, cyc_id, cycles, parent in reversed(levels):
        down = [parent[j] for j in chosen]
        entry = [-1] * len(cycles)
        for i in down:
            c = cyc_id[V_prev[i]]
            if c != -1:
                entry[c] = V_prev[i]
        for c, members in enumerate(cycles):
            down.extend(best[x] for x in members if x != entry[c])
        chosen = down
    return sorted(chosen)


def min_out_arborescence(D: Digraph, r: int) -> EdgeSet:
    """Minimum-weight spanning out-arborescence rooted at ``r``."""
    seen = _reachable_from(D, r)
    if not all(seen):
        missing = [v for v in range(D.n) if not seen[v]]
        raise ArborescenceError(f"{len(missing)} vertices unreachable from the root", missing)
    U = [a[0] for a in D.arcs]
    V = [a[1] for a in D.arcs]
    W = [a[2] for a in D.arcs]
    if D.n <= 1:
        return EdgeSet(D, ())
    return EdgeSet(D, tuple(_edmonds(D.n, r, U, V, W)))


def min_in_arborescence(D: Digraph, r: int) -> EdgeSet:
    """Minimum-weight spanning in-arborescence rooted at ``r``."""
    try:
        out = min_out_arborescence(D.reverse(), r)
    except ArborescenceError as exc:
        raise ArborescenceError(
            f"{len(exc.unreachable)} vertices cannot reach the root", exc.unreachable
        ) from None
    return EdgeSet(D, out.ids)


def is_out_arborescence(D: Digraph, ids, r: int) -> bool:
    """Spanning out-arborescence check: in-degree 1 off the root, 0 at it,
    and every vertex reachable from ``r``."""
    ids = list(ids)
    if len(ids) != D.n - 1:
        return False
    indeg = [0] * D.n
    children: list[list[int]] = [[] for _ in range(D.n)]
    for a in ids:
        u, v, _ = D.arcs[a]
        indeg[v] += 1
        children[u].append(v)
    if indeg[r] != 0 or any(indeg[v] != 1 for v in range(D.n) if v != r):
        return False
    seen = {r}
    stack = [r]
    while stack:
        x = stack.pop()
        for y in children[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == D.n


def is_in_arborescence(D: Digraph, ids, r: int) -> bool:
    return is_out_arborescence(D.reverse(), ids, r)
