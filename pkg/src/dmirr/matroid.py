"""Matroid oracles, weighted matroid intersection, and strongly balanced
spanning trees.

A spanning tree of a balanced bipartite graph is *strongly balanced* with
root ``r`` (a left vertex) when ``r`` has tree degree 1 and every other left
vertex has tree degree 2.  Such trees are exactly the common bases of the
cycle matroid and the partition matroid capping left degrees at 2 (1 at
``r``), so the minimum one is a weighted matroid intersection.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from numba import njit

from .connectivity import is_dm_irreducible
from .graphs import BipartiteGraph, Digraph, EdgeSet, GraphError, Matching, build_auxiliary


class NoCommonBase(ValueError):
    """The matroids share no common base; ``certificate`` is a maximum common
    independent set."""

    def __init__(self, message: str, certificate: Sequence[int]):
        self.certificate = tuple(certificate)
        super().__init__(message)


class Matroid:
    """Independence oracle over a finite ground set of integers."""

    def __init__(self, ground: Iterable[int], independent: Callable[[frozenset[int]], bool]):
        self.ground = tuple(sorted(ground))
        self._independent = independent

    def is_independent(self, subset: Iterable[int]) -> bool:
        return self._independent(frozenset(subset))

    def rank(self, subset: Iterable[int] | None = None) -> int:
        items = self.ground if subset is None else sorted(subset)
        basis: list[int] = []
        for e in items:
            if self.is_independent([*basis, e]):
                basis.append(e)
        return len(basis)


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.parent.setdefault(x, x)
        while p != x:
            self.parent[x] = self.parent.setdefault(p, p)
            x, p = p, self.parent[p]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def graphic_matroid(G: BipartiteGraph) -> Matroid:
    """Cycle matroid of ``G``: edge sets without cycles."""

    def forest(F: frozenset[int]) -> bool:
        uf = _UnionFind()
        return all(uf.union(*G.endpoints(e)) for e in F)

    return Matroid(range(G.m), forest)


def partition_matroid(G: BipartiteGraph, caps: Sequence[int] | Mapping[int, int]) -> Matroid:
    """Partition matroid with one class per left vertex (its incident edges).

    ``caps[u]`` bounds how many chosen edges may meet left vertex ``u``.
    """
    cap = [caps[u] for u in range(G.n)]

    def within(F: frozenset[int]) -> bool:
        count = [0] * G.n
        for e in F:
            u = G.edges[e][0]
            count[u] += 1
            if count[u] > cap[u]:
                return False
        return True

    return Matroid(range(G.m), within)


def truncate(M: Matroid, t: int) -> Matroid:
    """Independent sets of ``M`` with at most ``t`` elements."""
    return Matroid(M.ground, lambda F: len(F) <= t and M.is_independent(F))


def sbst_matroids(G: BipartiteGraph, root: int | None = None) -> tuple[Matroid, Matroid]:
    """The two matroids whose common bases are the strongly balanced spanning
    trees (rooted at ``root`` when given)."""
    M1 = graphic_matroid(G)
    if root is None:
        return M1, truncate(partition_matroid(G, [2] * G.n), 2 * G.n - 1)
    caps = [2] * G.n
    caps[root] = 1
    return M1, partition_matroid(G, caps)


def max_common_independent(M1: Matroid, M2: Matroid, weights: Mapping[int, int] | Sequence[int]) -> list[int]:
    """Minimum-weight common independent set among those of maximum size.

    Successive shortest augmenting paths in the exchange graph: elements
    outside ``I`` cost their weight, elements inside cost minus their weight,
    and among cheapest paths one with the fewest arcs is taken (labels are
    compared as ``(cost, arcs)`` and relaxed Bellman-Ford style).
    """
    ground = M1.ground
    if tuple(M2.ground) != ground:
        raise ValueError("matroids must share a ground set")
    w = {e: weights[e] for e in ground}
    I: set[int] = set()
    while True:
        outside = [y for y in ground if y not in I]
        inside = sorted(I)
        src = {y for y in outside if M1.is_independent(I | {y})}
        snk = {y for y in outside if M2.is_independent(I | {y})}
        arcs: list[tuple[int, int]] = []
        for y in outside:
            for x in inside:
                swapped = (I - {x}) | {y}
                if y not in src and M1.is_independent(swapped):
                    arcs.append((x, y))
                if y not in snk and M2.is_independent(swapped):
                    arcs.append((y, x))
        length = {y: w[y] for y in outside}
        length.update({x: -w[x] for x in inside})
        label: dict[int, tuple[int, int]] = {y: (w[y], 0) for y in sorted(src)}
        pred: dict[int, int | None] = {y: None for y in src}
        for _ in range(len(ground) + 1):
            changed = False
            for a, b in arcs:
                if a not in label:
                    continue
                cand = (label[a][0] + length[b], label[a][1] + 1)
                if b not in label or cand < label[b]:
                    label[b] = cand
                    pred[b] = a
                    changed = True
            if not changed:
                break
        ends = [(label[y], y) for y in snk if y in label]
        if not ends:
            return sorted(I)
        _, y = min(ends)
        path = []
        while y is not None:
            path.append(y)
            y = pred[y]
        I.symmetric_difference_update(path)


def min_weight_common_base(M1: Matroid, M2: Matroid, weights: Mapping[int, int] | Sequence[int]) -> list[int]:
    """Minimum-weight common base, or :class:`NoCommonBase`."""
    I = max_common_independent(M1, M2, weights)
    if len(I) != M1.rank() or len(I) != M2.rank():
        raise NoCommonBase("matroids have no common base", I)
    return I


_BIG = np.int64(1) << np.int64(62)


@njit(cache=True)
def _graphic_partition_intersection(nv, eu, ev, w, cls, cap):  # pragma: no cover - compiled
    """Same algorithm as :func:`max_common_independent` for the cycle matroid
    on ``nv`` vertices against a partition matroid (class ``cls[e]`` with
    capacity ``cap[c]``), with the exchange graph read off the forest."""
    m = eu.shape[0]
    ncls = cap.shape[0]
    inI = np.zeros(m, np.bool_)
    cnt = np.zeros(ncls, np.int64)
    big = np.int64(1) << np.int64(62)
    while True:
        deg = np.zeros(nv + 1, np.int64)
        for e in range(m):
            if inI[e]:
                deg[eu[e] + 1] += 1
                deg[ev[e] + 1] += 1
        for i in range(nv):
            deg[i + 1] += deg[i]
        fill = deg[:nv].copy()
        adj_v = np.empty(deg[nv], np.int64)
        adj_e = np.empty(deg[nv], np.int64)
        for e in range(m):
            if inI[e]:
                a, b = eu[e], ev[e]
                adj_v[fill[a]] = b
                adj_e[fill[a]] = e
                fill[a] += 1
                adj_v[fill[b]] = a
                adj_e[fill[b]] = e
                fill[b] += 1
        comp = np.full(nv, -1, np.int64)
        par_v = np.full(nv, -1, np.int64)
        par_e = np.full(nv, -1, np.int64)
        depth = np.zeros(nv, np.int64)
        queue = np.empty(nv, np.int64)
        for s in range(nv):
            if comp[s] != -1:
                continue
            comp[s] = s
            head, tail = 0, 0
            queue[tail] = s
            tail += 1
            while head < tail:
                x = queue[head]
                head += 1
                for k in range(deg[x], deg[x + 1]):
                    y = adj_v[k]
                    if comp[y] == -1:
                        comp[y] = s
                        par_v[y] = x
                        par_e[y] = adj_e[k]
                        depth[y] = depth[x] + 1
                        queue[tail] = y
                        tail += 1
        # members of I per partition class
        cstart = np.zeros(ncls + 1, np.int64)
        for e in range(m):
            if inI[e]:
                cstart[cls[e] + 1] += 1
        for c in range(ncls):
            cstart[c + 1] += cstart[c]
        cfill = cstart[:ncls].copy()
        cmem = np.empty(cstart[ncls], np.int64)
        for e in range(m):
            if inI[e]:
                cmem[cfill[cls[e]]] = e
                cfill[cls[e]] += 1
        src = np.zeros(m, np.bool_)
        snk = np.zeros(m, np.bool_)
        gcount = np.zeros(m + 1, np.int64)
        for y in range(m):
            if inI[y]:
                continue
            if cnt[cls[y]] < cap[cls[y]]:
                snk[y] = True
            a, b = eu[y], ev[y]
            if comp[a] != comp[b]:
                src[y] = True
                continue
            while a != b:
                if depth[a] >= depth[b]:
                    gcount[par_e[a] + 1] += 1
                    a = par_v[a]
                else:
                    gcount[par_e[b] + 1] += 1
                    b = par_v[b]
        for i in range(m):
            gcount[i + 1] += gcount[i]
        gfill = gcount[:m].copy()
        gadj = np.empty(gcount[m], np.int64)
        for y in range(m):
            if inI[y] or src[y]:
                continue
            a, b = eu[y], ev[y]
            while a != b:
                if depth[a] >= depth[b]:
                    x = par_e[a]
                    a = par_v[a]
                else:
                    x = par_e[b]
                    b = par_v[b]
                gadj[gfill[x]] = y
                gfill[x] += 1
        dist = np.full(m, big, np.int64)
        hops = np.zeros(m, np.int64)
        pred = np.full(m, -1, np.int64)
        inq = np.zeros(m, np.bool_)
        ring = np.empty(m + 1, np.int64)
        head, tail, size = 0, 0, m + 1
        for y in range(m):
            if src[y] and not inI[y]:
                dist[y] = w[y]
                inq[y] = True
                ring[tail] = y
                tail = (tail + 1) % size
        while head != tail:
            a = ring[head]
            head = (head + 1) % size
            inq[a] = False
            da, ha = dist[a], hops[a] + 1
            if inI[a]:
                for k in range(gcount[a], gcount[a + 1]):
                    y = gadj[k]
                    nd = da + w[y]
                    if nd < dist[y] or (nd == dist[y] and ha < hops[y]):
                        dist[y] = nd
                        hops[y] = ha
                        pred[y] = a
                        if not inq[y]:
                            inq[y] = True
                            ring[tail] = y
                            tail = (tail + 1) % size
            elif not snk[a]:
                c = cls[a]
                for k in range(cstart[c], cstart[c + 1]):
                    x = cmem[k]
                    nd = da - w[x]
                    if nd < dist[x] or (nd == dist[x] and ha < hops[x]):
                        dist[x] = nd
                        hops[x] = ha
                        pred[x] = a
                        if not inq[x]:
                            inq[x] = True
                            ring[tail] = x
                            tail = (tail + 1) % size
        best = -1
        for y in range(m):
            if inI[y] or not snk[y] or dist[y] == big:
                continue
            if best == -1 or dist[y] < dist[best] or (dist[y] == dist[best] and hops[y] < hops[best]):
                best = y
        if best == -1:
            break
        y = best
        while y != -1:
            if inI[y]:
                inI[y] = False
                cnt[cls[y]] -= 1
            else:
                inI[y] = True
                cnt[cls[y]] += 1
            y = pred[y]
    return inI


@njit(cache=True)
def _rooted_forest(nv, eu, ev, inI):  # pragma: no cover - compiled
    """Preorder numbering of the forest ``inI``: ``order[tin[x]:tout[x]]`` is
    the subtree of ``x``; ``top[x]`` is its component root; ``child[e]`` is the
    lower endpoint of forest edge ``e``."""
    m = eu.shape[0]
    deg = np.zeros(nv + 1, np.int64)
    for e in range(m):
        if inI[e]:
            deg[eu[e] + 1] += 1
            deg[ev[e] + 1] += 1
    for i in range(nv):
        deg[i + 1] += deg[i]
    fill = deg[:nv].copy()
    adj_v = np.empty(deg[nv], np.int64)
    adj_e = np.empty(deg[nv], np.int64)
    for e in range(m):
        if inI[e]:
            a, b = eu[e], ev[e]
            adj_v[fill[a]] = b
            adj_e[fill[a]] = e
            fill[a] += 1
            adj_v[fill[b]] = a
            adj_e[fill[b]] = e
            fill[b] += 1
    tin = np.full(nv, -1, np.int64)
    tout = np.zeros(nv, np.int64)
    top = np.zeros(nv, np.int64)
    order = np.empty(nv, np.int64)
    child = np.full(m, -1, np.int64)
    stack = np.empty(nv, np.int64)
    cursor = np.zeros(nv, np.int64)
    clock = 0
    for s in range(nv):
        if tin[s] != -1:
            continue
        sp = 0
        stack[0] = s
        tin[s] = clock
        order[clock] = s
        clock += 1
        top[s] = s
        cursor[s] = deg[s]
        while sp >= 0:
            x = stack[sp]
            if cursor[x] < deg[x + 1]:
                k = cursor[x]
                cursor[x] += 1
                y = adj_v[k]
                if tin[y] == -1:
                    tin[y] = clock
                    order[clock] = y
                    clock += 1
                    top[y] = s
                    child[adj_e[k]] = y
                    cursor[y] = deg[y]
                    sp += 1
                    stack[sp] = y
            else:
                tout[x] = clock
                sp -= 1
    return tin, tout, top, order, child


@njit(cache=True)
def _graphic_partition_dijkstra(nv, eu, ev, w, cls, cap):  # pragma: no cover - compiled
    """Same augmentation rule as :func:`_graphic_partition_intersection`, with
    Dijkstra on potential-reduced lengths.  Each element's length (its
    weight outside the current set, minus its weight inside) is charged half
    to each incident arc, so all path costs are doubled; reversing a path then
    negates its arc costs exactly as in min-cost flow.

    The search stops once the best sink is settled, and the exchange arcs
    out of a forest edge are listed only when that edge is settled, by
    scanning the smaller side of the cut it defines.  Returns ``ok=False`` if
    a negative reduced length is ever met, in which case the caller falls
    back to the plain label-correcting version.
    """
    m = eu.shape[0]
    ncls = cap.shape[0]
    big = np.int64(1) << np.int64(62)
    # incidence lists of the whole graph
    ioff = np.zeros(nv + 1, np.int64)
    for e in range(m):
        ioff[eu[e] + 1] += 1
        ioff[ev[e] + 1] += 1
    for i in range(nv):
        ioff[i + 1] += ioff[i]
    ifill = ioff[:nv].copy()
    inc = np.empty(ioff[nv], np.int64)
    for e in range(m):
        inc[ifill[eu[e]]] = e
        ifill[eu[e]] += 1
        inc[ifill[ev[e]]] = e
        ifill[ev[e]] += 1
    inI = np.zeros(m, np.bool_)
    cnt = np.zeros(ncls, np.int64)
    pot = np.zeros(m, np.int64)
    pot_t = np.int64(0)
    dist = np.empty(m, np.int64)
    hops = np.empty(m, np.int64)
    pred = np.empty(m, np.int64)
    done = np.empty(m, np.bool_)
    while True:
        tin, tout, top, order, child = _rooted_forest(nv, eu, ev, inI)
        cstart = np.zeros(ncls + 1, np.int64)
        for e in range(m):
            if inI[e]:
                cstart[cls[e] + 1] += 1
        for c in range(ncls):
            cstart[c + 1] += cstart[c]
        cfill = cstart[:ncls].copy()
        cmem = np.empty(cstart[ncls], np.int64)
        for e in range(m):
            if inI[e]:
                cmem[cfill[cls[e]]] = e
                cfill[cls[e]] += 1
        dist[:] = big
        hops[:] = 0
        pred[:] = -1
        done[:] = False
        heap = [(np.int64(0), np.int64(0), np.int64(0)) for _ in range(0)]
        for y in range(m):
            if not inI[y] and top[eu[y]] != top[ev[y]]:
                d = w[y] - pot[y]
                if d < 0:
                    return inI, False
                dist[y] = d
                heap.append((d, np.int64(0), np.int64(y)))
        heapq.heapify(heap)
        best, best_d, best_h = -1, big, big
        while heap:
            d, h, a = heapq.heappop(heap)
            if done[a] or d != dist[a] or h != hops[a]:
                continue
            if d > best_d or (d == best_d and h > best_h):
                break
            done[a] = True
            if not inI[a]:
                c = cls[a]
                if cnt[c] < cap[c]:
                    dt = w[a] + pot[a] - pot_t
                    if dt < 0:
                        return inI, False
                    if d + dt < best_d or (d + dt == best_d and (h < best_h or (h == best_h and a < best))):
                        best, best_d, best_h = a, d + dt, h
                    continue
                for k in range(cstart[c], cstart[c + 1]):
                    x = cmem[k]
                    rc = w[a] - w[x] + pot[a] - pot[x]
                    if rc < 0:
                        return inI, False
                    nd, nh = d + rc, h + 1
                    if nd < dist[x] or (nd == dist[x] and nh < hops[x]):
                        dist[x], hops[x], pred[x] = nd, nh, a
                        heapq.heappush(heap, (nd, nh, x))
                continue
            ch = child[a]
            rt = top[ch]
            lo, hi = tin[ch], tout[ch]
            if 2 * (hi - lo) <= tout[rt] - tin[rt]:
                ranges = ((lo, hi), (lo, lo))
                want_inside = False
            else:
                ranges = ((tin[rt], lo), (hi, tout[rt]))
                want_inside = True
            for r0, r1 in ranges:
                for p in range(r0, r1):
                    v = order[p]
                    for k in range(ioff[v], ioff[v + 1]):
                        y = inc[k]
                        if inI[y]:
                            continue
                        o = ev[y] if eu[y] == v else eu[y]
                        if top[o] != rt:
                            continue
                        inside = lo <= tin[o] < hi
                        if inside != want_inside:
                            continue
                        rc = w[y] - w[a] + pot[a] - pot[y]
                        if rc < 0:
                            return inI, False
                        nd, nh = d + rc, h + 1
                        if nd < dist[y] or (nd == dist[y] and nh < hops[y]):
                            dist[y], hops[y], pred[y] = nd, nh, a
                            heapq.heappush(heap, (nd, nh, y))
        if best == -1:
            break
        for e in range(m):
            if done[e] and dist[e] < best_d:
                pot[e] += dist[e]
            else:
                pot[e] += best_d
        pot_t += best_d
        y = best
        while y != -1:
            if inI[y]:
                inI[y] = False
                cnt[cls[y]] -= 1
            else:
                inI[y] = True
                cnt[cls[y]] += 1
            y = pred[y]
    return inI, True


def graphic_partition_intersection(G: BipartiteGraph, caps: Sequence[int]) -> list[int]:
    """Fast path of :func:`max_common_independent` for the cycle matroid of
    ``G`` against left-degree caps ``caps``."""
    if G.m == 0:
        return []
    eu = np.array([u for u, _, _ in G.edges], dtype=np.int64)
    ev = np.array([G.n + v for _, v, _ in G.edges], dtype=np.int64)
    w = np.array([x for _, _, x in G.edges], dtype=np.int64)
    caps_arr = np.asarray(caps, dtype=np.int64)
    chosen, ok = _graphic_partition_dijkstra(2 * G.n, eu, ev, w, eu.copy(), caps_arr)
    if not ok:
        chosen = _graphic_partition_intersection(2 * G.n, eu, ev, w, eu.copy(), caps_arr)
    return [int(i) for i in np.flatnonzero(chosen)]


@dataclass(frozen=True)
class StronglyBalancedTree:
    tree: EdgeSet
    root: int
    matching: Matching

    @property
    def weight(self) -> int:
        return self.tree.weight


def strongly_balanced_root(G: BipartiteGraph, ids: Iterable[int]) -> int | None:
    """Root of the strongly balanced spanning tree ``ids``, or ``None`` when
    ``ids`` is not a spanning tree meeting the left degree condition."""
    ids = list(ids)
    if len(ids) != 2 * G.n - 1:
        return None
    uf = _UnionFind()
    if not all(uf.union(*G.endpoints(e)) for e in ids):
        return None
    deg = [0] * G.n
    for e in ids:
        deg[G.edges[e][0]] += 1
    roots = [u for u in range(G.n) if deg[u] == 1]
    if len(roots) != 1 or any(d not in (1, 2) for d in deg):
        return None
    return roots[0]


def tree_to_arborescence(T: StronglyBalancedTree | Sequence[int], G: BipartiteGraph) -> tuple[Matching, EdgeSet]:
    """Unique perfect matching ``M`` of a strongly balanced tree and the
    in-arborescence formed by orienting ``T - M`` left to right and ``M``
    right to left.  The arborescence is an arc set of ``G_M``."""
    ids = list(T.tree.ids) if isinstance(T, StronglyBalancedTree) else sorted(T)
    deg = [0] * G.n
    for e in ids:
        deg[G.edges[e][0]] += 1
    roots = [u for u in range(G.n) if deg[u] == 1]
    for u in range(G.n):
        if deg[u] not in (1, 2):
            raise GraphError(f"left vertex u{u + 1} has tree degree {deg[u]}")
    if len(roots) != 1:
        raise GraphError(f"expected exactly one left vertex of degree 1, found {len(roots)}")
    # peel leaves: a degree-1 vertex must be matched to its only neighbour
    nbrs: dict[int, dict[int, int]] = {x: {} for x in range(2 * G.n)}
    for e in ids:
        a, b = G.endpoints(e)
        nbrs[a][b] = e
        nbrs[b][a] = e
    leaves = sorted(x for x in nbrs if len(nbrs[x]) == 1)
    matched: list[int] = []
    alive = set(nbrs)
    while leaves:
        x = leaves.pop()
        if x not in alive or len(nbrs[x]) != 1:
            continue
        (y, e), = nbrs[x].items()
        matched.append(e)
        for z in (x, y):
            alive.discard(z)
            for t in list(nbrs[z]):
                del nbrs[t][z]
                if len(nbrs[t]) == 1 and t in alive:
                    leaves.append(t)
            nbrs[z].clear()
    if alive or len(matched) != G.n:
        raise GraphError("tree has no perfect matching")
    M = Matching(G, tuple(matched))
    aux = build_auxiliary(G, M)
    in_m = set(M.ids)
    back = {e: G.m + k for k, e in enumerate(M.ids)}
    arcs = [back[e] if e in in_m else e for e in ids]
    return M, EdgeSet(aux, tuple(arcs))


class SBSTError(ValueError):
    pass


def solve_sbstr(G: BipartiteGraph, r: int, *, check_irreducible: bool = True, method: str = "fast") -> StronglyBalancedTree:
    """Minimum-weight strongly balanced spanning tree rooted at left vertex ``r``.

    ``method="generic"`` runs the oracle-based intersection instead of the
    compiled one; both implement the same augmenting-path rule.
    """
    if not 0 <= r < G.n:
        raise SBSTError(f"root u{r + 1} is not a left vertex")
    if check_irreducible:
        cert = is_dm_irreducible(G)
        if not cert:
            raise SBSTError(f"graph is not DM-irreducible ({cert.reason})")
    caps = [2] * G.n
    caps[r] = 1
    if method == "fast":
        chosen = graphic_partition_intersection(G, caps)
    elif method == "generic":
        M1, M2 = sbst_matroids(G, r)
        chosen = max_common_independent(M1, M2, [w for _, _, w in G.edges])
    else:
        raise ValueError(f"unknown method {method!r}")
    if len(chosen) != 2 * G.n - 1:
        raise NoCommonBase("no strongly balanced spanning tree with this root", chosen)
    M, _ = tree_to_arborescence(chosen, G)
    return StronglyBalancedTree(EdgeSet(G, tuple(chosen)), r, M)


def solve_sbst(G: BipartiteGraph, **kwargs) -> StronglyBalancedTree:
    """Minimum over all roots; ties go to the smallest root."""
    best = None
    for r in range(G.n):
        t = solve_sbstr(G, r, **kwargs)
        if best is None or t.weight < best.weight:
            best = t
        kwargs["check_irreducible"] = False
    if best is None:
        raise SBSTError("empty graph")
    return best
