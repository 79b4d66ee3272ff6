"""Strong connectivity and DM-irreducibility."""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import BipartiteGraph, Digraph, Matching, build_auxiliary
from .matching import hall_violator, max_matching


def scc(D: Digraph) -> list[list[int]]:
    """Strongly connected components (Tarjan), sinks of the condensation first.

    Each component is sorted; components appear in reverse topological order.
    """
    n = D.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    heads = [[D.arcs[a][1] for a in D.out_arcs(v)] for v in range(n)]
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, k = work[-1]
            if k < len(heads[v]):
                work[-1] = (v, k + 1)
                w = heads[v][k]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                p = work[-1][0]
                if low[v] < low[p]:
                    low[p] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def is_strongly_connected(D: Digraph) -> bool:
    return len(scc(D)) <= 1


@dataclass(frozen=True)
class DMCertificate:
    """Outcome of a DM-irreducibility test.

    Exactly one certificate is populated: ``matching`` on a yes answer,
    ``hall_violator`` when no perfect matching exists, or ``components`` (SCCs
    of the auxiliary graph, combined vertex numbering) otherwise.
    """

    irreducible: bool
    matching: Matching | None = None
    hall_violator: tuple[list[int], list[int]] | None = None
    components: list[list[int]] | None = None

    def __bool__(self) -> bool:
        return self.irreducible

    @property
    def reason(self) -> str:
        if self.irreducible:
            return "dm-irreducible"
        if self.hall_violator is not None:
            return "no perfect matching"
        return "auxiliary graph not strongly connected"


def is_dm_irreducible(G: BipartiteGraph) -> DMCertificate:
    """Decide DM-irreducibility through one perfect matching and one SCC run.

    Any perfect matching works: the auxiliary graph is strongly connected
    for one of them exactly when it is for all of them.
    """
    M = max_matching(G)
    if not M.is_perfect:
        return DMCertificate(False, hall_violator=hall_violator(G, M))
    if G.n == 0:
        return DMCertificate(True, matching=M)
    comps = scc(build_auxiliary(G, M))
    if len(comps) == 1:
        return DMCertificate(True, matching=M)
    return DMCertificate(False, components=comps)


def is_dm_irreducible_edges(G: BipartiteGraph, ids) -> bool:
    """DM-irreducibility of the spanning subgraph formed by ``ids``."""
    sub, _ = G.subgraph(ids)
    return is_dm_irreducible(sub).irreducible


def dm_irreducible_masks(n: int, nbr: list[int]) -> bool:
    """DM-irreducibility for a graph given as right-neighbour bitmasks of the
    left vertices.  Meant for small graphs inside search loops."""
    if n == 0:
        return True
    mate_r = [-1] * n

    def augment(u: int, seen: int) -> tuple[bool, int]:
        avail = nbr[u] & ~seen
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            seen |= low
            if mate_r[v] == -1:
                mate_r[v] = u
                return True, seen
            ok, seen = augment(mate_r[v], seen)
            if ok:
                mate_r[v] = u
                return True, seen
            avail = nbr[u] & ~seen
        return False, seen

    for u in range(n):
        if not augment(u, 0)[0]:
            return False
    mate_l = [0] * n
    for v, u in enumerate(mate_r):
        mate_l[u] = v
    # forward: left u reaches right N(u); right v reaches left mate_r[v]
    seen_l = 1
    frontier = 1
    seen_r = 0
    while frontier:
        rights = 0
        f = frontier
        while f:
            low = f & -f
            rights |= nbr[low.bit_length() - 1]
            f ^= low
        rights &= ~seen_r
        seen_r |= rights
        frontier = 0
        while rights:
            low = rights & -rights
            frontier |= 1 << mate_r[low.bit_length() - 1]
            rights ^= low
        frontier &= ~seen_l
        seen_l |= frontier
    full = (1 << n) - 1
    if seen_l != full or seen_r != full:
        return False
    # backward: left u is entered from right mate_l[u]; right v from its neighbours
    into_r = [0] * n
    for u in range(n):
        m = nbr[u]
        while m:
            low = m & -m
            into_r[low.bit_length() - 1] |= 1 << u
            m ^= low
    seen_l = 1
    frontier = 1
    seen_r = 0
    while frontier:
        rights = 0
        f = frontier
        while f:
            low = f & -f
            rights |= 1 << mate_l[low.bit_length() - 1]
            f ^= low
        rights &= ~seen_r
        seen_r |= rights
        frontier = 0
        while rights:
            low = rights & -rights
            frontier |= into_r[low.bit_length() - 1]
            rights ^= low
        frontier &= ~seen_l
        seen_l |= frontier
    return seen_l == full and seen_r == full
