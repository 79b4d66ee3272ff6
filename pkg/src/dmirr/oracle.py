"""Brute-force exact solvers used as ground truth.

Everything here is self-contained on purpose: feasibility is decided with
bitmask reachability and a simple augmenting-path matching, never with the
library's own matching or connectivity code.
"""

from __future__ import annotations

from .graphs import BipartiteGraph, Digraph, EdgeSet

DEFAULT_CAP = 24


class OracleTooLarge(ValueError):
    pass


def _closure(start: int, succ: list[int]) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= succ[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def _strong(nv: int, pairs: list[tuple[int, int]]) -> bool:
    if nv <= 1:
        return True
    fwd = [0] * nv
    bwd = [0] * nv
    for a, b in pairs:
        fwd[a] |= 1 << b
        bwd[b] |= 1 << a
    full = (1 << nv) - 1
    return _closure(0, fwd) == full and _closure(0, bwd) == full


def _perfect_matching(n: int, pairs: list[tuple[int, int]]) -> list[int] | None:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
    owner = [-1] * n

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if owner[v] == -1 or augment(owner[v], seen):
                    owner[v] = u
                    return True
        return False

    for u in range(n):
        if not augment(u, [False] * n):
            return None
    mate = [0] * n
    for v, u in enumerate(owner):
        mate[u] = v
    return mate


def dm_feasible(n: int, pairs: list[tuple[int, int]]) -> bool:
    """Perfect matching exists and the auxiliary digraph is strongly connected."""
    mate = _perfect_matching(n, pairs)
    if mate is None:
        return False
    arcs = [(u, n + v) for u, v in pairs] + [(n + mate[u], u) for u in range(n)]
    return _strong(2 * n, arcs)


def _branch_and_bound(m: int, weights: list[int], feasible, min_size: int) -> list[int] | None:
    """Minimum-weight feasible subset of ``range(m)`` for an upward-closed
    ``feasible`` predicate on sorted id lists."""
    order = sorted(range(m), key=lambda e: (weights[e], e))
    ws = [weights[e] for e in order]
    best: list[int] | None = None
    best_w = None
    chosen: list[int] = []

    def go(i: int, cur_w: int, shrunk: bool) -> None:
        nonlocal best, best_w
        need = max(0, min_size - len(chosen))
        if best_w is not None:
            bound = cur_w + sum(ws[i:i + need]) if need <= m - i else None
            if bound is None or bound >= best_w:
                return
        elif need > m - i:
            return
        # the reachable superset only changes when an edge was just excluded
        if shrunk and not feasible(chosen + order[i:]):
            return
        if len(chosen) >= min_size and feasible(chosen):
            best, best_w = sorted(chosen), cur_w
            return
        if i == m:
            return
        chosen.append(order[i])
        go(i + 1, cur_w + ws[i], False)
        chosen.pop()
        go(i + 1, cur_w, True)

    go(0, 0, True)
    return best


def exact_min_dmiss(G: BipartiteGraph, force: bool = False) -> EdgeSet:
    """Minimum-weight DM-irreducible spanning edge set, by branch and bound over
    edges in weight order."""
    if G.m > DEFAULT_CAP and not force:
        raise OracleTooLarge(f"{G.m} edges exceed the oracle cap of {DEFAULT_CAP}")
    pairs = [(u, v) for u, v, _ in G.edges]
    weights = [w for _, _, w in G.edges]
    min_size = 2 * G.n if G.n > 1 else G.n
    best = _branch_and_bound(G.m, weights, lambda ids: dm_feasible(G.n, [pairs[e] for e in ids]), min_size)
    if best is None:
        raise ValueError("graph is not DM-irreducible")
    return EdgeSet(G, tuple(best))


def exact_min_scss(D: Digraph, force: bool = False) -> EdgeSet:
    """Minimum-weight strongly connected spanning arc set."""
    if D.m > DEFAULT_CAP and not force:
        raise OracleTooLarge(f"{D.m} arcs exceed the oracle cap of {DEFAULT_CAP}")
    pairs = [(u, v) for u, v, _ in D.arcs]
    weights = [w for _, _, w in D.arcs]
    min_size = D.n if D.n > 1 else 0
    best = _branch_and_bound(D.m, weights, lambda ids: _strong(D.n, [pairs[a] for a in ids]), min_size)
    if best is None:
        raise ValueError("digraph is not strongly connected")
    return EdgeSet(D, tuple(best))


def exact_min_scss_by_deletion(D: Digraph) -> int:
    """Second route to the SCSS optimum: explore every order of deleting arcs
    while staying strongly connected (memoised on the remaining arc set)."""
    pairs = [(u, v) for u, v, _ in D.arcs]
    full = (1 << D.m) - 1
    if not _strong(D.n, pairs):
        raise ValueError("digraph is not strongly connected")
    memo: dict[int, int] = {}

    def weight(mask: int) -> int:
        return sum(D.arcs[a][2] for a in range(D.m) if mask >> a & 1)

    def go(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        best = weight(mask)
        for a in range(D.m):
            if mask >> a & 1:
                rest = mask & ~(1 << a)
                if _strong(D.n, [pairs[b] for b in range(D.m) if rest >> b & 1]):
                    best = min(best, go(rest))
        memo[mask] = best
        return best

    return go(full)


def exact_unweighted_dmiss_decision(G: BipartiteGraph, k: int, force: bool = False) -> bool:
    """Whether ``G`` has a DM-irreducible spanning subgraph with at most
    ``3n - 2 - k`` edges."""
    unit = G.with_weights([1] * G.m)
    return len(exact_min_dmiss(unit, force=force)) <= 3 * G.n - 2 - k
