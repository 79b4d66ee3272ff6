"""Naive reference computations shared by the tests.

Nothing here calls into the library's algorithms; only the graph containers
are reused.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations, product

from dmirr.graphs import BipartiteGraph, Digraph


def c4(weights=(1, 1, 1, 1)) -> BipartiteGraph:
    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    return BipartiteGraph(2, [(u, v, w) for (u, v), w in zip(pairs, weights)])


def cycle_bip(n: int, w: int = 1) -> BipartiteGraph:
    """Alternating cycle u1 v1 u2 v2 ... with edges u_i v_i and u_{i+1} v_i."""
    return BipartiteGraph(n, [(i, i, w) for i in range(n)] + [((i + 1) % n, i, w) for i in range(n)])


def complete_bip(n: int, w: int = 1) -> BipartiteGraph:
    return BipartiteGraph(n, [(u, v, w) for u in range(n) for v in range(n)])


def room(n: int) -> int:
    """Edges that still fit beside the random generator's Hamiltonian cycle."""
    return n * n - len({(i, i) for i in range(n)} | {((i + 1) % n, i) for i in range(n)})


def arc_room(n: int) -> int:
    """Arcs that still fit beside the random digraph generator's cycle."""
    return n * (n - 1) - len({(i, (i + 1) % n) for i in range(n)})


def reach(nv: int, arcs, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for a, b in arcs:
            if a == x and b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def strongly_connected(nv: int, arcs) -> bool:
    if nv <= 1:
        return True
    if reach(nv, arcs, 0) != set(range(nv)):
        return False
    return reach(nv, [(b, a) for a, b in arcs], 0) == set(range(nv))


def perfect_matchings(n: int, pairs) -> list[tuple[int, ...]]:
    """Every perfect matching as a permutation ``mate[u]``."""
    present = set(pairs)
    return [p for p in permutations(range(n)) if all((u, p[u]) in present for u in range(n))]


def aux_arcs(n: int, pairs, mate) -> list[tuple[int, int]]:
    return [(u, n + v) for u, v in pairs] + [(n + mate[u], u) for u in range(n)]


def dm_irreducible_all_matchings(n: int, pairs) -> bool:
    """True when a perfect matching exists and every one of them gives a
    strongly connected auxiliary graph."""
    pms = perfect_matchings(n, pairs)
    return bool(pms) and all(strongly_connected(2 * n, aux_arcs(n, pairs, pm)) for pm in pms)


def dm_irreducible_some_matching(n: int, pairs) -> bool:
    pms = perfect_matchings(n, pairs)
    return bool(pms) and strongly_connected(2 * n, aux_arcs(n, pairs, pms[0]))


def brute_min_dmiss(G: BipartiteGraph) -> int:
    pairs = [(u, v) for u, v, _ in G.edges]
    best = None
    for size in range(G.m + 1):
        for ids in combinations(range(G.m), size):
            sub = [pairs[e] for e in ids]
            if dm_irreducible_some_matching(G.n, sub):
                w = sum(G.edges[e][2] for e in ids)
                best = w if best is None else min(best, w)
    return best


def spanning_trees(nv: int, ends, m: int):
    """Edge-id subsets of size ``nv - 1`` forming spanning trees."""
    for ids in combinations(range(m), nv - 1):
        parent = list(range(nv))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for e in ids:
            a, b = (find(x) for x in ends[e])
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            yield ids


def degree_condition_trees(G: BipartiteGraph, root: int | None = None):
    """Spanning trees where one left vertex has degree 1 and all others 2."""
    ends = [(u, G.n + v) for u, v, _ in G.edges]
    for ids in spanning_trees(2 * G.n, ends, G.m):
        deg = [0] * G.n
        for e in ids:
            deg[G.edges[e][0]] += 1
        ones = [u for u in range(G.n) if deg[u] == 1]
        if len(ones) == 1 and all(d in (1, 2) for d in deg) and (root is None or ones[0] == root):
            yield ids, ones[0]


def brute_arborescence(D: Digraph, r: int, inward: bool) -> int | None:
    """Minimum arborescence weight by trying every parent assignment."""
    choices = []
    for x in range(D.n):
        if x == r:
            choices.append([None])
            continue
        arcs = [a for a in range(D.m) if (D.arcs[a][0] if inward else D.arcs[a][1]) == x]
        if not arcs:
            return None
        choices.append(arcs)
    best = None
    for pick in product(*choices):
        ids = [a for a in pick if a is not None]
        arcs = [(D.arcs[a][0], D.arcs[a][1]) for a in ids]
        if not inward:
            arcs = [(b, a) for a, b in arcs]
        # every vertex must reach r along the chosen arcs
        if all(r in reach(D.n, arcs, x) for x in range(D.n)):
            w = sum(D.arcs[a][2] for a in ids)
            best = w if best is None else min(best, w)
    return best


def random_bipartite(rng: random.Random, n: int, p: float, wmax: int) -> BipartiteGraph:
    edges = [(u, v, rng.randint(0, wmax)) for u in range(n) for v in range(n) if rng.random() < p]
    return BipartiteGraph(n, edges)


def random_digraph(rng: random.Random, n: int, p: float, wmax: int) -> Digraph:
    arcs = [(u, v, rng.randint(0, wmax)) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return Digraph(n, arcs)
