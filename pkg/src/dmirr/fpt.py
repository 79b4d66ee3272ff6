"""Exact decision procedure for the unweighted problem: does a DM-irreducible
graph have a DM-irreducible spanning subgraph with at most ``3n - 2 - k``
edges?

The procedure decomposes the graph into ears with a maximal set of long
ears, answers yes directly when the decomposition itself is small enough,
and otherwise shrinks the graph by removing pairs of vertices whose optimal
attachment is forced, before a bounded exhaustive search.

Vertices are numbered as in the auxiliary digraph: left ``u`` is ``u``,
right ``v`` is ``n + v``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations

from .connectivity import dm_irreducible_masks, is_dm_irreducible
from .ears import long_ear_maximal_decomposition
from .graphs import BipartiteGraph, EdgeSet

DEFAULT_NODE_BUDGET = 10**7
EXHAUSTIVE_EXTENSION_LIMIT = 16


class ResourceLimit(RuntimeError):
    """The exhaustive search ran out of its node budget."""


class ConsistencyError(AssertionError):
    """A structural property guaranteed by the theory failed to hold."""


def node_budget_from_env() -> int:
    raw = os.environ.get("DMIRR_NODE_BUDGET")
    return int(raw) if raw else DEFAULT_NODE_BUDGET


@dataclass
class PairGraph:
    """Bipartite graph between X-pairs (``z_pairs``) and the matched pairs
    inside Y (``y_pairs``).

    ``adj[i]`` lists the y-pairs joined to z-pair ``i``: for ``z = (zp, zm)``
    and ``y = (yp, ym)`` both ``zp - ym`` and ``yp - zm`` are edges of G.
    The split fields are filled by :func:`split_Z` and
    :func:`find_double_matching`.
    """

    n: int
    y_pairs: list[tuple[int, int]]
    z_pairs: list[tuple[int, int]]
    adj: list[list[int]]
    z_out: list[int] = field(default_factory=list)
    z_in: list[int] = field(default_factory=list)
    y_out: list[int] = field(default_factory=list)
    y_in: list[int] = field(default_factory=list)
    double_matching: list[tuple[int, int]] = field(default_factory=list)
    y_free: list[int] = field(default_factory=list)
    removed: frozenset[int] = frozenset()

    def neighbourhood(self, zs) -> set[int]:
        out: set[int] = set()
        for z in zs:
            out.update(self.adj[z])
        return out


def build_pair_graph(G: BipartiteGraph, X, Y) -> PairGraph:
    """Pair graph of the split ``(X, Y)``; requires the edges inside Y to form a
    perfect matching of Y."""
    n = G.n
    Y = set(Y)
    X = set(X)
    inside: dict[int, list[int]] = {y: [] for y in Y}
    for u, v, _ in G.edges:
        if u in Y and n + v in Y:
            inside[u].append(n + v)
            inside[n + v].append(u)
    for y, nb in inside.items():
        if len(nb) != 1:
            raise ConsistencyError(f"vertex {y} has {len(nb)} neighbours inside Y")
    y_pairs = sorted((y, inside[y][0]) for y in Y if y < n)
    xp = sorted(x for x in X if x < n)
    xm = sorted(x for x in X if x >= n)
    z_pairs: list[tuple[int, int]] = []
    adj: list[list[int]] = []
    for zp in xp:
        for zm in xm:
            nbrs = [
                j
                for j, (yp, ym) in enumerate(y_pairs)
                if G.has_edge(zp, ym - n) and G.has_edge(yp, zm - n)
            ]
            if nbrs:
                z_pairs.append((zp, zm))
                adj.append(nbrs)
    return PairGraph(n, y_pairs, z_pairs, adj)


def _doubled_matching(
    P: PairGraph, zs: list[int], ys: set[int], copies: dict[int, int] | None = None
) -> dict[tuple[int, int], int]:
    """Maximum matching between copies of each z in ``zs`` (two unless
    ``copies`` says otherwise) and the y-pairs in ``ys``; maps ``(z, copy)``
    to its y.  Augments in index order, so the result is deterministic."""
    owner: dict[int, tuple[int, int]] = {}

    def augment(c: tuple[int, int], seen: set[int]) -> bool:
        for y in P.adj[c[0]]:
            if y in ys and y not in seen:
                seen.add(y)
                if y not in owner or augment(owner[y], seen):
                    owner[y] = c
                    return True
        return False

    for z in zs:
        for copy in range(2 if copies is None else copies.get(z, 2)):
            augment((z, copy), set())
    return {c: y for y, c in owner.items()}


def deficiency(P: PairGraph, zs) -> int:
    zs = list(zs)
    return 2 * len(zs) - len(P.neighbourhood(zs))


def _max_deficiency(
    P: PairGraph, zs: list[int], ys: set[int], copies: dict[int, int] | None = None
) -> tuple[int, list[int]]:
    """Maximum of ``copies(Z') - |N(Z') & ys|`` over ``Z'`` within ``zs`` and
    the largest set attaining it: everything not reachable by alternating
    paths from a y-pair left exposed by a maximum matching."""
    match = _doubled_matching(P, zs, ys, copies)
    total = sum(2 if copies is None else copies.get(z, 2) for z in zs)
    owner = {y: c for c, y in match.items()}
    zset = set(zs)
    y_adj: dict[int, list[int]] = {y: [] for y in ys}
    for z in zs:
        for y in P.adj[z]:
            if y in ys:
                y_adj[y].append(z)
    reached: set[int] = set()
    stack = [y for y in ys if y not in owner]
    seen = set(stack)
    while stack:
        y = stack.pop()
        for z in y_adj[y]:
            if z in reached:
                continue
            reached.add(z)
            for (z2, _), y2 in match.items():
                if z2 == z and y2 not in seen:
                    seen.add(y2)
                    stack.append(y2)
    return total - len(match), sorted(zset - reached)


def split_Z(P: PairGraph, rule: str = "exclusive") -> tuple[list[int], list[int]]:
    """Largest set of z-pairs whose neighbourhood is smaller than twice its size.

    The largest set of maximum deficiency is read off a maximum matching of
    the doubled graph.  Every violating set stays violating when that set is
    added to it, so the largest violator contains it; the remaining
    candidates are searched exhaustively when there are few of them, and
    otherwise extended greedily until no superset violates (each step asks,
    per candidate, for the best extension containing it).

    ``rule`` fixes which y-pairs count as outer.  ``"exclusive"`` (default)
    takes every neighbour of ``z_out``, so inner y-pairs touch inner z-pairs
    only; the doubled Hall condition on ``z_in`` still holds because no
    superset of ``z_out`` violates it.  ``"shared"`` keeps neighbours shared
    with ``z_in`` on the inner side; that variant can delete a y-pair whose
    only cheap attachment runs through ``z_out`` and then answer no wrongly.
    """
    if rule not in ("exclusive", "shared"):
        raise ValueError(f"unknown rule {rule!r}")
    zs = list(range(len(P.z_pairs)))
    ys = set(range(len(P.y_pairs)))
    best, core = _max_deficiency(P, zs, ys)
    z_out: list[int] = []
    if best > 0:
        z_out = core
        rest = [z for z in zs if z not in set(core)]
        if len(rest) <= EXHAUSTIVE_EXTENSION_LIMIT:
            for size in range(len(rest), 0, -1):
                hit = next(
                    (extra for extra in combinations(rest, size) if deficiency(P, core + list(extra)) > 0),
                    None,
                )
                if hit is not None:
                    z_out = sorted(core + list(hit))
                    break
        else:
            z_out = _extend_violator(P, core)
    z_in = [z for z in zs if z not in set(z_out)]
    P.z_out, P.z_in = z_out, z_in
    outer = P.neighbourhood(z_out)
    if rule == "shared":
        outer -= P.neighbourhood(z_in)
    P.y_out = sorted(outer)
    P.y_in = sorted(ys - set(P.y_out))
    return z_out, z_in


def _extend_violator(P: PairGraph, S: list[int]) -> list[int]:
    S = sorted(S)
    while True:
        rest = [z for z in range(len(P.z_pairs)) if z not in set(S)]
        free_y = set(range(len(P.y_pairs))) - P.neighbourhood(S)
        base = deficiency(P, S)
        big = len(free_y) + 1
        for z in rest:
            val, T = _max_deficiency(P, rest, free_y, {z: 2 + big})
            if base + val - big > 0:
                S = sorted(set(S) | set(T))
                break
        else:
            return S


def find_double_matching(P: PairGraph) -> list[tuple[int, int]]:
    """Two y-pairs for every z in ``z_in``, no y-pair used twice."""
    match = _doubled_matching(P, P.z_in, set(P.y_in))
    if len(match) != 2 * len(P.z_in):
        raise ConsistencyError("doubled Hall condition fails on the inner z-pairs")
    M = sorted((z, y) for (z, _), y in match.items())
    P.double_matching = M
    used = {y for _, y in M}
    P.y_free = [y for y in P.y_in if y not in used]
    P.removed = frozenset(v for j in P.y_free for v in P.y_pairs[j])
    return M


def exhaustive_dmiss_search(
    G: BipartiteGraph, budget: int, node_budget: int | None = None
) -> tuple[int, list[int]] | None:
    """Smallest DM-irreducible spanning subgraph with at most ``budget`` edges.

    Returns ``(size, edge ids)`` or ``None`` when none exists.  Depth-first
    deletion search: edges are deleted in increasing id order, and an edge
    whose deletion breaks DM-irreducibility is dropped from every
    descendant's candidates (adding edges never breaks the property).
    Raises :class:`ResourceLimit` after ``node_budget`` search nodes.
    """
    n = G.n
    if node_budget is None:
        node_budget = node_budget_from_env()
    floor = 2 * n if n > 1 else n
    if budget < floor:
        return None
    nbr = [0] * n
    for u, v, _ in G.edges:
        nbr[u] |= 1 << v
    if not dm_irreducible_masks(n, nbr):
        return None
    ends = [(u, v) for u, v, _ in G.edges]
    present = [True] * G.m
    best: list = [None, None]
    nodes = 0

    def go(size: int, cands: list[int]) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ResourceLimit(f"search exceeded {node_budget} nodes")
        if size <= budget and (best[0] is None or size < best[0]):
            best[0] = size
            best[1] = [e for e in range(G.m) if present[e]]
        valid = []
        for e in cands:
            u, v = ends[e]
            nbr[u] ^= 1 << v
            if dm_irreducible_masks(n, nbr):
                valid.append(e)
            nbr[u] ^= 1 << v
        limit = budget if best[0] is None else best[0] - 1
        if max(floor, size - len(valid)) > limit:
            return
        for i, e in enumerate(valid):
            u, v = ends[e]
            nbr[u] ^= 1 << v
            present[e] = False
            go(size - 1, valid[i + 1:])
            present[e] = True
            nbr[u] ^= 1 << v
            if best[0] == floor:
                return

    go(G.m, list(range(G.m)))
    if best[0] is None:
        return None
    return best[0], best[1]


@dataclass
class FPTResult:
    answer: str  # "yes", "no" or "resource-limit"
    witness: EdgeSet | None
    kernel_stats: dict[str, int | str]


def fpt_unweighted_dmiss(
    G: BipartiteGraph, k: int, node_budget: int | None = None, rule: str = "exclusive"
) -> FPTResult:
    """Decide whether ``G`` has a DM-irreducible spanning subgraph with at most
    ``3n - 2 - k`` edges.  ``rule`` is passed to :func:`split_Z`."""
    n = G.n
    if n < 2:
        raise ValueError("need at least two vertices per side")
    if not 0 <= k <= n - 2:
        raise ValueError(f"k must lie in [0, {n - 2}]")
    if not is_dm_irreducible(G):
        raise ValueError("graph is not DM-irreducible")
    target = 3 * n - 2 - k
    dec = long_ear_maximal_decomposition(G)
    s, r, X, Y = dec.s, dec.r, dec.X, dec.Y
    stats: dict[str, int | str] = {"s": s, "r": r, "|X|": len(X)}
    decomposition_edges = dec.prefix_edges(r)
    if len(decomposition_edges) != 2 * n + r or len(X) != 2 * n - 2 * (r - s):
        raise ConsistencyError("ear counts disagree with the decomposition")
    if k <= len(X) // 2 - s - 2:
        stats.update({"|Z_out|": 0, "|Z_in|": 0, "|Y'|": 0, "branch": "decomposition"})
        return FPTResult("yes", EdgeSet(G, tuple(decomposition_edges)), stats)
    if len(X) > 4 * k:
        raise ConsistencyError("|X| exceeds 4k after the early test")
    P = build_pair_graph(G, X, Y)
    split_Z(P, rule)
    find_double_matching(P)
    stats.update({"|Z_out|": len(P.z_out), "|Z_in|": len(P.z_in), "|Y'|": len(P.removed)})
    try:
        if not P.z_in:
            stats["branch"] = "whole-graph"
            found = exhaustive_dmiss_search(G, target, node_budget)
            if found is None:
                return FPTResult("no", None, stats)
            return FPTResult("yes", _validated(G, found[1], target), stats)
        stats["branch"] = "reduced-graph"
        keep_l = [u for u in range(n) if u not in P.removed]
        keep_r = [v for v in range(n) if n + v not in P.removed]
        H, emap, _, _ = G.induced(keep_l, keep_r)
        found = exhaustive_dmiss_search(H, target - 3 * len(P.y_free), node_budget)
    except ResourceLimit:
        return FPTResult("resource-limit", None, stats)
    if found is None:
        return FPTResult("no", None, stats)
    witness = {emap[e] for e in found[1]}
    for j in P.y_free:
        yp, ym = P.y_pairs[j]
        z = min(i for i, nb in enumerate(P.adj) if j in nb)
        zp, zm = P.z_pairs[z]
        witness.add(G.edge_id(zp, ym - n))
        witness.add(G.edge_id(yp, ym - n))
        witness.add(G.edge_id(yp, zm - n))
    return FPTResult("yes", _validated(G, witness, target), stats)


def _validated(G: BipartiteGraph, ids, target: int) -> EdgeSet:
    ids = sorted(ids)
    sub, _ = G.subgraph(ids)
    if len(ids) > target or not is_dm_irreducible(sub):
        raise ConsistencyError("reconstructed witness is not a valid solution")
    return EdgeSet(G, tuple(ids))
