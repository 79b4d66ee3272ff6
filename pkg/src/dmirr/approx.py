"""Approximation drivers for minimum-weight strongly connected and
DM-irreducible spanning subgraphs."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any

from .arborescence import min_in_arborescence, min_out_arborescence
from .connectivity import is_dm_irreducible, scc
from .graphs import BipartiteGraph, Digraph, EdgeSet, GraphError, Matching, arcs_to_edges, build_auxiliary
from .matching import min_weight_perfect_matching
from .matroid import solve_sbstr


class NotDMIrreducible(ValueError):
    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__(f"graph is not DM-irreducible: {certificate.reason}")


class NotStronglyConnected(ValueError):
    def __init__(self, components: list[list[int]]):
        self.components = components
        super().__init__(f"digraph is not strongly connected ({len(components)} components)")


@dataclass
class SolveReport:
    algorithm: str
    solution: EdgeSet
    certificates: dict[str, Any] = field(default_factory=dict)
    runtime_ms: float = 0.0

    @property
    def weight(self) -> int:
        return self.solution.weight

    @property
    def edges(self) -> tuple[int, ...]:
        return self.solution.ids


def weight_wM(G: BipartiteGraph, M: Matching, arc: tuple[int, int]) -> int:
    """Weight of an arc of ``G_M`` (vertices numbered left ``0..n-1``, right
    ``n..2n-1``): zero when the underlying edge is matched, its weight otherwise."""
    tail, head = arc
    n = G.n
    if 0 <= tail < n <= head < 2 * n:
        e = G.edge_id(tail, head - n)
        if e is not None:
            return 0 if e in M else G.edges[e][2]
    elif 0 <= head < n <= tail < 2 * n:
        e = G.edge_id(head, tail - n)
        if e is not None and e in M:
            return 0
    raise GraphError(f"arc {arc} does not belong to the auxiliary graph")


def _wM_digraph(G: BipartiteGraph, M: Matching) -> Digraph:
    aux = build_auxiliary(G, M)
    matched = set(M.ids)
    return aux.with_weights([0 if o.edge in matched else G.edges[o.edge][2] for o in aux.origin])


def _require_dm_irreducible(G: BipartiteGraph) -> None:
    cert = is_dm_irreducible(G)
    if not cert:
        raise NotDMIrreducible(cert)


def _arc_pairs(D: Digraph, ids) -> list[tuple[int, int]]:
    return sorted((D.arcs[a][0], D.arcs[a][1]) for a in ids)


def scss_2approx(D: Digraph, root: int = 0) -> SolveReport:
    """Union of a minimum in-arborescence and a minimum out-arborescence at ``root``."""
    start = time.perf_counter()
    comps = scc(D)
    if len(comps) > 1:
        raise NotStronglyConnected(comps)
    a_out = min_out_arborescence(D, root)
    a_in = min_in_arborescence(D, root)
    sol = EdgeSet(D, tuple(sorted(set(a_out.ids) | set(a_in.ids))))
    certs = {
        "root": root,
        "out_arborescence": _arc_pairs(D, a_out.ids),
        "in_arborescence": _arc_pairs(D, a_in.ids),
        "weight_out": a_out.weight,
        "weight_in": a_in.weight,
    }
    return SolveReport("scss-2approx", sol, certs, (time.perf_counter() - start) * 1e3)


def dmiss_3approx(G: BipartiteGraph) -> SolveReport:
    """Minimum-weight perfect matching plus minimum in- and out-arborescences
    of the auxiliary graph under matching-free weights."""
    start = time.perf_counter()
    _require_dm_irreducible(G)
    M = min_weight_perfect_matching(G)
    if G.n == 1:
        return SolveReport("dmiss-3approx", EdgeSet(G, M.ids), {"root": 0, "matching": list(M.ids)},
                           (time.perf_counter() - start) * 1e3)
    root = min(G.edges[e][:2] for e in M.ids)[0]
    D = _wM_digraph(G, M)
    a_in = min_in_arborescence(D, root)
    a_out = min_out_arborescence(D, root)
    ids = set(M.ids) | set(arcs_to_edges(D, a_in.ids)) | set(arcs_to_edges(D, a_out.ids))
    certs = {
        "root": root,
        "matching": list(M.ids),
        "in_arborescence": _arc_pairs(D, a_in.ids),
        "out_arborescence": _arc_pairs(D, a_out.ids),
        "weight_matching": M.weight,
        "weight_wM_in": a_in.weight,
        "weight_wM_out": a_out.weight,
    }
    return SolveReport("dmiss-3approx", EdgeSet(G, tuple(sorted(ids))), certs,
                       (time.perf_counter() - start) * 1e3)


def dmiss_2approx(G: BipartiteGraph, root: int = 0) -> SolveReport:
    """Minimum strongly balanced spanning tree rooted at ``root`` joined with a
    minimum out-arborescence of the auxiliary graph of its matching.

    The reported weight is that of the union; it never exceeds
    ``weight_tree + weight_wM_out`` (both are kept in the certificates) and is
    smaller when the arborescence reuses tree edges.
    """
    start = time.perf_counter()
    if not 0 <= root < G.n:
        raise GraphError(f"root u{root + 1} is not a left vertex")
    _require_dm_irreducible(G)
    if G.n == 1:
        sol = EdgeSet(G, tuple(range(G.m)))
        certs = {"root": 0, "tree": list(sol.ids), "matching": list(sol.ids), "out_arborescence": [],
                 "weight_tree": sol.weight, "weight_wM_out": 0}
        return SolveReport("dmiss-2approx", sol, certs, (time.perf_counter() - start) * 1e3)
    T = solve_sbstr(G, root, check_irreducible=False)
    D = _wM_digraph(G, T.matching)
    a_out = min_out_arborescence(D, root)
    ids = set(T.tree.ids) | set(arcs_to_edges(D, a_out.ids))
    certs = {
        "root": root,
        "tree": list(T.tree.ids),
        "matching": list(T.matching.ids),
        "out_arborescence": _arc_pairs(D, a_out.ids),
        "weight_tree": T.weight,
        "weight_wM_out": a_out.weight,
    }
    return SolveReport("dmiss-2approx", EdgeSet(G, tuple(sorted(ids))), certs,
                       (time.perf_counter() - start) * 1e3)
