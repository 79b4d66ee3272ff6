"""Instance generators and weight-preserving reductions between problems.

Random generators draw from numpy's PCG64 bit generator seeded with the
given integer, so a seed fixes the output on every platform.
"""

from __future__ import annotations

import numpy as np

from .connectivity import scc
from .graphs import BipartiteGraph, Digraph, GraphError


def gen_fig1(ell: int) -> BipartiteGraph:
    """Tight family for the 2-approximation, weights scaled by ``ell``.

    Vertex pair ``i`` (0-based, ``i = 0..2*ell+2``) is left ``i`` and right
    ``i``.  Scaled weights: matching 0, small edges 1, unit edges ``ell``,
    heavy edges ``ell + 1``.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    top = 2 * ell + 2
    edges = [(i, i, 0) for i in range(top + 1)]
    for i in range(1, ell + 1):
        edges.append((2 * i - 1, 2 * i, ell + 1))
        edges.append((2 * i, 2 * i + 1, 1))
        edges.append((2 * i - 1, 2 * i + 1, ell))
    edges.append((0, 1, 1))
    edges.append((top - 1, top, 1))
    edges.append((top, 0, ell + 1))
    return BipartiteGraph(top + 1, edges)


def fig1_root(ell: int) -> int:
    """Left vertex (0-based) at which the algorithm attains the bad ratio."""
    return 2 * ell + 2


def fig1_hamiltonian(G: BipartiteGraph) -> list[int]:
    """Edge ids of the Hamiltonian cycle visiting the pairs in index order."""
    n = G.n
    pairs = [(i, i) for i in range(n)] + [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    return sorted(G.edge_id(u, v) for u, v in pairs)


def gen_random_dmi(n: int, extra_edges: int, wmax: int, seed: int) -> BipartiteGraph:
    """Alternating Hamiltonian cycle ``u1 v1 u2 v2 ... un vn u1`` plus
    ``extra_edges`` distinct random edges; weights uniform on ``0..wmax``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    base = {(i, i) for i in range(n)} | {((i + 1) % n, i) for i in range(n)}
    free = sorted({(u, v) for u in range(n) for v in range(n)} - base)
    if extra_edges > len(free):
        raise ValueError(f"at most {len(free)} extra edges fit")
    picks = rng.choice(len(free), size=extra_edges, replace=False) if extra_edges else []
    pairs = sorted(base | {free[int(i)] for i in picks})
    weights = rng.integers(0, wmax, size=len(pairs), endpoint=True)
    return BipartiteGraph(n, [(u, v, int(w)) for (u, v), w in zip(pairs, weights)])


def gen_random_ears(
    n: int, extra_edges: int, wmax: int, seed: int, long_prob: float = 0.3, hub: int | None = None
) -> BipartiteGraph:
    """DM-irreducible graph grown from a 4-cycle by random odd ears.

    Each ear joins a covered left vertex to a covered right vertex through
    fresh vertices; it has length 3 unless a coin with ``long_prob`` asks for
    a longer one.  With ``hub`` set, ear ends are drawn from the first
    ``hub`` pairs only.  Short ears on a small hub keep the graph far from
    Hamiltonian, which is what makes the unweighted problem nontrivial.
    ``extra_edges`` random chords are added at the end.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = {(0, 0), (1, 0), (1, 1), (0, 1)}
    covered = 2
    while covered < n:
        j = 1
        while covered + j < n and rng.random() < long_prob:
            j += 1
        pool = covered if hub is None else min(covered, hub)
        a = int(rng.integers(pool))
        b = int(rng.integers(pool))
        fresh = list(range(covered, covered + j))
        # a -> v_f0 - u_f0 -> v_f1 - ... - u_f(j-1) -> b
        prev_left = a
        for f in fresh:
            pairs.add((prev_left, f))
            pairs.add((f, f))
            prev_left = f
        pairs.add((prev_left, b))
        covered += j
    free = sorted({(u, v) for u in range(n) for v in range(n)} - pairs)
    extra = min(extra_edges, len(free))
    picks = rng.choice(len(free), size=extra, replace=False) if extra else []
    pairs |= {free[int(i)] for i in picks}
    ordered = sorted(pairs)
    weights = rng.integers(0, wmax, size=len(ordered), endpoint=True)
    return BipartiteGraph(n, [(u, v, int(w)) for (u, v), w in zip(ordered, weights)])


def gen_random_strong(n: int, extra_arcs: int, wmax: int, seed: int) -> Digraph:
    """Directed Hamiltonian cycle ``0 -> 1 -> ... -> n-1 -> 0`` plus random arcs."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    base = {(i, (i + 1) % n) for i in range(n)}
    free = sorted({(u, v) for u in range(n) for v in range(n) if u != v} - base)
    if extra_arcs > len(free):
        raise ValueError(f"at most {len(free)} extra arcs fit")
    picks = rng.choice(len(free), size=extra_arcs, replace=False) if extra_arcs else []
    pairs = sorted(base | {free[int(i)] for i in picks})
    weights = rng.integers(0, wmax, size=len(pairs), endpoint=True)
    return Digraph(n, [(u, v, int(w)) for (u, v), w in zip(pairs, weights)])


def reduce_matching_to_sbstr(G: BipartiteGraph) -> tuple[BipartiteGraph, int]:
    """Perfect matching instance as a rooted strongly balanced tree instance.

    Adds left vertex ``n`` (the root) and right vertex ``n``, joins the new
    right vertex to every left vertex at weight 0, and raises every original
    weight by ``B = 1 + total weight``.  The optimum minus ``n * B`` is the
    minimum perfect matching weight.
    """
    B = 1 + G.total_weight()
    n = G.n
    edges = [(u, v, w + B) for u, v, w in G.edges] + [(u, n, 0) for u in range(n + 1)]
    return BipartiteGraph(n + 1, edges), n


def reduction_offset(G: BipartiteGraph) -> int:
    return 1 + G.total_weight()


def reduce_arborescence_to_sbstr(D: Digraph, r: int) -> tuple[BipartiteGraph, int]:
    """In-arborescence instance as a rooted strongly balanced tree instance.

    Vertex ``x`` becomes left ``x`` and right ``x`` joined at weight 0; arc
    ``(u, v)`` becomes edge (left ``u``, right ``v``) with weight raised by
    ``B``.  The optimum minus ``(n - 1) * B`` is the minimum in-arborescence
    weight at ``r``.
    """
    reach = _reaches(D, r)
    if not all(reach):
        missing = [v for v in range(D.n) if not reach[v]]
        raise GraphError(f"vertices {missing} cannot reach the root")
    B = 1 + sum(w for _, _, w in D.arcs)
    edges = [(x, x, 0) for x in range(D.n)] + [(u, v, w + B) for u, v, w in D.arcs]
    return BipartiteGraph(D.n, edges), r


def _reaches(D: Digraph, r: int) -> list[bool]:
    seen = [False] * D.n
    seen[r] = True
    stack = [r]
    while stack:
        x = stack.pop()
        for a in D.in_arcs(x):
            y = D.arcs[a][0]
            if not seen[y]:
                seen[y] = True
                stack.append(y)
    return seen


def reduce_scss_to_dmiss(D: Digraph) -> BipartiteGraph:
    """Split every vertex into a left and right copy joined at weight 0; arc
    ``(u, v)`` becomes edge (left ``u``, right ``v``) with its weight."""
    comps = scc(D)
    if len(comps) > 1:
        raise GraphError(f"digraph is not strongly connected ({len(comps)} components)")
    edges = [(x, x, 0) for x in range(D.n)] + [(u, v, w) for u, v, w in D.arcs]
    return BipartiteGraph(D.n, edges)


def arcs_from_split_edges(D: Digraph, G: BipartiteGraph, ids) -> list[int]:
    """Arc ids of ``D`` corresponding to non-split edges among ``ids``."""
    index = {(u, v): i for i, (u, v, _) in enumerate(D.arcs)}
    out = []
    for e in ids:
        u, v, _ = G.edges[e]
        if u != v:
            out.append(index[(u, v)])
    return sorted(out)
