import random
from itertools import combinations

import pytest

from dmirr import fpt
from dmirr.ears import long_ear_maximal_decomposition
from dmirr.fpt import (
    ConsistencyError,
    PairGraph,
    ResourceLimit,
    build_pair_graph,
    deficiency,
    exhaustive_dmiss_search,
    find_double_matching,
    fpt_unweighted_dmiss,
    split_Z,
)
from dmirr.graphs import BipartiteGraph
from dmirr.instances import gen_random_ears
from dmirr.oracle import exact_min_dmiss, exact_unweighted_dmiss_decision

from helpers import c4, complete_bip, cycle_bip, dm_irreducible_some_matching

# a z-pair with one cheap neighbour shared with another z-pair: deleting the
# shared y-pair early loses the only 3-edge attachment of the outer side
SHARED_RULE_TRAP = BipartiteGraph(6, [(u, v, 1) for u, v in (
    (0, 0), (0, 1), (0, 4), (1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5),
    (2, 0), (2, 2), (3, 0), (3, 3), (4, 0), (4, 4), (5, 0), (5, 5),
)])


def unit(G):
    return G.with_weights([1] * G.m)


def random_pair_graph(rng, nz, ny):
    adj = [sorted(rng.sample(range(ny), rng.randint(1, ny))) for _ in range(nz)]
    return PairGraph(0, [(j, j) for j in range(ny)], [(i, i) for i in range(nz)], adj)


def naive_pair_graph(G, X, Y):
    n = G.n
    inside = {}
    for u, v, _ in G.edges:
        if u in Y and n + v in Y:
            inside[u] = n + v
    out = []
    for zp in sorted(x for x in X if x < n):
        for zm in sorted(x for x in X if x >= n):
            nb = [yp for yp in sorted(inside) if G.has_edge(zp, inside[yp] - n) and G.has_edge(yp, zm - n)]
            if nb:
                out.append(((zp, zm), [(yp, inside[yp]) for yp in nb]))
    return out


def test_pair_graph_examples():
    d = long_ear_maximal_decomposition(cycle_bip(3))
    P = build_pair_graph(cycle_bip(3), d.X, d.Y)
    assert P.z_pairs == [] and P.y_pairs == []
    G = BipartiteGraph(3, [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1), (1, 2, 1), (2, 2, 1), (2, 0, 1)])
    d = long_ear_maximal_decomposition(G)
    P = build_pair_graph(G, d.X, d.Y)
    assert P.y_pairs == [(2, 5)] and P.z_pairs == [(1, 3)] and P.adj == [[0]]


def test_pair_graph_needs_matching_inside_y():
    with pytest.raises(ConsistencyError):
        build_pair_graph(c4(), [], [0, 1, 2, 3])


@pytest.mark.parametrize("seed", range(40))
def test_pair_graph_matches_naive_builder(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    G = gen_random_ears(n, rng.randint(0, 5), 1, seed, long_prob=0.2, hub=rng.choice([None, 1, 2]))
    d = long_ear_maximal_decomposition(G)
    P = build_pair_graph(G, d.X, d.Y)
    got = [(z, [P.y_pairs[j] for j in nb]) for z, nb in zip(P.z_pairs, P.adj)]
    assert got == naive_pair_graph(G, set(d.X), set(d.Y))


def test_split_examples():
    two = PairGraph(0, [(0, 0), (1, 1)], [(0, 0)], [[0, 1]])
    assert split_Z(two) == ([], [0])
    one = PairGraph(0, [(0, 0)], [(0, 0)], [[0]])
    assert split_Z(one) == ([0], [])
    assert one.y_out == [0] and one.y_in == []
    with pytest.raises(ValueError):
        split_Z(one, rule="other")


def largest_violators(P):
    zs = range(len(P.z_pairs))
    for size in range(len(P.z_pairs), 0, -1):
        hits = [list(S) for S in combinations(zs, size) if deficiency(P, S) > 0]
        if hits:
            return hits
    return [[]]


def doubled_hall_holds(P, zs, ys):
    return all(
        len(P.neighbourhood(S) & set(ys)) >= 2 * len(S)
        for size in range(1, len(zs) + 1)
        for S in combinations(zs, size)
    )


@pytest.mark.parametrize("seed", range(150))
def test_split_is_largest_violator(seed):
    rng = random.Random(seed)
    P = random_pair_graph(rng, rng.randint(1, 4), rng.randint(1, 6))
    z_out, z_in = split_Z(P)
    assert largest_violators(P) == [z_out]
    if z_out:
        assert deficiency(P, z_out) > 0
    assert sorted(z_out + z_in) == list(range(len(P.z_pairs)))
    assert not set(P.y_in) & P.neighbourhood(z_out)
    assert doubled_hall_holds(P, z_in, P.y_in)
    M = find_double_matching(P)
    assert len(M) == 2 * len(z_in) and len({y for _, y in M}) == len(M)
    assert all(y in P.adj[z] and y in P.y_in for z, y in M)
    assert set(P.y_free) == set(P.y_in) - {y for _, y in M}


@pytest.mark.parametrize("seed", range(150))
def test_greedy_extension_is_maximal(seed, monkeypatch):
    monkeypatch.setattr(fpt, "EXHAUSTIVE_EXTENSION_LIMIT", 0)
    rng = random.Random(seed)
    P = random_pair_graph(rng, rng.randint(1, 5), rng.randint(1, 7))
    z_out, z_in = split_Z(P)
    if z_out:
        assert deficiency(P, z_out) > 0
    for size in range(1, len(z_in) + 1):
        for extra in combinations(z_in, size):
            assert deficiency(P, z_out + list(extra)) <= 0
    assert doubled_hall_holds(P, z_in, P.y_in)
    find_double_matching(P)


def test_double_matching_examples():
    P = PairGraph(0, [(j, j) for j in range(4)], [(0, 0), (1, 1)], [[0, 1, 2], [1, 2, 3]])
    split_Z(P)
    M = find_double_matching(P)
    assert len(M) == 4 and P.y_free == []
    bad = PairGraph(0, [(0, 0)], [(0, 0)], [[0]])
    bad.z_in, bad.y_in = [0], [0]
    with pytest.raises(ConsistencyError):
        find_double_matching(bad)


def test_exhaustive_search_examples():
    assert exhaustive_dmiss_search(c4(), 4)[0] == 4
    size, ids = exhaustive_dmiss_search(complete_bip(3), 7)
    assert size == 6 and len(ids) == 6
    assert exhaustive_dmiss_search(complete_bip(3), 5) is None
    assert exhaustive_dmiss_search(BipartiteGraph(2, [(0, 0, 1), (1, 1, 1)]), 9) is None
    with pytest.raises(ResourceLimit):
        exhaustive_dmiss_search(complete_bip(4), 10, node_budget=3)


@pytest.mark.parametrize("seed", range(30))
def test_exhaustive_search_matches_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    G = unit(gen_random_ears(n, rng.randint(0, 4), 1, seed, hub=rng.choice([None, 1])))
    size, ids = exhaustive_dmiss_search(G, G.m)
    assert size == exact_min_dmiss(G).weight == len(ids)


def test_env_node_budget(monkeypatch):
    monkeypatch.setenv("DMIRR_NODE_BUDGET", "2")
    assert fpt.node_budget_from_env() == 2
    monkeypatch.delenv("DMIRR_NODE_BUDGET")
    assert fpt.node_budget_from_env() == fpt.DEFAULT_NODE_BUDGET


def test_fpt_examples():
    assert fpt_unweighted_dmiss(c4(), 0).answer == "yes"
    res = fpt_unweighted_dmiss(cycle_bip(3), 1)
    assert res.answer == "yes" and len(res.witness.ids) == 6
    assert fpt_unweighted_dmiss(complete_bip(3), 1).answer == "yes"
    with pytest.raises(ValueError):
        fpt_unweighted_dmiss(c4(), 1)
    with pytest.raises(ValueError):
        fpt_unweighted_dmiss(BipartiteGraph(2, [(0, 0, 1), (1, 1, 1)]), 0)
    with pytest.raises(ValueError):
        fpt_unweighted_dmiss(BipartiteGraph(1, [(0, 0, 1)]), 0)


def test_shared_rule_counterexample():
    G = SHARED_RULE_TRAP
    assert exact_min_dmiss(G).weight == 14
    assert exact_unweighted_dmiss_decision(G, 2)
    assert fpt_unweighted_dmiss(G, 2, rule="shared").answer == "no"
    res = fpt_unweighted_dmiss(G, 2)
    assert res.answer == "yes" and len(res.witness.ids) <= 14


def test_resource_limit_reported():
    res = fpt_unweighted_dmiss(SHARED_RULE_TRAP, 2, node_budget=1)
    assert res.answer == "resource-limit" and res.witness is None


@pytest.mark.parametrize("seed", range(80))
def test_agrees_with_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    while True:
        G = unit(gen_random_ears(n, rng.randint(0, 4), 1, seed, long_prob=rng.random(), hub=rng.choice([None, 1, 2])))
        if G.m <= 24:
            break
        seed += 1000
    for k in range(min(2, n - 2) + 1):
        res = fpt_unweighted_dmiss(G, k)
        assert (res.answer == "yes") == exact_unweighted_dmiss_decision(G, k)
        st = res.kernel_stats
        if st["branch"] != "decomposition":
            assert st["|X|"] <= 4 * k
            assert st["|Y'|"] % 2 == 0
        if res.answer == "yes":
            ids = res.witness.ids
            assert len(ids) <= 3 * n - 2 - k
            assert dm_irreducible_some_matching(n, [G.edges[e][:2] for e in ids])
