import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmirr.graphs import BipartiteGraph
from dmirr.instances import gen_fig1, gen_random_dmi
from dmirr.matching import NoPerfectMatching, hall_violator, max_matching, min_weight_perfect_matching

from helpers import c4, perfect_matchings, random_bipartite, room


def brute_max_matching(G):
    pairs = [(u, v) for u, v, _ in G.edges]
    for size in range(G.n, 0, -1):
        for ids in combinations(range(G.m), size):
            if len({pairs[e][0] for e in ids}) == size and len({pairs[e][1] for e in ids}) == size:
                return size
    return 0


def max_hall_deficiency(G):
    best = 0
    for size in range(1, G.n + 1):
        for xs in combinations(range(G.n), size):
            nb = {v for u in xs for v, _ in G.left_adj(u)}
            best = max(best, size - len(nb))
    return best


def test_small_examples():
    assert len(max_matching(c4())) == 2
    star = BipartiteGraph(3, [(0, 0, 1), (0, 1, 1), (0, 2, 1)])
    assert len(max_matching(star)) == 1


@pytest.mark.parametrize("seed", range(50))
def test_max_matching_matches_brute_force(seed):
    rng = random.Random(seed)
    G = random_bipartite(rng, rng.randint(1, 6), rng.uniform(0.2, 0.7), 5)
    M = max_matching(G)
    assert len(M) == brute_max_matching(G)


@pytest.mark.parametrize("seed", range(60))
def test_matching_size_is_n_minus_deficiency(seed):
    rng = random.Random(1000 + seed)
    G = random_bipartite(rng, rng.randint(1, 5), rng.uniform(0.2, 0.6), 1)
    assert len(max_matching(G)) == G.n - max_hall_deficiency(G)


@pytest.mark.parametrize("seed", range(30))
def test_hall_violator_certifies(seed):
    rng = random.Random(2000 + seed)
    G = random_bipartite(rng, rng.randint(2, 6), 0.3, 1)
    cert = hall_violator(G)
    if len(max_matching(G)) == G.n:
        assert cert is None
    else:
        left, right = cert
        assert set(right) == {v for u in left for v, _ in G.left_adj(u)}
        assert len(right) < len(left)


def test_min_weight_perfect_matching_examples():
    M = min_weight_perfect_matching(c4((0, 1, 1, 0)))
    assert M.ids == (0, 3) and M.weight == 0
    for ell in (1, 2, 5):
        G = gen_fig1(ell)
        M = min_weight_perfect_matching(G)
        assert M.weight == 0 and len(M) == 2 * ell + 3
        assert all(u == v for u, v in M.pairs())


def test_no_perfect_matching_raises():
    G = BipartiteGraph(2, [(0, 0, 1), (1, 0, 1)])
    with pytest.raises(NoPerfectMatching) as info:
        min_weight_perfect_matching(G)
    assert len(info.value.violator) > len(info.value.neighbourhood)


@pytest.mark.parametrize("seed", range(50))
def test_min_weight_matches_permutation_enumeration(seed):
    n = random.Random(seed).randint(1, 5)
    G = gen_random_dmi(n, min(seed % 6, room(n)), 10, seed)
    pairs = {(u, v): w for u, v, w in G.edges}
    best = min(sum(pairs[(u, p[u])] for u in range(G.n)) for p in perfect_matchings(G.n, pairs))
    assert min_weight_perfect_matching(G).weight == best


@given(st.integers(0, 10**6), st.integers(1, 5), st.integers(1, 7))
def test_order_and_scaling_invariance(seed, n, scale):
    G = gen_random_dmi(n, min(seed % 5, room(n)), 10, seed)
    M = min_weight_perfect_matching(G)
    rng = random.Random(seed)
    shuffled = list(G.edges)
    rng.shuffle(shuffled)
    H = BipartiteGraph(n, shuffled)
    MH = min_weight_perfect_matching(H)
    assert MH.weight == M.weight
    # ties follow edge ids, so the canonical order gives back the same edges
    canon = min_weight_perfect_matching(BipartiteGraph(n, sorted(shuffled)))
    assert sorted(canon.pairs()) == sorted(min_weight_perfect_matching(BipartiteGraph(n, sorted(G.edges))).pairs())
    S = G.with_weights([w * scale for _, _, w in G.edges])
    MS = min_weight_perfect_matching(S)
    assert MS.weight == scale * M.weight
    assert MS.ids == M.ids
