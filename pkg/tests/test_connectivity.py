import random
from itertools import combinations

import pytest

from dmirr.connectivity import dm_irreducible_masks, is_dm_irreducible, is_strongly_connected, scc
from dmirr.ears import (
    INITIAL,
    PATH,
    Ear,
    EarDecomposition,
    ear_decomposition,
    find_long_ear,
    long_ear_maximal_decomposition,
    odd_proper_ear_decomposition,
    validate_long_ear_order,
    validate_odd_proper,
)
from dmirr.graphs import BipartiteGraph, Digraph
from dmirr.instances import gen_fig1, gen_random_dmi, gen_random_ears, gen_random_strong

from helpers import (
    aux_arcs,
    c4,
    complete_bip,
    cycle_bip,
    dm_irreducible_all_matchings,
    perfect_matchings,
    random_bipartite,
    random_digraph,
    reach,
    room,
    strongly_connected,
)


def brute_scc(D):
    arcs = [a[:2] for a in D.arcs]
    fwd = [reach(D.n, arcs, x) for x in range(D.n)]
    classes = {frozenset(y for y in fwd[x] if x in fwd[y]) for x in range(D.n)}
    return sorted(sorted(c) for c in classes)


def test_scc_examples():
    assert scc(Digraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])) == [[0, 1, 2]]
    path = Digraph(3, [(0, 1, 1), (1, 2, 1)])
    assert sorted(scc(path)) == [[0], [1], [2]]
    assert is_strongly_connected(Digraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]))
    assert not is_strongly_connected(path)


@pytest.mark.parametrize("seed", range(100))
def test_scc_matches_mutual_reachability(seed):
    rng = random.Random(seed)
    D = random_digraph(rng, rng.randint(1, 7), rng.uniform(0.1, 0.5), 3)
    assert sorted(sorted(c) for c in scc(D)) == brute_scc(D)


def test_dm_irreducible_examples():
    cert = is_dm_irreducible(c4())
    assert cert and cert.matching.ids == (0, 3)
    two = BipartiteGraph(2, [(0, 0, 1), (1, 1, 1)])
    cert = is_dm_irreducible(two)
    assert not cert and len(cert.components) == 2
    assert cert.reason == "auxiliary graph not strongly connected"
    cert = is_dm_irreducible(BipartiteGraph(2, [(0, 0, 1), (1, 0, 1)]))
    assert not cert and cert.reason == "no perfect matching"
    assert is_dm_irreducible(BipartiteGraph(1, [(0, 0, 4)]))
    assert is_dm_irreducible(gen_fig1(1))


def test_k33_subsets_agree_with_all_matchings_statement():
    K = complete_bip(3)
    pairs = [(u, v) for u, v, _ in K.edges]
    checked = 0
    for size in range(3, 10):
        for ids in combinations(range(9), size):
            sub = [pairs[e] for e in ids]
            G = BipartiteGraph(3, [(u, v, 1) for u, v in sub])
            if not any(len({p[0] for p in c}) == 3 == len({p[1] for p in c}) for c in combinations(sub, 3)):
                continue
            checked += 1
            assert bool(is_dm_irreducible(G)) == dm_irreducible_all_matchings(3, sub)
    assert checked > 200


@pytest.mark.parametrize("seed", range(150))
def test_seeding_matching_does_not_matter(seed):
    # statement 2 and 3 of the irreducibility lemma, n <= 4, every matching
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    G = random_bipartite(rng, n, rng.uniform(0.4, 0.9), 1)
    pairs = [(u, v) for u, v, _ in G.edges]
    verdicts = {strongly_connected(2 * n, aux_arcs(n, pairs, pm)) for pm in perfect_matchings(n, pairs)}
    assert len(verdicts) <= 1
    if verdicts:
        assert bool(is_dm_irreducible(G)) == verdicts.pop()


@pytest.mark.parametrize("seed", range(80))
def test_mask_check_agrees(seed):
    rng = random.Random(500 + seed)
    n = rng.randint(1, 6)
    G = random_bipartite(rng, n, rng.uniform(0.3, 0.8), 1)
    nbr = [0] * n
    for u, v, _ in G.edges:
        nbr[u] |= 1 << v
    assert dm_irreducible_masks(n, nbr) == bool(is_dm_irreducible(G))


def test_digraph_ear_decomposition_covers_everything():
    for seed in range(20):
        D = gen_random_strong(5, 4, 3, seed)
        dec = ear_decomposition(D)
        assert sorted(a for ear in dec.ears for a in ear.edges) == list(range(D.m))


def test_odd_proper_small_examples():
    dec = odd_proper_ear_decomposition(c4())
    assert dec.f == 0 and dec.ears[0].kind == INITIAL and dec.ears[0].length == 4
    dec = odd_proper_ear_decomposition(cycle_bip(3))
    assert dec.f == 0 and dec.ears[0].length == 6
    K = complete_bip(3)
    dec = odd_proper_ear_decomposition(K)
    assert validate_odd_proper(K, dec) == (True, None)
    # m - 2n + 1 ears in total, the initial cycle included
    assert sum(e.length for e in dec.ears) == 9 and len(dec.ears) == 9 - 6 + 1


def test_validator_rejects_short_initial_cycle():
    G = c4()
    bad = EarDecomposition((Ear(INITIAL, (0, 2), (0, 1)),))
    assert validate_odd_proper(G, bad) == (False, "initial cycle too short")


def _instances(count, seed0=0):
    for seed in range(seed0, seed0 + count):
        rng = random.Random(seed)
        n = rng.randint(2, 6)
        if seed % 2:
            yield gen_random_ears(n, rng.randint(0, 3), 5, seed, long_prob=0.4, hub=rng.choice([None, 1, 2]))
        else:
            yield gen_random_dmi(n, min(rng.randint(0, 6), room(n)), 5, seed)


@pytest.mark.parametrize("G", list(_instances(60)), ids=lambda G: f"n{G.n}m{G.m}")
def test_every_prefix_is_dm_irreducible(G):
    dec = odd_proper_ear_decomposition(G)
    assert validate_odd_proper(G, dec) == (True, None)
    for i in range(dec.f + 1):
        verts = dec.prefix_vertices(i)
        ids = dec.prefix_edges(i)
        left = sorted(x for x in verts if x < G.n)
        right = sorted(x - G.n for x in verts if x >= G.n)
        assert len(left) == len(right)
        H, emap, lmap, rmap = G.induced(left, right)
        keep = [j for j, e in enumerate(emap) if e in set(ids)]
        sub, _ = H.subgraph(keep)
        assert is_dm_irreducible(sub)


def test_fuzzed_decompositions_rejected():
    rng = random.Random(3)
    rejected = 0
    for G in _instances(40, 100):
        dec = odd_proper_ear_decomposition(G)
        if dec.f < 2:
            continue
        ears = list(dec.ears)
        i, j = rng.sample(range(1, len(ears)), 2)
        ears[i], ears[j] = ears[j], ears[i]
        shuffled = EarDecomposition(tuple(ears))
        ok, _ = validate_odd_proper(G, shuffled)
        # swapping is harmless only when neither ear needs the other's vertices
        covered = set(ears[0].vertices)
        expect = True
        for ear in ears[1:]:
            if ear.vertices[0] not in covered or ear.vertices[-1] not in covered:
                expect = False
                break
            covered.update(ear.vertices)
        assert ok == expect
        rejected += not ok
    assert rejected > 0


@pytest.mark.parametrize("G", list(_instances(60, 200)), ids=lambda G: f"n{G.n}m{G.m}")
def test_long_ear_maximal_properties(G):
    dec = long_ear_maximal_decomposition(G)
    n = G.n
    assert validate_odd_proper(G, dec) == (True, None)
    assert validate_long_ear_order(dec) == (True, None)
    X, Y = dec.X, dec.Y
    assert len(X) == 2 * n - 2 * (dec.r - dec.s)
    assert len(X) >= 4 * dec.s + 4
    # edges inside Y form a perfect matching of Y
    inside = [G.endpoints(e) for e in range(G.m) if set(G.endpoints(e)) <= Y]
    assert sorted(x for e in inside for x in e) == sorted(Y)
    # no further long ear can be attached to the long prefix
    assert find_long_ear(G, set(dec.prefix_vertices(dec.s))) is None
    # edge count of the nontrivial prefix
    assert len(dec.prefix_edges(dec.r)) == (3 * n - 2) - (len(X) // 2 - dec.s - 2)


def test_long_ear_c6():
    dec = long_ear_maximal_decomposition(cycle_bip(3))
    assert (dec.s, dec.r, dec.f) == (0, 0, 0)
    assert len(dec.X) == 6 and not dec.Y
    assert len(dec.prefix_edges(0)) == 6 == (3 * 3 - 2) - (6 // 2 - 0 - 2)


def test_long_ear_c4_with_pendant_path():
    # C4 on pairs 0,1 plus a length-3 ear through pair 2
    G = BipartiteGraph(3, [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1), (0, 2, 1), (2, 2, 1), (2, 1, 1)])
    dec = long_ear_maximal_decomposition(G)
    assert dec.s in (0, 1)
    assert find_long_ear(G, set(dec.prefix_vertices(dec.s))) is None


def test_path_kind_constant():
    dec = odd_proper_ear_decomposition(complete_bip(3))
    assert all(e.kind == PATH for e in dec.ears[1:])
