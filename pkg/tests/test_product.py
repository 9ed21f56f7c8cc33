import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_partite, random_pure_tripartite
from hrg.errors import CapacityExceeded, NotSetTransitiveWarning, PartCountMismatch, PointsNotStabilized
from hrg.groups import PermGroup
from hrg.multipartite import (
    PartiteGraph,
    complete_multipartite,
    degree_profile,
    enumerate_cliques,
    is_strongly_gallery_connected,
    link,
    type_regularity,
)
from hrg.product import (
    is_set_transitive,
    knight_symmetry_group,
    orbit_set_transitive_on,
    partite_product,
    relabel,
    setwise_stabilizer,
    symmetrize,
    symmetrized_profile_from_type_regular,
)


def block(G, p, r):
    A = np.zeros((G.sizes[p], G.sizes[r]), dtype=int)
    a, b = G.edges_between(p, r)
    A[a, b] = 1
    return A


@pytest.mark.parametrize("seed", range(8))
def test_product_blocks_are_kronecker_products(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    G1 = random_partite(rng, rng.integers(1, 4, size=n))
    G2 = random_partite(rng, rng.integers(1, 4, size=n))
    P = partite_product(G1, G2)
    assert P.sizes == tuple(a * b for a, b in zip(G1.sizes, G2.sizes))
    for p, r in itertools.combinations(range(n), 2):
        assert np.array_equal(block(P, p, r), np.kron(block(G1, p, r), block(G2, p, r)))


def test_product_labels_are_pairs():
    G1 = complete_multipartite([2, 1])
    G2 = complete_multipartite([1, 3])
    P = partite_product(G1, G2)
    assert P.labels[:2] == [(0, 0), (1, 0)]
    assert P.labels[2:] == [(2, 1), (2, 2), (2, 3)]


def test_product_part_mismatch():
    with pytest.raises(PartCountMismatch):
        partite_product(complete_multipartite([1, 1]), complete_multipartite([1, 1, 1]))


def test_relabel_identity_and_composition():
    rng = np.random.default_rng(3)
    G = random_partite(rng, (1, 2, 3))
    assert relabel(G, (0, 1, 2)) is G
    R = relabel(G, (2, 0, 1))
    assert R.sizes == (3, 1, 2)
    for p, r in itertools.combinations(range(3), 2):
        pi = (2, 0, 1)
        src = block(G, pi[p], pi[r]) if pi[p] < pi[r] else block(G, pi[r], pi[p]).T
        assert np.array_equal(block(R, p, r), src)
    back = relabel(R, (1, 2, 0))
    assert back.sizes == G.sizes and back.edges.tolist() == G.edges.tolist()


def test_relabel_rejects_non_permutation():
    with pytest.raises(ValueError):
        relabel(complete_multipartite([1, 1]), (0, 0))


@pytest.mark.parametrize("seed", range(30))
def test_link_of_product_is_product_of_links(seed):
    rng = np.random.default_rng(1000 + seed)
    G1 = random_pure_tripartite(rng)
    G2 = random_pure_tripartite(rng)
    P = partite_product(G1, G2)
    for size in range(0, 3):
        for f in enumerate_cliques(P, size):
            a = [P.labels[v][0] for v in f.vertices]
            b = [P.labels[v][1] for v in f.vertices]
            expect = partite_product(link(G1, a), link(G2, b))
            got = link(P, f)
            assert got.sizes == expect.sizes
            assert got.labels == expect.labels
            assert got.edges.tolist() == expect.edges.tolist()


def test_symmetrize_trivial_group_keeps_graph():
    G = complete_multipartite([1, 2, 2])
    S = symmetrize(G, PermGroup(3, []))
    assert S.sizes == G.sizes and S.edges.tolist() == G.edges.tolist()


def test_symmetrize_complete_over_d5():
    G = complete_multipartite([1, 2, 1, 2, 2])
    H = PermGroup.dihedral(5)
    S = symmetrize(G, H)
    assert S.sizes == (64,) * 5
    assert degree_profile(S) == (256, 192, 128, 64)
    with pytest.warns(NotSetTransitiveWarning):
        pred = symmetrized_profile_from_type_regular(type_regularity(G), H)
    assert pred == (256, 192, 128, 64)


def test_symmetrize_capacity():
    G = complete_multipartite([3, 3, 3])
    with pytest.raises(CapacityExceeded):
        symmetrize(G, PermGroup.symmetric(3), cap=100)


def test_symmetrize_identity_prediction():
    from hrg.cosetgeom import quotient_complex

    X = quotient_complex("affine", m=3, k=2).host
    pred = symmetrized_profile_from_type_regular(type_regularity(X), PermGroup(3, []))
    assert pred == degree_profile(X) == (6, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_symmetric_groups_are_set_transitive(n):
    assert is_set_transitive(PermGroup.symmetric(n))


def test_cyclic_and_dihedral_are_not_set_transitive():
    res = is_set_transitive(PermGroup.cyclic(5))
    assert not res and res.by_size == {1: True, 2: False, 3: False, 4: True}
    assert not is_set_transitive(PermGroup.dihedral(5))
    assert is_set_transitive(PermGroup.cyclic(3))


def test_agl15_is_set_transitive():
    H = PermGroup(5, ["(0 1 2 3 4)", "(1 2 4 3)"])
    assert H.order == 20
    assert is_set_transitive(H)


def brute_force_set_transitive(H):
    elems = H.elements().rows.tolist()
    n = H.degree
    for i in range(1, n):
        orbit = {frozenset(g[x] for x in range(i)) for g in elems}
        if len(orbit) != math.comb(n, i):
            return False
    return True


@pytest.mark.parametrize("gens", [
    ["(0 1 2 3 4)", "(0 1)(2 4)"],
    ["(0 1 2 3 4)", "(1 2 4 3)"],
    ["(0 1 2)", "(0 1)"],
    ["(0 1)(2 3)", "(0 2)(1 3)"],
    ["(0 1 2 3)", "(0 2)"],
])
def test_set_transitivity_matches_brute_force(gens):
    H = PermGroup(max(5 if "4" in "".join(gens) else 4, 3), gens)
    assert bool(is_set_transitive(H)) == brute_force_set_transitive(H)


def test_knight_group_and_point_set():
    H, pts = knight_symmetry_group()
    assert H.order == 200
    with pytest.raises(PointsNotStabilized):
        orbit_set_transitive_on(H, pts)
    S = setwise_stabilizer(H, pts)
    assert S.order == 20
    assert orbit_set_transitive_on(S, pts)


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(4)), st.integers(0, 1000))
def test_relabel_preserves_profile_multiset(pi, seed):
    rng = np.random.default_rng(seed)
    G = random_partite(rng, rng.integers(1, 4, size=4))
    R = relabel(G, pi)
    assert R.n_edges == G.n_edges
    assert sorted(R.sizes) == sorted(G.sizes)
    assert sorted(R.degrees().tolist()) == sorted(G.degrees().tolist())


def test_symmetrized_affine_base_over_s3():
    from hrg.cosetgeom import quotient_complex

    X = quotient_complex("affine", m=3, k=2).host
    S = symmetrize(X, PermGroup.symmetric(3))
    assert S.n_vertices == 12288
    assert degree_profile(S) == (1458, 64)
    assert is_strongly_gallery_connected(S)
