import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_partite, random_pure_tripartite
from hrg import multipartite as mp
from hrg.errors import NonClique, NotHyperRegular
from hrg.multipartite import (
    DegreeProfile,
    Face,
    PartiteGraph,
    complete_multipartite,
    degree_profile,
    enumerate_cliques,
    is_connected,
    is_pure,
    is_strongly_gallery_connected,
    link,
    type_regularity,
)


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n_vertices))
    H.add_edges_from(G.edges.tolist())
    return H


def nx_cliques(G, size):
    return sorted(tuple(sorted(c)) for c in nx.enumerate_all_cliques(to_nx(G)) if len(c) == size)


def nx_common(G, clique):
    H = to_nx(G)
    common = set(H.nodes) - set(clique)
    for v in clique:
        common &= set(H[v])
    return sorted(common)


def test_construction_normalises_edges():
    G = PartiteGraph((2, 2), [(3, 0), (0, 3), (1, 2)])
    assert G.edges.tolist() == [[0, 3], [1, 2]]
    assert G.n_edges == 2
    assert G.neighbors(0).tolist() == [3]
    assert G.has_edge(3, 0) and not G.has_edge(0, 2)


def test_construction_rejects_intra_part_edges():
    with pytest.raises(ValueError):
        PartiteGraph((2, 2), [(0, 1)])
    with pytest.raises(ValueError):
        PartiteGraph((2, 2), [(0, 9)])


def test_degree_profile_type_checks():
    assert DegreeProfile([6, 2]) == (6, 2)
    with pytest.raises(ValueError):
        DegreeProfile([2, 2])
    with pytest.raises(ValueError):
        DegreeProfile([3, 0])


def test_complete_multipartite_profile():
    # K_{2,2,2}: the octahedron
    G = complete_multipartite([2, 2, 2])
    assert G.n_edges == 12
    assert degree_profile(G) == (4, 2)
    assert is_pure(G)
    assert is_strongly_gallery_connected(G)


def test_single_triangle_links():
    G = complete_multipartite([1, 1, 1])
    assert degree_profile(G) == (2, 1)
    L = link(G, [0])
    assert L.sizes == (1, 1) and L.n_edges == 1
    assert L.types == (1, 2)
    assert L.origin.tolist() == [1, 2]


def test_link_of_non_clique_raises():
    G = PartiteGraph((1, 1, 1), [(0, 1), (1, 2)])
    with pytest.raises(NonClique):
        link(G, [0, 2])


def test_link_keeps_types_and_origin_through_iteration():
    G = complete_multipartite([2, 2, 2, 2])
    L1 = link(G, [0])
    L2 = link(L1, [0])
    assert L1.types == (1, 2, 3)
    assert L2.types == (2, 3)
    assert L2.origin.tolist() == link(G, [0, 2]).origin.tolist()


def test_not_hyper_regular_witness():
    # a path 0-1-2 across three parts plus an extra pendant edge
    G = PartiteGraph((1, 1, 2), [(0, 1), (1, 2), (0, 2), (1, 3)])
    with pytest.raises(NotHyperRegular) as exc:
        degree_profile(G)
    (fa, sa), (fb, sb) = exc.value.witness
    assert isinstance(fa, Face) and sa != sb


@pytest.mark.parametrize("seed", range(10))
def test_cliques_match_networkx(seed):
    rng = np.random.default_rng(seed)
    G = random_partite(rng, rng.integers(1, 5, size=4))
    for size in range(1, 5):
        ours = [f.vertices for f in enumerate_cliques(G, size)]
        assert ours == nx_cliques(G, size)


@pytest.mark.parametrize("seed", range(10))
def test_links_match_networkx(seed):
    rng = np.random.default_rng(100 + seed)
    G = random_partite(rng, rng.integers(1, 5, size=4))
    for size in range(0, 4):
        for f in enumerate_cliques(G, size):
            L = link(G, f)
            assert L.origin.tolist() == nx_common(G, f.vertices)
            expect = to_nx(G).subgraph(L.origin.tolist())
            got = {frozenset((int(L.origin[u]), int(L.origin[v]))) for u, v in L.edges.tolist()}
            assert got == {frozenset(e) for e in expect.edges}


@pytest.mark.parametrize("seed", range(10))
def test_connectivity_matches_networkx(seed):
    rng = np.random.default_rng(200 + seed)
    G = random_partite(rng, rng.integers(1, 5, size=3), p_edge=0.25)
    assert is_connected(G) == nx.is_connected(to_nx(G))


def test_purity():
    assert is_pure(complete_multipartite([2, 3, 1]))
    # an edge between parts 0 and 1 with no common neighbour in part 2
    G = PartiteGraph((2, 1, 1), [(0, 2), (0, 3), (2, 3), (1, 2)])
    assert not is_pure(G)


def test_gallery_failure_has_witness():
    # two triangles sharing only the vertex 0: its link is two disjoint edges
    G = PartiteGraph((1, 2, 2), [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (2, 4)])
    res = is_strongly_gallery_connected(G)
    assert not res
    assert res.witness.vertices == (0,)


def test_type_regularity_of_complete_graph():
    G = complete_multipartite([1, 2, 3])
    tr = type_regularity(G)
    assert tr[frozenset()] == {0: 1, 1: 2, 2: 3}
    assert tr[frozenset({0})] == {1: 2, 2: 3}
    assert tr[frozenset({1, 2})] == {0: 1}


@pytest.mark.parametrize("sizes", [(3, 3, 3), (2, 4, 3)])
def test_sparse_profile_agrees_with_bitsets(sizes):
    G = complete_multipartite(sizes)
    if len(set(sizes)) == 1:
        assert mp._sparse_profile(G) == degree_profile(G)
    else:
        with pytest.raises(NotHyperRegular):
            mp._sparse_profile(G)
        with pytest.raises(NotHyperRegular):
            degree_profile(G)


def test_sparse_profile_on_lattice():
    from hrg.lattice import stair_graph

    G = stair_graph(3, 3)
    assert mp._sparse_profile(G) == degree_profile(G) == (6, 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=2, max_size=4))
def test_complete_multipartite_links_are_complete(sizes):
    G = complete_multipartite(sizes)
    for f in enumerate_cliques(G, 1):
        L = link(G, f)
        assert L.sizes == tuple(s for p, s in enumerate(sizes) if p != G.part_of[f.vertices[0]])
        assert L.n_edges == sum(a * b for a, b in itertools.combinations(L.sizes, 2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_pure_generator_is_pure(seed):
    G = random_pure_tripartite(np.random.default_rng(seed))
    assert is_pure(G)
