import numpy as np
import pytest

from hrg.cosetgeom import quotient_complex
from hrg.elcosets import PatternReducer, _inverse_table, _rref_mod, el_coset_complex_bfs
from hrg.errors import CapacityExceeded
from hrg.groups import el_group, standard_subgroups


def test_rref_mod_small():
    q = 3
    A = np.array([[[1, 2, 0], [2, 1, 0], [0, 0, 1]]])
    red, piv = _rref_mod(A, q, _inverse_table(q))
    # rows 0 and 1 are dependent mod 3
    assert piv[0].tolist() == [0, 2, -1]
    assert red[0, 2].tolist() == [0, 0, 0]


def test_reducer_is_constant_on_cosets():
    G = el_group(3, 2, 2)
    subs = standard_subgroups(G)
    rng = np.random.default_rng(0)
    E = G.elements().rows
    for i in range(3):
        red = PatternReducer(G, (i,))
        g = E[rng.integers(len(E), size=20)]
        base = red.key(g)
        for k in subs[i].rows[rng.integers(len(subs[i]), size=5)]:
            assert np.array_equal(red.key(G.mul_rows(g, k[None])), base)
        assert len(np.unique(red.key(E))) == 672


def test_reducer_output_lies_in_the_coset():
    G = el_group(3, 3, 2)
    red = PatternReducer(G, (1,))
    K = standard_subgroups(G, [1])[0]
    rng = np.random.default_rng(1)
    gens = G.generators[rng.integers(len(G.generators), size=(8, 6))]
    g = np.repeat(G.identity[None], 8, axis=0)
    for col in range(6):
        g = G.mul_rows(g, gens[:, col])
    c = red.canonical(g)
    # g^-1 c must be in K
    assert K.contains_rows(G.mul_rows(G.inv_rows(g), c)).all()


def test_bfs_matches_enumeration():
    B = el_coset_complex_bfs(3, 2, 2)
    X = quotient_complex("el", m=3, q=2, s=2)
    assert B.sizes == X.host.sizes
    # relate the two vertex sets through a common canonical form
    G = X.group
    maps = []
    for i in range(3):
        red = PatternReducer(G, (i,))
        kb = red.key(np.array([B.labels[v] for v in B.part(i)]))
        kx = red.key(np.array([X.host.labels[v] for v in X.host.part(i)]))
        order = {int(k): a for a, k in enumerate(kx.tolist())}
        maps.append([X.host.offsets[i] + order[int(k)] for k in kb.tolist()])
    perm = np.concatenate(maps)
    assert sorted(perm.tolist()) == list(range(X.host.n_vertices))
    mapped = np.sort(perm[B.edges], axis=1)
    assert {tuple(e) for e in mapped.tolist()} == {tuple(e) for e in X.host.edges.tolist()}


def test_bfs_capacity():
    with pytest.raises(CapacityExceeded):
        el_coset_complex_bfs(3, 2, 2, cap=100)
