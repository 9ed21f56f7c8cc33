import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hrg.degrees import el_subgroup_log_order, el_subgroup_pattern
from hrg.errors import InvalidParams, NotNormal, UnsupportedParams
from hrg.groups import (
    ElementSet,
    PermGroup,
    affine_group,
    canonical_reps,
    coset_labels,
    cosets,
    direct_product,
    el_group,
    generated_subgroup,
    knight_cycle_system,
    quotient_check,
    standard_subgroups,
    subgroup_closure,
)


def naive_matmul(A, B, q, s):
    """Product of matrices over F_q[t]/(t^s) given as (m, m, s) coefficient arrays."""
    m = A.shape[0]
    C = np.zeros_like(A)
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for a in range(s):
                    for b in range(s - a):
                        C[i, j, a + b] += A[i, k, a] * B[k, j, b]
    return C % q


@pytest.fixture(scope="module")
def el322():
    return el_group(3, 2, 2)


def test_el_order_matches_formula(el322):
    assert el322.order == el322.theoretical_order() == 43008


def test_el_small_orders():
    for m, q, s in [(2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1)]:
        G = el_group(m, q, s)
        assert G.order == G.theoretical_order()


def test_el_rejects_prime_powers():
    with pytest.raises(UnsupportedParams):
        el_group(3, 4, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 43007), st.integers(0, 43007))
def test_el_multiplication_matches_naive(i, j):
    G = el_group(3, 2, 2)
    E = G.elements().rows
    a, b = E[i], E[j]
    got = G.as_matrices(G.mul_rows(a[None], b[None]))[0]
    want = naive_matmul(G.as_matrices(a)[0], G.as_matrices(b)[0], 2, 2)
    assert np.array_equal(got, want)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5), st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2),
                                             st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=6))
def test_el_q3_multiplication_and_inverse(_, words):
    G = el_group(3, 3, 2)
    rows = []
    for i, j, c0, c1 in words:
        if i == j:
            j = (i + 1) % 3
        rows.append(G.elementary(i, j, [c0, c1]))
    g = rows[0][None]
    want = G.as_matrices(rows[0])[0]
    for r in rows[1:]:
        g = G.mul_rows(g, r[None])
        want = naive_matmul(want, G.as_matrices(r)[0], 3, 2)
    assert np.array_equal(G.as_matrices(g)[0], want)
    assert np.array_equal(G.mul_rows(g, G.inv_rows(g)), G.identity[None])


def in_pattern(G, rows, tau):
    pat = el_subgroup_pattern(G.m, tau)
    M = G.as_matrices(rows)
    I = G.as_matrices(G.identity)[0]
    N = (M - I) % G.q
    for k in range(G.m):
        for j in range(G.m):
            allowed = pat.get((k, j))
            for e in range(G.s):
                if allowed is None or e > allowed:
                    if np.any(N[:, k, j, e] != 0):
                        return False
    return True


@pytest.mark.parametrize("s,expected", [(2, 64), (3, 128)])
def test_standard_subgroup_orders(s, expected):
    G = el_group(3, 2, s)
    for i, K in enumerate(standard_subgroups(G)):
        assert len(K) == expected == 2 ** el_subgroup_log_order(3, (i,), s)


@pytest.mark.parametrize("s", [2, 3])
def test_pattern_lemma_for_standard_subgroups(s):
    """Closure and the entry pattern agree: inclusion plus equal size."""
    G = el_group(3, 2, s)
    subs = standard_subgroups(G)
    for tau in [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]:
        K = subs[tau[0]]
        for t in tau[1:]:
            K = K.intersection(subs[t])
        assert in_pattern(G, K.rows, tau)
        assert len(K) == 2 ** el_subgroup_log_order(3, tau, s)


def test_pattern_untruncated_needs_larger_s():
    # the degree-2 entries only survive once t^2 is non-zero
    assert el_subgroup_log_order(3, (0,)) == 7
    assert el_subgroup_log_order(3, (0,), s=2) == 6
    assert el_subgroup_log_order(3, (0,), s=3) == 7


def test_affine_orders():
    for m, k in [(2, 1), (3, 1), (3, 2), (3, 3), (4, 2), (5, 2)]:
        A = affine_group(m, k)
        assert A.order == A.theoretical_order() == k ** (m - 1) * math.factorial(m)


def test_affine_coxeter_relations():
    A = affine_group(4, 3)
    s = [A.reflection(i) for i in range(4)]
    e = A.identity

    def power(g, n):
        out = e[None]
        for _ in range(n):
            out = A.mul_rows(out, g[None])
        return out[0]

    for i in range(4):
        assert np.array_equal(power(s[i], 2), e)
        for j in range(4):
            if i == j:
                continue
            st_ = A.mul_rows(s[i][None], s[j][None])[0]
            braid = 3 if (i - j) % 4 in (1, 3) else 2
            assert np.array_equal(power(st_, braid), e)


def test_affine_standard_subgroups():
    A = affine_group(3, 2)
    subs = standard_subgroups(A)
    assert [len(K) for K in subs] == [6, 6, 6]
    assert len(subs[0].intersection(subs[1])) == 2
    assert len(generated_subgroup(A, subs[0], subs[1])) == 24


def test_perm_group_orders_and_convention():
    assert PermGroup.symmetric(5).order == 120
    assert PermGroup.alternating(5).order == 60
    assert PermGroup.dihedral(5).order == 10
    assert PermGroup.cyclic(7).order == 7
    G = PermGroup(3, [])
    a, b = (1, 0, 2), (0, 2, 1)
    # a * b applies b first: 0 -> 0 -> 1
    assert G.mul(a, b)[0] == 1
    assert G.inv((1, 2, 0)) == (2, 0, 1)


def test_perm_group_cycle_parsing():
    H = PermGroup(5, ["(0 1 2 3 4)", "(0 1)(2 4)"])
    assert H.order == 10
    with pytest.raises(InvalidParams):
        PermGroup(3, [[0, 0, 1]])


def test_closure_cap():
    from hrg.errors import CapacityExceeded

    with pytest.raises(CapacityExceeded):
        PermGroup.symmetric(6).closure(PermGroup.symmetric(6).generators, cap=100)


def test_cosets_partition_group():
    A = affine_group(3, 2)
    K = standard_subgroups(A)[0]
    labels, reps = coset_labels(A, K)
    assert len(reps) == 4
    assert np.bincount(labels).tolist() == [6, 6, 6, 6]
    assert [c.rep for c in cosets(A, K)] == [tuple(r) for r in reps.tolist()]
    # every element of a coset has the same canonical representative
    keys = canonical_reps(A, A.elements().rows, K)
    assert np.array_equal(A.key(reps)[labels], keys)


def test_canonical_rep_is_lexicographic_minimum():
    A = affine_group(3, 2)
    K = standard_subgroups(A)[1]
    for g in A.elements().rows[:8]:
        coset = A.mul_rows(g[None], K.rows)
        best = min(tuple(r) for r in coset.tolist())
        key = canonical_reps(A, g[None], K)[0]
        assert tuple(A.unkey(np.array([key]))[0]) == best


def test_direct_product_pairs():
    A = affine_group(3, 2)
    G = direct_product(A, A)
    subs = standard_subgroups(A)
    P = G.pair(subs[0], subs[1])
    assert len(P) == 36
    assert G.order == 576


def test_knight_system_shapes():
    G, subs = knight_cycle_system()
    assert len(subs) == 5
    assert all(len(K) == 120 * 120 for K in subs)


def _kernel(m, k_big, k_small):
    A = affine_group(m, k_big)
    E = A.elements().rows
    ident = np.arange(1, m + 1) % (m * k_small)
    keep = E[np.all(E % (m * k_small) == ident, axis=1)]
    return A, ElementSet(A, keep)


def test_quotient_check_kernel_is_normal_and_avoids_subgroups():
    A, N = _kernel(3, 4, 2)
    assert len(N) * affine_group(3, 2).order == A.order
    assert quotient_check(A, N, standard_subgroups(A))


def test_quotient_check_rejects_non_normal():
    A = affine_group(3, 2)
    K = standard_subgroups(A)[0]
    with pytest.raises(NotNormal):
        quotient_check(A, K, standard_subgroups(A))


def test_subgroup_closure_matches_brute_force():
    G = PermGroup.symmetric(4)
    H = subgroup_closure(G, [[1, 2, 3, 0]])
    assert len(H) == 4
    seen = {tuple(range(4))}
    frontier = [tuple(range(4))]
    while frontier:
        x = frontier.pop()
        y = G.mul(x, (1, 2, 3, 0))
        if y not in seen:
            seen.add(y)
            frontier.append(y)
    assert {tuple(r) for r in H.rows.tolist()} == seen


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(range(5)), min_size=1, max_size=3))
def test_perm_closure_is_a_group(gens):
    G = PermGroup(5, [list(g) for g in gens])
    E = G.elements()
    assert 120 % len(E) == 0
    rows = E.rows
    idx = np.random.default_rng(0).integers(0, len(rows), size=(20, 2))
    prods = G.mul_rows(rows[idx[:, 0]], rows[idx[:, 1]])
    assert E.contains_rows(prods).all()
    assert E.contains_rows(G.inv_rows(rows)).all()
