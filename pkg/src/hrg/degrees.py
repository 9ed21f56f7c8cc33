"""Closed-form degree profiles for the elementary-matrix and affine families.

All arithmetic is exact (Python integers).  Two routes are provided for each
family: the displayed closed forms, and a generic route that sums subgroup
indices ``[K_J : K_{J+i}]`` over clique types, computed from subgroup orders.
Matrix size is ``m = n + 1`` throughout, so an ``n``-dimensional complex uses
``n + 1`` subgroups.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Sequence

from .errors import InvalidParams, UnsupportedFamily, UnsupportedParams

__all__ = [
    "arc",
    "f_exponent",
    "g",
    "g_closed_form",
    "inner_exponent",
    "el_subgroup_pattern",
    "el_subgroup_log_order",
    "affine_subgroup_order",
    "system_profile",
    "orbit_product_profile",
    "el_profile",
    "affine_profile",
    "FAMILIES",
    "degree_profile_for",
]


def arc(a: int, b: int, m: int) -> list[int]:
    """Indices strictly between ``a`` and ``b`` going up cyclically mod ``m``.

    ``arc(a, a, m)`` is every index except ``a``.
    """
    out = []
    x = (a + 1) % m
    while x != b % m:
        out.append(x)
        x = (x + 1) % m
    return out


def el_subgroup_pattern(m: int, tau: Sequence[int]) -> dict:
    """Entries ``(k, j)`` allowed in ``K_tau`` and their maximal ``t``-degree.

    Entry ``(k, j)``, ``k != j``, may be non-zero iff the cyclic run
    ``k, k+1, ..., j-1`` lies inside one arc between consecutive elements of
    ``tau``; its degree bound is ``(j - k) mod m``.
    """
    tau = sorted(set(int(t) % m for t in tau))
    if not tau or len(tau) > m:
        raise InvalidParams("tau must be a non-empty subset of 0..m-1")
    arcs = [set(arc(a, b, m)) for a, b in zip(tau, tau[1:] + tau[:1])]
    if len(tau) == 1:
        arcs = [set(arc(tau[0], tau[0], m))]
    out = {}
    for k in range(m):
        for j in range(m):
            if k == j:
                continue
            run = {(k + i) % m for i in range((j - k) % m)}
            if any(run <= A for A in arcs):
                out[(k, j)] = (j - k) % m
    return out


def el_subgroup_log_order(m: int, tau: Sequence[int], s: int | None = None) -> int:
    """``log_q |K_tau|``; with ``s`` the degrees are truncated below ``t^s``."""
    pat = el_subgroup_pattern(m, tau)
    return sum((deg if s is None else min(deg, s - 1)) + 1 for deg in pat.values())


def f_exponent(a: int, b: int, m: int) -> int:
    """Sum of ``1 + ((j - k) mod m)`` over pairs whose run lies in ``arc(a, b)``."""
    A = set(arc(a, b, m))
    total = 0
    for k in range(m):
        for j in range(m):
            if k != j and {(k + i) % m for i in range((j - k) % m)} <= A:
                total += 1 + (j - k) % m
    return total


def g(mm: int) -> int:
    """``sum_{i<mm} (i + 2)(mm - i)``: the exponent contributed by an arc of length ``mm``."""
    return sum((i + 2) * (mm - i) for i in range(mm))


def g_closed_form(mm: int) -> Fraction:
    return Fraction(mm ** 3 + 6 * mm ** 2 + 5 * mm, 6)


def inner_exponent(mm: int) -> tuple[int, Fraction]:
    """Both sides of ``mm g(mm) - 2 sum_{j=1}^{mm} g(j-1) = (mm^4+6mm^3+11mm^2+6mm)/12``."""
    lhs = mm * g(mm) - 2 * sum(g(j - 1) for j in range(1, mm + 1))
    return lhs, Fraction(mm ** 4 + 6 * mm ** 3 + 11 * mm ** 2 + 6 * mm, 12)


def affine_subgroup_order(m: int, tau: Sequence[int]) -> int:
    """``|K_tau|`` in the affine system: a product of symmetric groups on the gaps."""
    tau = sorted(set(int(t) % m for t in tau))
    if len(tau) == 1:
        return math.factorial(m)
    gaps = [(b - a) % m for a, b in zip(tau, tau[1:] + tau[:1])]
    return math.prod(math.factorial(x) for x in gaps)


# generic route --------------------------------------------------------------

def _type_degree(order: Callable, J, i, I) -> int:
    """``d_J(i) = [K_J : K_{J+i}]`` with ``K_{}`` the whole group (``order(()) is None``)."""
    return order(tuple(J)) // order(tuple(J) + (i,))


def system_profile(order: Callable[[tuple], int], subgroups: Sequence[Sequence[int]]) -> tuple:
    """Predicted profile of a product system from subgroup orders.

    ``subgroups[i]`` lists, for every factor, which standard index the type
    ``i`` subgroup uses; ``order(factor, indices)`` returns the order of the
    intersection of those standard subgroups.  The link of a clique of type
    ``J`` has ``sum_{i not in J} prod_f [K^f_J : K^f_{J+i}]`` vertices; the
    profile is returned if that count depends only on ``|J|``.
    """
    n1 = len(subgroups)
    nf = len(subgroups[0])
    prof = []
    for size in range(1, n1):
        vals = set()
        for J in itertools.combinations(range(n1), size):
            total = 0
            for i in range(n1):
                if i in J:
                    continue
                term = 1
                for f in range(nf):
                    a = tuple(subgroups[j][f] for j in J)
                    term *= order(f, a) // order(f, a + (subgroups[i][f],))
                total += term
            vals.add(total)
        if len(vals) != 1:
            raise UnsupportedParams(f"link sizes of {size}-cliques depend on type: {sorted(vals)}")
        prof.append(vals.pop())
    return tuple(prof)


def orbit_product_profile(d: dict, perms: Sequence[Sequence[int]], n_types: int) -> tuple:
    """Profile of a symmetrisation from type degrees ``d[J][i]`` of the base graph.

    The link of a type-``J`` clique has ``sum_{i not in J} prod_pi d[pi(J)][pi(i)]``
    vertices.
    """
    prof = []
    for size in range(1, n_types):
        vals = set()
        for J in itertools.combinations(range(n_types), size):
            total = 0
            for i in range(n_types):
                if i in J:
                    continue
                total += math.prod(d[frozenset(p[j] for j in J)][p[i]] for p in perms)
            vals.add(total)
        if len(vals) != 1:
            raise UnsupportedParams(f"link sizes of {size}-cliques depend on type: {sorted(vals)}")
        prof.append(vals.pop())
    return tuple(prof)


def _el_order(q: int, m: int, s: int | None = None):
    def order(_f, idx):
        return q ** el_subgroup_log_order(m, idx, s)
    return order


def _affine_order(m: int):
    def order(_f, idx):
        return affine_subgroup_order(m, idx)
    return order


def _type_degrees(order, n1: int) -> dict:
    d = {}
    for size in range(1, n1):
        for J in itertools.combinations(range(n1), size):
            d[frozenset(J)] = {
                i: order(0, J) // order(0, J + (i,)) for i in range(n1) if i not in J
            }
    return d


# closed forms ---------------------------------------------------------------

def el_profile(family: str, n: int = 2, q: int = 2, *, route: str = "closed") -> tuple:
    """Elementary-matrix family profiles.

    ``el-base`` (n = 2): ``(2 q^5, q^2)``; ``el-adhoc`` (n = 4):
    ``(4 q^35, 3 q^14, 2 q^7, q^4)``; ``el-symmetrized`` (any n).  With
    ``route="generic"`` the value is recomputed from subgroup orders.
    """
    if q < 2:
        raise InvalidParams("q >= 2 required")
    if family == "el-base":
        if n != 2:
            raise UnsupportedParams("the base elementary family is hyper-regular only for n = 2")
        if route == "generic":
            return system_profile(_el_order(q, 3), [(i,) for i in range(3)])
        return (2 * q ** 5, q ** 2)
    if family == "el-adhoc":
        if n != 4:
            raise UnsupportedParams("the ad hoc elementary system is defined for n = 4")
        if route == "generic":
            return system_profile(_el_order(q, 5), [(i, (2 * i) % 5) for i in range(5)])
        g1, g2, g3, g4 = g(1), g(2), g(3), g(4)
        return (
            4 * q ** ((g4 - g3) + (g4 - g1 - g2)),
            3 * q ** ((g3 - g2) + (g2 - g1)),
            2 * q ** ((g2 - g1) + g1),
            q ** (g1 + g1),
        )
    if family == "el-symmetrized":
        if n < 1:
            raise InvalidParams("n >= 1 required")
        if route == "generic":
            perms = list(itertools.permutations(range(n + 1)))
            return orbit_product_profile(_type_degrees(_el_order(q, n + 1), n + 1), perms, n + 1)
        fact = math.factorial(n + 1)
        out = [n * q ** (fact * (n ** 3 + 6 * n ** 2 + 11 * n + 6) // 12)]
        for k in range(1, n):
            inner = sum(
                math.comb(n - mm - 1, k - 1) * Fraction(mm ** 4 + 6 * mm ** 3 + 11 * mm ** 2 + 6 * mm, 12)
                for mm in range(1, n - k + 1)
            )
            expo = Fraction(fact, math.comb(n, k + 1)) * inner
            if expo.denominator != 1:
                raise ArithmeticError(f"non-integral exponent {expo}")
            out.append((n - k) * q ** int(expo))
        return tuple(out)
    raise UnsupportedFamily(family)


def affine_profile(family: str, n: int = 2, r: int = 1, *, route: str = "closed") -> tuple:
    """Affine-permutation family profiles.

    ``affine-base`` (n = 2): ``(6, 2)``; ``affine-3r``:
    ``(2 C(3r,r), C(2r,r))``; ``affine-adhoc`` (n = 4, parameter ``r``);
    ``affine-symmetrized`` (any n).
    """
    C = math.comb
    if family == "affine-base":
        if n != 2:
            raise UnsupportedParams("the base affine family is hyper-regular only for n = 2")
        if route == "generic":
            return system_profile(_affine_order(3), [(i,) for i in range(3)])
        return (6, 2)
    if family == "affine-3r":
        if route == "generic":
            return system_profile(_affine_order(3 * r), [(0,), (r,), (2 * r,)])
        return (2 * C(3 * r, r), C(2 * r, r))
    if family == "affine-adhoc":
        if route == "generic":
            return system_profile(_affine_order(5 * r), [(i * r, ((2 * i) % 5) * r) for i in range(5)])
        return (
            4 * C(5 * r, r) * C(5 * r, 2 * r),
            3 * C(4 * r, r) * C(3 * r, 2 * r),
            2 * C(3 * r, r) * C(2 * r, r),
            C(2 * r, r) ** 2,
        )
    if family == "affine-symmetrized":
        if n < 1:
            raise InvalidParams("n >= 1 required")
        if route == "generic":
            perms = list(itertools.permutations(range(n + 1)))
            return orbit_product_profile(_type_degrees(_affine_order(n + 1), n + 1), perms, n + 1)
        fact = math.factorial(n + 1)
        def block(mm):
            return math.prod(C(mm + 1, j) for j in range(1, mm + 1))
        base = block(n)
        e0 = Fraction(fact, n)
        out = [n * base ** int(e0)]
        for k in range(1, n):
            inner = math.prod(block(mm) ** C(n - mm - 1, k - 1) for mm in range(1, n - k + 1))
            e = Fraction(fact, C(n, k + 1))
            if e.denominator != 1:
                raise ArithmeticError(f"non-integral exponent {e}")
            out.append((n - k) * inner ** int(e))
        return tuple(out)
    raise UnsupportedFamily(family)


FAMILIES = (
    "el-base", "el-symmetrized", "el-adhoc",
    "affine-base", "affine-3r", "affine-adhoc", "affine-symmetrized",
)


def degree_profile_for(family: str, n: int = 2, q: int = 2, r: int = 1, route: str = "closed") -> tuple:
    if family.startswith("el-"):
        return el_profile(family, n=n, q=q, route=route)
    if family.startswith("affine-"):
        return affine_profile(family, n=n, r=r, route=route)
    raise UnsupportedFamily(family)
