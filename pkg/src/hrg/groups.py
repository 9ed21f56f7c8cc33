"""Finite groups given by generators, with vectorised multiplication.

Every element is a fixed-width row of small non-negative integers.  Rows are
packed big-endian into ``int64`` keys, so comparing keys compares rows
lexicographically; the canonical representative of a coset is the row with
the smallest key.  Three concrete families are provided:

* permutations of ``0..d-1`` (:class:`PermGroup`),
* affine permutations of period ``m`` reduced modulo ``m*k``
  (:class:`AffineGroup`), stored as windows ``[w(1), ..., w(m)] mod mk``,
* elementary matrix groups over ``F_q[t]/(t^s)`` (:class:`ELGroup`), stored as
  coefficient arrays of shape ``(m, m, s)``.
"""
from __future__ import annotations

import itertools
import math
import os
import re
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapacityExceeded, InvalidParams, NotNormal, UnsupportedParams

__all__ = [
    "FiniteGroup",
    "ElementSet",
    "PermGroup",
    "AffineGroup",
    "ELGroup",
    "DirectProduct",
    "affine_group",
    "el_group",
    "direct_product",
    "standard_subgroups",
    "subgroup_closure",
    "generated_subgroup",
    "cosets",
    "coset_labels",
    "quotient_check",
    "knight_cycle_system",
    "DEFAULT_GROUP_CAP",
]

DEFAULT_GROUP_CAP = int(os.environ.get("HRG_GROUP_CAP", 4_000_000))


class FiniteGroup:
    """Base class; subclasses define ``width``, ``radix``, ``identity``,
    ``generators`` and ``_mul2d``."""

    name = "group"
    width: int
    radix: int

    def _setup(self, identity, generators):
        self.identity = np.asarray(identity, dtype=np.int64)
        self.generators = np.asarray(generators, dtype=np.int64).reshape(-1, self.width)
        self._check_key_range()
        self._elements = None
        self._index = None
        self._right_tables = {}

    def _check_key_range(self):
        self._intern = None
        if self.radix ** self.width >= 2 ** 62:
            # too wide to pack: number rows by first appearance instead, which
            # keeps equality tests exact but loses lexicographic key order
            self._intern = {}
            return
        self._powers = np.array(
            [self.radix ** (self.width - 1 - i) for i in range(self.width)], dtype=np.int64
        )

    # arithmetic ---------------------------------------------------------
    def _mul2d(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def mul_rows(self, a, b) -> np.ndarray:
        """Broadcasting product ``a * b`` over leading axes."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        shape = a.shape
        out = self._mul2d(a.reshape(-1, self.width), b.reshape(-1, self.width))
        return out.reshape(shape)

    def inv_rows(self, a) -> np.ndarray:
        """Inverses by repeated multiplication (``x^-1 = x^(ord x - 1)``)."""
        a = np.asarray(a, dtype=np.int64).reshape(-1, self.width)
        ident = self.key(self.identity)
        result = np.empty_like(a)
        prev = np.broadcast_to(self.identity, a.shape).copy()
        cur = a.copy()
        todo = np.arange(len(a))
        while len(todo):
            done = self.key(cur) == ident
            result[todo[done]] = prev[done]
            keep = ~done
            todo, prev, cur = todo[keep], cur[keep], self._mul2d(cur[keep], a[todo[keep]])
        return result

    def mul(self, a, b) -> tuple:
        return tuple(self.mul_rows(a, b).tolist())

    def inv(self, a) -> tuple:
        return tuple(self.inv_rows(a)[0].tolist())

    def key(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        if self._intern is None:
            return rows @ self._powers
        flat = rows.reshape(-1, self.width)
        table = self._intern
        out = np.fromiter(
            (table.setdefault(r.tobytes(), len(table)) for r in flat), np.int64, len(flat)
        )
        return out.reshape(rows.shape[:-1])

    def unkey(self, keys) -> np.ndarray:
        if self._intern is not None:
            raise UnsupportedParams(f"{self.name}: keys are not decodable")
        keys = np.asarray(keys, dtype=np.int64)
        return (keys[..., None] // self._powers) % self.radix

    # subgroups ----------------------------------------------------------
    def closure(self, gens, cap: int | None = None) -> "ElementSet":
        """Subgroup generated by ``gens``, built breadth first.

        Each breadth-first layer is sorted lexicographically, so the row
        order is canonical for a given generator list.
        """
        cap = DEFAULT_GROUP_CAP if cap is None else cap
        gens = np.asarray(gens, dtype=np.int64).reshape(-1, self.width)
        ident = self.identity[None, :]
        layers = [ident]
        known = self.key(ident)
        frontier = ident
        while len(frontier) and len(gens):
            cand = self.mul_rows(frontier[:, None, :], gens[None, :, :]).reshape(-1, self.width)
            keys, first = np.unique(self.key(cand), return_index=True)
            fresh = ~np.isin(keys, known, assume_unique=True)
            frontier = cand[first[fresh]]
            frontier = frontier[np.lexsort(frontier.T[::-1])]
            if len(frontier) == 0:
                break
            known = np.union1d(known, keys[fresh])
            if len(known) > cap:
                raise CapacityExceeded(f">{len(known)} elements", cap)
            layers.append(frontier)
        return ElementSet(self, np.concatenate(layers), generators=gens)

    def elements(self, cap: int | None = None) -> "ElementSet":
        if self._elements is None:
            self._elements = self.closure(self.generators, cap)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements())

    def index_of(self, rows) -> np.ndarray:
        """Positions of ``rows`` in ``elements()``; ``-1`` if absent."""
        els = self.elements()
        if self._index is None:
            self._index = np.argsort(els.keys, kind="stable")
        k = self.key(rows)
        sk = els.keys[self._index]
        pos = np.searchsorted(sk, k)
        pos = np.minimum(pos, len(sk) - 1)
        hit = sk[pos] == k
        return np.where(hit, self._index[pos], -1)

    def right_table(self, h) -> np.ndarray:
        """``t[i]`` = index of ``elements()[i] * h``."""
        h = np.asarray(h, dtype=np.int64)
        k = int(self.key(h))
        if k not in self._right_tables:
            rows = self.elements().rows
            self._right_tables[k] = self.index_of(self.mul_rows(rows, h[None, :]))
        return self._right_tables[k]

    def element(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64).reshape(self.width)

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


class ElementSet:
    """A finite set of group elements, usually a subgroup.

    Rows keep their construction order; membership uses sorted keys.
    """

    def __init__(self, group: FiniteGroup, rows, generators=None):
        self.group = group
        self.rows = np.asarray(rows, dtype=np.int64).reshape(-1, group.width)
        self.keys = group.key(self.rows)
        self.sorted_keys = np.sort(self.keys)
        self._generators = None if generators is None else np.asarray(generators, np.int64)
        self.factors = None

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return (tuple(r) for r in self.rows.tolist())

    def contains_rows(self, rows) -> np.ndarray:
        k = self.group.key(rows)
        pos = np.minimum(np.searchsorted(self.sorted_keys, k), max(len(self) - 1, 0))
        return self.sorted_keys[pos] == k

    def __contains__(self, element) -> bool:
        return bool(self.contains_rows(np.asarray(element)[None, :])[0])

    def __eq__(self, other):
        if not isinstance(other, ElementSet):
            return NotImplemented
        return np.array_equal(self.sorted_keys, other.sorted_keys)

    __hash__ = None

    def intersection(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.group, self.rows[other.contains_rows(self.rows)])

    @property
    def generators(self) -> np.ndarray:
        if self._generators is None:
            self._generators = _greedy_generators(self.group, [self.rows])
        return self._generators

    def min_rows(self) -> np.ndarray:
        return self.rows[np.argmin(self.keys)]

    def __repr__(self):
        return f"ElementSet(order={len(self)})"


def _greedy_generators(group: FiniteGroup, sources: Sequence[np.ndarray], known=None):
    """Pick generators from ``sources`` until every source element is covered."""
    gens = [] if known is None else list(np.asarray(known).reshape(-1, group.width))
    H = group.closure(np.array(gens).reshape(-1, group.width))
    pool = np.concatenate([np.asarray(s).reshape(-1, group.width) for s in sources])
    while True:
        missing = pool[~H.contains_rows(pool)]
        if len(missing) == 0:
            return np.array(gens, dtype=np.int64).reshape(-1, group.width)
        gens.append(missing[0])
        H = group.closure(np.array(gens))


def subgroup_closure(G: FiniteGroup, gens, cap: int | None = None) -> ElementSet:
    """Subgroup of ``G`` generated by ``gens``."""
    return G.closure(gens, cap)


def generated_subgroup(G: FiniteGroup, *sets: ElementSet) -> ElementSet:
    """``<A, B, ...>`` for element sets, seeded with their known generators."""
    seed = [s._generators for s in sets if s._generators is not None and len(s._generators)]
    seed = np.concatenate(seed) if seed else None
    gens = _greedy_generators(G, [s.rows for s in sets], known=seed)
    return G.closure(gens)


# permutation groups ---------------------------------------------------------

def _parse_cycles(degree: int, text: str) -> list[int]:
    perm = list(range(degree))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) for x in cyc.replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return perm


class PermGroup(FiniteGroup):
    """Permutation group on ``0..degree-1``; ``p[x]`` is the image of ``x``.

    The product ``a * b`` applies ``b`` first.
    """

    def __init__(self, degree: int, generators: Iterable, name: str | None = None):
        self.degree = int(degree)
        self.width = self.degree
        self.radix = max(self.degree, 2)
        gens = [_parse_cycles(degree, g) if isinstance(g, str) else list(g) for g in generators]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise InvalidParams(f"not a permutation of 0..{degree - 1}: {g}")
        self.name = name or f"perm{degree}"
        self._setup(list(range(degree)), gens if gens else np.zeros((0, degree)))

    def _mul2d(self, a, b):
        return np.take_along_axis(a, b, axis=1)

    def canonical_elements(self) -> list[tuple]:
        """Breadth-first element order with lexicographic ties; identity first."""
        return [tuple(r) for r in self.elements().rows.tolist()]

    @classmethod
    def symmetric(cls, n: int) -> "PermGroup":
        if n == 1:
            return cls(1, [], name="S1")
        gens = [[1, 0] + list(range(2, n))] if n == 2 else [
            [1, 0] + list(range(2, n)), list(range(1, n)) + [0]
        ]
        return cls(n, gens, name=f"S{n}")

    @classmethod
    def cyclic(cls, n: int) -> "PermGroup":
        return cls(n, [list(range(1, n)) + [0]], name=f"C{n}")

    @classmethod
    def dihedral(cls, n: int) -> "PermGroup":
        return cls(n, [list(range(1, n)) + [0], [(-x) % n for x in range(n)]], name=f"D{n}")

    @classmethod
    def alternating(cls, n: int) -> "PermGroup":
        gens = []
        for i in range(n - 2):
            p = list(range(n))
            p[i], p[i + 1], p[i + 2] = p[i + 1], p[i + 2], p[i]
            gens.append(p)
        return cls(n, gens, name=f"A{n}")


# affine permutations ------------------------------------------------------------

class AffineGroup(FiniteGroup):
    """Affine permutations of period ``m`` taken modulo ``m*k``.

    An element is the window ``(w(1), ..., w(m)) mod mk``; it acts on
    ``Z_{mk}`` by ``w(r + a*m) = w(r) + a*m``.
    """

    def __init__(self, m: int, k: int):
        if m < 2 or k < 1:
            raise InvalidParams("affine group needs m >= 2 and k >= 1")
        self.m, self.k = int(m), int(k)
        self.width = self.m
        self.radix = self.m * self.k
        self.name = f"affine(m={m},k={k})"
        gens = [self.reflection(i) for i in range(self.m)]
        self._setup(np.arange(1, self.m + 1) % self.radix, gens)

    def reflection(self, i: int) -> np.ndarray:
        """Generator ``s_i``: swap positions ``i, i+1``; ``s_0`` exchanges 0 and 1, m and m+1."""
        m = self.m
        w = np.arange(1, m + 1)
        if i == 0:
            w[0], w[-1] = 0, m + 1
        else:
            w[i - 1], w[i] = w[i], w[i - 1]
        return w % self.radix

    def _mul2d(self, u, v):
        r = (v - 1) % self.m
        shift = v - r - 1
        return (np.take_along_axis(u, r, axis=1) + shift) % self.radix

    def theoretical_order(self) -> int:
        return self.k ** (self.m - 1) * math.factorial(self.m)


def affine_group(m: int, k: int) -> AffineGroup:
    return AffineGroup(m, k)


# elementary matrices over truncated polynomial rings ------------------------------

def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, math.isqrt(q) + 1))


class ELGroup(FiniteGroup):
    """Group generated by elementary matrices ``e_ij(c t^e)`` over ``F_q[t]/(t^s)``.

    Rows are the flattened coefficient arrays ``A[i, j, e]``.  Only prime
    ``q`` is supported.
    """

    def __init__(self, m: int, q: int, s: int):
        if m < 2 or s < 1:
            raise InvalidParams("need m >= 2 and s >= 1")
        if not _is_prime(q):
            raise UnsupportedParams(f"q={q}: only prime fields are implemented")
        self.m, self.q, self.s = int(m), int(q), int(s)
        self.width = self.m * self.m * self.s
        self.radix = self.q
        self.name = f"EL(m={m},q={q},s={s})"
        ident = np.zeros((m, m, s), dtype=np.int64)
        ident[np.arange(m), np.arange(m), 0] = 1
        gens = [
            self.elementary(i, j, [0] * e + [1])
            for i in range(m) for j in range(m) if i != j for e in range(s)
        ]
        self._setup(ident.ravel(), gens)

    def elementary(self, i: int, j: int, coeffs) -> np.ndarray:
        """``I + r E_ij`` with ``r`` given by its coefficient list (low degree first)."""
        a = np.zeros((self.m, self.m, self.s), dtype=np.int64)
        a[np.arange(self.m), np.arange(self.m), 0] = 1
        c = list(coeffs)[: self.s]
        a[i, j, : len(c)] = np.asarray(c) % self.q
        return a.ravel()

    def _mul2d(self, a, b):
        m, s = self.m, self.s
        n = len(a)
        B = b.reshape(n, m, m, s)
        lifted = np.zeros((n, m, s, m, s), dtype=np.int64)
        for e in range(s):
            lifted[:, :, e, :, e:] = B[:, :, :, : s - e]
        prod = a.reshape(n, m, m * s) @ lifted.reshape(n, m * s, m * s)
        return (prod % self.q).reshape(n, self.width)

    def as_matrices(self, rows) -> np.ndarray:
        return np.asarray(rows).reshape(-1, self.m, self.m, self.s)

    def theoretical_order(self) -> int:
        """``|SL_m(F_q)| * q^((m^2-1)(s-1))``."""
        q, m = self.q, self.m
        sl = q ** (m * (m - 1) // 2) * math.prod(q ** i - 1 for i in range(2, m + 1))
        return sl * q ** ((m * m - 1) * (self.s - 1))


def el_group(m: int, q: int, s: int) -> ELGroup:
    return ELGroup(m, q, s)


# direct products ------------------------------------------------------------------

class DirectProduct(FiniteGroup):
    """``G1 x G2`` with rows formed by concatenation."""

    def __init__(self, G1: FiniteGroup, G2: FiniteGroup):
        self.factors = (G1, G2)
        self.width = G1.width + G2.width
        self.name = f"{G1.name} x {G2.name}"
        self._r2 = G2.radix ** G2.width
        if (G1.radix ** G1.width) * self._r2 >= 2 ** 62:
            raise UnsupportedParams("direct product too wide for 64-bit keys")
        self.radix = max(G1.radix, G2.radix)
        e1 = np.broadcast_to(G1.identity, (len(G2.generators), G1.width))
        e2 = np.broadcast_to(G2.identity, (len(G1.generators), G2.width))
        gens = np.concatenate([
            np.concatenate([G1.generators, e2], axis=1),
            np.concatenate([e1, G2.generators], axis=1),
        ])
        self.identity = np.concatenate([G1.identity, G2.identity])
        self.generators = gens
        self._elements = None
        self._index = None
        self._right_tables = {}

    def key(self, rows):
        rows = np.asarray(rows, dtype=np.int64)
        G1, G2 = self.factors
        return G1.key(rows[..., : G1.width]) * self._r2 + G2.key(rows[..., G1.width:])

    def unkey(self, keys):
        G1, G2 = self.factors
        keys = np.asarray(keys, dtype=np.int64)
        return np.concatenate([G1.unkey(keys // self._r2), G2.unkey(keys % self._r2)], axis=-1)

    def _mul2d(self, a, b):
        G1, G2 = self.factors
        w = G1.width
        return np.concatenate(
            [G1._mul2d(a[:, :w], b[:, :w]), G2._mul2d(a[:, w:], b[:, w:])], axis=1
        )

    def pair(self, K1: ElementSet, K2: ElementSet) -> ElementSet:
        """The subgroup ``K1 x K2``, remembering its factors."""
        G1, G2 = self.factors
        rows = np.concatenate([
            np.repeat(K1.rows, len(K2), axis=0), np.tile(K2.rows, (len(K1), 1))
        ], axis=1)
        g1 = K1.generators
        g2 = K2.generators
        gens = np.concatenate([
            np.concatenate([g1, np.broadcast_to(G2.identity, (len(g1), G2.width))], axis=1),
            np.concatenate([np.broadcast_to(G1.identity, (len(g2), G1.width)), g2], axis=1),
        ])
        out = ElementSet(self, rows, generators=gens)
        out.factors = (K1, K2)
        return out

    def theoretical_order(self) -> int:
        return math.prod(
            f.theoretical_order() if hasattr(f, "theoretical_order") else f.order
            for f in self.factors
        )


def direct_product(G1: FiniteGroup, G2: FiniteGroup) -> DirectProduct:
    return DirectProduct(G1, G2)


# standard subgroup systems ----------------------------------------------------------

def standard_subgroups(G: FiniteGroup, indices: Sequence[int] | None = None) -> list[ElementSet]:
    """The subgroups ``K_i`` of the standard system, for ``i`` in ``indices``.

    For the affine group ``K_i = <s_j : j != i>``.  For the elementary
    matrix group ``K_i = <e_{j,j+1}(r0 + r1 t) : j != i>`` with indices mod
    ``m``.  ``indices`` defaults to all of ``0..m-1``; a subset such as
    ``(0, r, 2r)`` keeps only those subgroups.
    """
    m = G.m
    idx = list(range(m)) if indices is None else [int(i) for i in indices]
    out = []
    for i in idx:
        if isinstance(G, AffineGroup):
            gens = [G.reflection(j) for j in range(m) if j != i]
        elif isinstance(G, ELGroup):
            gens = [
                G.elementary(j, (j + 1) % m, [0] * e + [1])
                for j in range(m) if j != i for e in range(min(2, G.s))
            ]
        else:
            raise UnsupportedParams(f"no standard system for {G!r}")
        out.append(G.closure(np.array(gens)))
    return out


def knight_cycle_system(k: int = 2, r: int = 1):
    """Group ``S~_{5r}(k) x S~_{5r}(k)`` with subgroups ``K_{ir} x K_{(2i mod 5) r}``.

    Returns ``(group, subgroups)``.
    """
    A = affine_group(5 * r, k)
    base = standard_subgroups(A, [i * r for i in range(5)])
    G = direct_product(A, A)
    subs = [G.pair(base[i], base[(2 * i) % 5]) for i in range(5)]
    return G, subs


# cosets ---------------------------------------------------------------------------

def coset_labels(G: FiniteGroup, K: ElementSet, ambient: ElementSet | None = None):
    """Partition ``ambient`` (default: all of ``G``) into left cosets ``gK``.

    Returns ``(labels, reps)`` where ``labels[i]`` numbers the coset of the
    ``i``-th ambient row and ``reps`` holds each coset's minimal row; cosets
    are numbered in increasing order of representative.
    """
    if ambient is None:
        ambient = G.elements()
        tables = [G.right_table(h) for h in K.generators]
    else:
        order = np.argsort(ambient.keys)
        sk = ambient.keys[order]
        tables = []
        for h in K.generators:
            k = G.key(G.mul_rows(ambient.rows, h[None, :]))
            pos = np.searchsorted(sk, k)
            if np.any(pos >= len(sk)) or np.any(sk[np.minimum(pos, len(sk) - 1)] != k):
                raise InvalidParams("subgroup is not contained in the ambient set")
            tables.append(order[pos])
    n = len(ambient)
    if tables:
        src = np.concatenate([np.arange(n)] * len(tables))
        dst = np.concatenate(tables)
        graph = coo_matrix((np.ones(len(src), np.int8), (src, dst)), shape=(n, n)).tocsr()
        _, comp = connected_components(graph, directed=True, connection="weak")
    else:
        comp = np.arange(n)
    ncomp = comp.max() + 1 if n else 0
    best = np.full(ncomp, np.iinfo(np.int64).max)
    np.minimum.at(best, comp, ambient.keys)
    rank = np.argsort(np.argsort(best))
    reps = G.unkey(np.sort(best))
    return rank[comp], reps


class Coset:
    __slots__ = ("rep", "index")

    def __init__(self, rep: tuple, index: int):
        self.rep = rep
        self.index = index

    def __repr__(self):
        return f"Coset({self.rep})"


def cosets(G: FiniteGroup, K: ElementSet) -> list[Coset]:
    """Left cosets of ``K`` in ``G`` ordered by canonical representative."""
    _, reps = coset_labels(G, K)
    return [Coset(tuple(r), i) for i, r in enumerate(reps.tolist())]


def canonical_reps(G: FiniteGroup, rows, K: ElementSet, chunk: int = 1 << 20) -> np.ndarray:
    """Minimal key of ``g K`` for each row ``g``."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, G.width)
    out = np.empty(len(rows), dtype=np.int64)
    step = max(1, chunk // max(len(K), 1))
    for s in range(0, len(rows), step):
        blk = rows[s:s + step]
        prod = G.mul_rows(blk[:, None, :], K.rows[None, :, :])
        out[s:s + step] = G.key(prod).min(axis=1)
    return out


def quotient_check(G: FiniteGroup, N: ElementSet, subgroups: Sequence[ElementSet]) -> bool:
    """True iff the normal subgroup ``N`` meets every ``K_i`` trivially.

    Raises
    ------
    NotNormal
        If some conjugate ``g n g^-1`` of a generator leaves ``N``.
    """
    gens = G.generators
    ginv = G.inv_rows(gens)
    for g, gi in zip(gens, ginv):
        conj = G.mul_rows(G.mul_rows(g[None, :], N.generators), gi[None, :])
        bad = ~N.contains_rows(conj)
        if np.any(bad):
            raise NotNormal((tuple(g), tuple(N.generators[np.argmax(bad)])))
    return all(len(N.intersection(K)) == 1 for K in subgroups)


def all_subsets(items: Sequence[int]):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)
