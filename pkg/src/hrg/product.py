"""Partite products, part relabelling and symmetrisation over permutation groups."""
from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .degrees import orbit_product_profile
from .errors import (
    CapacityExceeded,
    NotSetTransitiveWarning,
    PartCountMismatch,
    PointsNotStabilized,
)
from .groups import PermGroup
from .multipartite import DegreeProfile, PartiteGraph

__all__ = [
    "symmetrized_profile_from_type_regular",
    "PermGroup",
    "partite_product",
    "relabel",
    "symmetrize",
    "is_set_transitive",
    "orbit_set_transitive_on",
    "setwise_stabilizer",
    "SetTransitivity",
    "vertex_cap",
    "knight_symmetry_group",
]


def vertex_cap() -> int:
    return int(os.environ.get("HRG_CAP", 10**7))


def partite_product(G1: PartiteGraph, G2: PartiteGraph, pair_labels: bool = True) -> PartiteGraph:
    """Partite product: part ``i`` is ``part_i(G1) x part_i(G2)``.

    ``(a, b) ~ (a', b')`` iff ``a ~ a'`` in ``G1`` and ``b ~ b'`` in ``G2``;
    pairs inside one part are never joined.  Within part ``i`` the pair of
    local ids ``(x, y)`` becomes local id ``x * |part_i(G2)| + y``, and labels
    are pairs of the factor labels.

    Raises
    ------
    PartCountMismatch
        If the factors have different numbers of parts.
    """
    if G1.n_parts != G2.n_parts:
        raise PartCountMismatch(f"{G1.n_parts} parts vs {G2.n_parts} parts")
    if G1.types != G2.types:
        raise PartCountMismatch(f"type labels differ: {G1.types} vs {G2.types}")
    s1, s2 = G1.sizes, G2.sizes
    sizes = [a * b for a, b in zip(s1, s2)]
    offs = np.concatenate([[0], np.cumsum(sizes, dtype=np.int64)])
    blocks = []
    for p in range(G1.n_parts):
        for r in range(p + 1, G1.n_parts):
            a1, b1 = G1.edges_between(p, r)
            a2, b2 = G2.edges_between(p, r)
            if len(a1) == 0 or len(a2) == 0:
                continue
            u = offs[p] + (a1[:, None] * s2[p] + a2[None, :])
            v = offs[r] + (b1[:, None] * s2[r] + b2[None, :])
            blocks.append(np.stack([u.ravel(), v.ravel()], axis=1))
    edges = np.concatenate(blocks) if blocks else np.zeros((0, 2), np.int64)
    labels = None
    if pair_labels:
        k1, k2 = G1.vertex_keys(), G2.vertex_keys()
        labels = []
        for p in range(G1.n_parts):
            right = k2[G2.offsets[p]:G2.offsets[p + 1]]
            for x in k1[G1.offsets[p]:G1.offsets[p + 1]]:
                labels.extend((x, y) for y in right)
    return PartiteGraph(sizes, edges, labels=labels, types=G1.types)


def relabel(G: PartiteGraph, pi: Sequence[int]) -> PartiteGraph:
    """Reorder parts so that new part ``i`` is old part ``pi[i]``.

    The identity permutation returns ``G`` itself.
    """
    pi = [int(x) for x in pi]
    if sorted(pi) != list(range(G.n_parts)):
        raise ValueError(f"not a permutation of the parts: {pi}")
    if pi == list(range(G.n_parts)):
        return G
    old = np.concatenate([np.arange(G.offsets[p], G.offsets[p + 1]) for p in pi])
    new_id = np.empty(G.n_vertices, dtype=np.int64)
    new_id[old] = np.arange(G.n_vertices)
    labels = None if G.labels is None else [G.labels[v] for v in old.tolist()]
    origin = None if G.origin is None else G.origin[old]
    return PartiteGraph(
        [G.sizes[p] for p in pi], new_id[G.edges], labels=labels, types=G.types, origin=origin
    )


def symmetrize(G: PartiteGraph, H: PermGroup, cap: int | None = None) -> PartiteGraph:
    """Product of ``relabel(G, pi)`` over the elements of ``H``.

    Factors follow ``H.canonical_elements()``; labels become tuples with one
    base label per factor.  Nothing is pruned.

    Raises
    ------
    CapacityExceeded
        If the projected vertex count exceeds ``cap`` (default ``HRG_CAP`` or 10^7).
    """
    if H.degree != G.n_parts:
        raise PartCountMismatch(f"group of degree {H.degree} on {G.n_parts} parts")
    cap = vertex_cap() if cap is None else cap
    elements = H.canonical_elements()
    projected = sum(
        math.prod(G.sizes[pi[i]] for pi in elements) for i in range(G.n_parts)
    )
    if projected > cap:
        raise CapacityExceeded(projected, cap)
    base = G.vertex_keys()
    first = relabel(PartiteGraph(G.sizes, G.edges, labels=[(x,) for x in base], types=G.types),
                    elements[0])
    out = first
    for pi in elements[1:]:
        out = partite_product(out, relabel(G, pi))
        out.labels = [a + (b,) for a, b in out.labels]
    return out


@dataclass
class SetTransitivity:
    transitive: bool
    by_size: dict = field(default_factory=dict)

    def __bool__(self):
        return self.transitive


def symmetrized_profile_from_type_regular(d: dict, H: PermGroup) -> DegreeProfile:
    """Predicted profile of ``symmetrize(G, H)`` from the type degrees of ``G``.

    ``d`` is the map returned by ``type_regularity``: clique type set ``J``
    to ``{type: link part size}``.  A type-``J`` clique of the product has
    ``sum_{i not in J} prod_{pi in H} d[pi(J)][pi(i)]`` common neighbours.
    When ``H`` is not set-transitive a ``NotSetTransitiveWarning`` is issued
    and the prediction may still come out type-dependent, which raises.

    Raises
    ------
    UnsupportedParams
        If the predicted link size depends on the clique type.
    """
    if not is_set_transitive(H):
        warnings.warn("group is not set-transitive; the prediction may depend on types",
                      NotSetTransitiveWarning, stacklevel=2)
    perms = [tuple(int(x) for x in pi) for pi in H.canonical_elements()]
    table = {frozenset(J): dict(v) for J, v in d.items()}
    return DegreeProfile(orbit_product_profile(table, perms, H.degree))


def _subset_orbit_size(gens: list[tuple], start: frozenset) -> int:
    seen = {start}
    stack = [start]
    while stack:
        s = stack.pop()
        for g in gens:
            t = frozenset(g[x] for x in s)
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return len(seen)


def is_set_transitive(H: PermGroup) -> SetTransitivity:
    """Whether ``H`` is transitive on the ``i``-subsets for every ``1 <= i < degree``."""
    gens = [tuple(g) for g in H.generators.tolist()]
    d = H.degree
    by_size = {
        i: _subset_orbit_size(gens, frozenset(range(i))) == math.comb(d, i) for i in range(1, d)
    }
    return SetTransitivity(all(by_size.values()), by_size)


def _induced(H: PermGroup, points: Sequence[int], perms) -> list[list[int]]:
    pos = {p: i for i, p in enumerate(points)}
    out = []
    for g in perms:
        img = [g[p] for p in points]
        if any(x not in pos for x in img):
            raise PointsNotStabilized(tuple(g))
        out.append([pos[x] for x in img])
    return out


def orbit_set_transitive_on(H: PermGroup, points: Sequence[int]) -> SetTransitivity:
    """Set-transitivity of the action ``H`` induces on ``points``.

    Raises
    ------
    PointsNotStabilized
        If a generator of ``H`` does not map ``points`` onto itself.
    """
    points = list(points)
    induced = _induced(H, points, H.generators.tolist())
    return is_set_transitive(PermGroup(len(points), induced))


def setwise_stabilizer(H: PermGroup, points: Sequence[int]) -> PermGroup:
    """Subgroup of ``H`` mapping ``points`` onto itself (by enumeration)."""
    target = set(points)
    rows = H.elements().rows
    keep = [r for r in rows.tolist() if {r[p] for p in target} == target]
    gens = []
    sub = PermGroup(H.degree, [])
    for r in keep:
        if tuple(r) not in sub.elements():
            gens.append(r)
            sub = PermGroup(H.degree, gens, name=f"Stab({H.name})")
    return sub


def knight_symmetry_group() -> tuple[PermGroup, list[int]]:
    """``D5 x D5 x| S2`` on ``Z5^2`` and the point set ``{(x, 2x)}``.

    Point ``(x, y)`` is encoded as ``5x + y``.
    """
    pts = [(x, y) for x in range(5) for y in range(5)]
    code = {p: 5 * p[0] + p[1] for p in pts}
    def perm(f):
        return [code[f(*p)] for p in pts]
    gens = [
        perm(lambda x, y: ((x + 1) % 5, y)),
        perm(lambda x, y: ((-x) % 5, y)),
        perm(lambda x, y: (x, (y + 1) % 5)),
        perm(lambda x, y: (x, (-y) % 5)),
        perm(lambda x, y: (y, x)),
    ]
    H = PermGroup(25, gens, name="D5xD5:S2")
    return H, [code[(x, (2 * x) % 5)] for x in range(5)]


def pairs_of(n: int):
    return list(combinations(range(n), 2))
