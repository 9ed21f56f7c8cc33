"""Coset complexes of subgroup systems and the axioms that make them hyper-regular.

For a group ``G`` and subgroups ``K_0, ..., K_n`` the coset complex has the
left cosets ``g K_i`` as type-``i`` vertices, with two cosets adjacent when
they intersect.  Vertices are labelled by their lexicographically minimal
element.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import BijectionFailure, InvalidParams, UnsupportedFamily
from .groups import (
    DirectProduct,
    ElementSet,
    FiniteGroup,
    affine_group,
    canonical_reps,
    coset_labels,
    el_group,
    generated_subgroup,
    knight_cycle_system,
    standard_subgroups,
)
from .multipartite import PartiteGraph, link
from .product import partite_product

__all__ = [
    "CosetComplex",
    "AxiomResult",
    "SGSReport",
    "LinkSystem",
    "build_coset_complex",
    "check_sgs_axioms",
    "intersection_lattice",
    "link_system",
    "quotient_complex",
]


@dataclass
class CosetComplex:
    host: PartiteGraph
    group: FiniteGroup
    subgroups: list
    coset_index: list = field(default_factory=list)

    def vertex(self, i: int, g) -> int:
        """Host vertex of the coset ``g K_i``."""
        rep = canonical_reps(self.group, np.asarray(g)[None, :], self.subgroups[i])
        return self.coset_index[i][tuple(self.group.unkey(rep)[0].tolist())]


def _complex_from_labels(G, ambient_rows, label_lists, rep_lists):
    sizes = [len(r) for r in rep_lists]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    blocks = []
    for i, j in combinations(range(len(label_lists)), 2):
        pairs = np.unique(np.stack([label_lists[i], label_lists[j]], axis=1), axis=0)
        blocks.append(pairs + [offs[i], offs[j]])
    edges = np.concatenate(blocks) if blocks else np.zeros((0, 2), np.int64)
    labels = [tuple(r) for reps in rep_lists for r in reps.tolist()]
    index = [
        {tuple(r): int(offs[i]) + a for a, r in enumerate(reps.tolist())}
        for i, reps in enumerate(rep_lists)
    ]
    return PartiteGraph(sizes, edges, labels=labels), index


def build_coset_complex(
    G: FiniteGroup,
    subgroups: Sequence[ElementSet],
    ambient: ElementSet | None = None,
    route: str = "auto",
) -> CosetComplex:
    """Coset complex of ``(G, (K_0, ..., K_n))``.

    Parameters
    ----------
    G : FiniteGroup
    subgroups : sequence of ElementSet
    ambient : ElementSet, optional
        Use this subgroup of ``G`` as the ambient group instead of ``G``.
    route : {"auto", "table", "product"}
        ``"product"`` builds a direct product system as the partite product of
        the factor complexes; ``"auto"`` picks it whenever every subgroup
        records its factors.  ``"table"`` enumerates the ambient group.
    """
    subgroups = list(subgroups)
    use_product = (
        route == "product"
        or (route == "auto" and ambient is None and isinstance(G, DirectProduct)
            and all(K.factors is not None for K in subgroups))
    )
    if use_product:
        if not isinstance(G, DirectProduct) or any(K.factors is None for K in subgroups):
            raise InvalidParams("product route needs a direct product of paired subgroups")
        G1, G2 = G.factors
        X1 = build_coset_complex(G1, [K.factors[0] for K in subgroups])
        X2 = build_coset_complex(G2, [K.factors[1] for K in subgroups])
        host = partite_product(X1.host, X2.host)
        host.labels = [a + b for a, b in host.labels]
        index = []
        for i in range(len(subgroups)):
            part = host.part(i)
            index.append({host.labels[v]: v for v in part})
        return CosetComplex(host, G, subgroups, index)

    amb = G.elements() if ambient is None else ambient
    labs, reps = [], []
    for K in subgroups:
        lab, rep = coset_labels(G, K, ambient)
        labs.append(lab)
        reps.append(rep)
    host, index = _complex_from_labels(G, amb.rows, labs, reps)
    return CosetComplex(host, G, subgroups, index)


def intersection_lattice(subgroups: Sequence[ElementSet]) -> dict:
    """``K_tau`` for every non-empty ``tau``, as intersections."""
    n = len(subgroups)
    out = {}
    for r in range(1, n + 1):
        for tau in combinations(range(n), r):
            if r == 1:
                out[tau] = subgroups[tau[0]]
            else:
                out[tau] = out[tau[:-1]].intersection(subgroups[tau[-1]])
    return out


@dataclass
class AxiomResult:
    passed: bool
    witness: object = None
    checked: int = 0
    skipped: int = 0

    def __bool__(self):
        return self.passed


@dataclass
class SGSReport:
    A1: AxiomResult
    A2: AxiomResult
    A3: AxiomResult

    @property
    def passed(self) -> bool:
        return bool(self.A1 and self.A2 and self.A3)

    def __bool__(self):
        return self.passed

    def as_dict(self) -> dict:
        return {
            name: {"passed": r.passed, "witness": _plain(r.witness),
                   "checked": r.checked, "skipped": r.skipped}
            for name, r in (("A1", self.A1), ("A2", self.A2), ("A3", self.A3))
        }


def _plain(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (tuple, list)):
        return [_plain(y) for y in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


def _product_keys(G: FiniteGroup, A: ElementSet, B: ElementSet) -> np.ndarray:
    prod = G.mul_rows(A.rows[:, None, :], B.rows[None, :, :])
    return np.unique(G.key(prod))


def check_sgs_axioms(
    G: FiniteGroup, subgroups: Sequence[ElementSet], full_a1: bool = False
) -> SGSReport:
    """Check the three subgroup-geometry axioms by explicit set computation.

    A1: ``K_{tau & tau'} = <K_tau, K_tau'>`` for all index sets; pairs with
    disjoint ``tau, tau'`` need all of ``G`` and run only with ``full_a1``.
    A2: ``K_tau K_i = intersection over j in tau of K_j K_i``.
    A3: ``K_I != K_{I - {i}}`` for every ``i``.

    Each failing axiom carries the first witness found.
    """
    n = len(subgroups)
    I = tuple(range(n))
    lat = intersection_lattice(subgroups)

    # A1
    checked = skipped = 0
    witness = None
    subsets = [t for t in lat]
    for a, b in combinations(subsets, 2):
        common = tuple(sorted(set(a) & set(b)))
        if not common and not full_a1:
            skipped += 1
            continue
        target_size = G.order if not common else len(lat[common])
        checked += 1
        H = generated_subgroup(G, lat[a], lat[b])
        if len(H) != target_size:
            witness = (a, b, len(H), target_size)
            break
    a1 = AxiomResult(witness is None, witness, checked, skipped)

    # A2
    checked = 0
    witness = None
    pk = {}
    for tau in subsets:
        if len(tau) == n:
            continue
        for i in I:
            if i in tau:
                continue
            checked += 1
            left = _product_keys(G, lat[tau], subgroups[i])
            right = None
            for j in tau:
                if (j, i) not in pk:
                    pk[(j, i)] = _product_keys(G, subgroups[j], subgroups[i])
                right = pk[(j, i)] if right is None else np.intersect1d(right, pk[(j, i)])
            if not np.array_equal(left, right):
                extra = np.setdiff1d(right, left)
                witness = (tau, i, tuple(G.unkey(extra[:1])[0].tolist()) if len(extra) else None)
                break
        if witness is not None:
            break
    a2 = AxiomResult(witness is None, witness, checked)

    # A3
    failing = [i for i in I if lat[I] == (lat[tuple(j for j in I if j != i)] if n > 1 else None)]
    if n == 1:
        failing = [0] if len(lat[I]) == G.order else []
    a3 = AxiomResult(not failing, failing[0] if failing else None, n)
    return SGSReport(a1, a2, a3)


@dataclass
class LinkSystem:
    tau: tuple
    group_set: ElementSet
    subgroups: list
    complex: CosetComplex
    to_host: dict


def link_system(X: CosetComplex, tau: Sequence[int], g=None) -> LinkSystem:
    """Identify the link of the chamber face ``{g K_j : j in tau}`` with a coset complex.

    The link is matched with the coset complex of ``K_tau`` and the subgroups
    ``K_{tau + i}`` for ``i`` not in ``tau``; the coset ``h K_{tau+i}`` maps to
    the host vertex ``g h K_i``.

    Raises
    ------
    BijectionFailure
        If the map is not a bijection onto the link that preserves edges.
    """
    G = X.group
    tau = tuple(sorted(tau))
    g = G.identity if g is None else np.asarray(g, dtype=np.int64)
    lat = intersection_lattice(X.subgroups)
    K_tau = lat[tau] if tau else G.elements()
    rest = [i for i in range(len(X.subgroups)) if i not in tau]
    subs = [lat[tuple(sorted(tau + (i,)))] for i in rest]
    local = build_coset_complex(G, subs, ambient=K_tau, route="table")

    face = [X.vertex(j, g) for j in tau]
    L = link(X.host, face)
    host_ids = L.origin if L.origin is not None else np.arange(L.n_vertices)

    mapping = {}
    for pos, i in enumerate(rest):
        reps = np.array([local.host.labels[v] for v in local.host.part(pos)], dtype=np.int64)
        if len(reps) == 0:
            continue
        moved = G.mul_rows(g[None, :], reps)
        for v, row in zip(local.host.part(pos), moved):
            mapping[v] = X.vertex(i, row)
    image = sorted(mapping.values())
    if len(set(image)) != len(image):
        raise BijectionFailure("two link cosets map to one host vertex")
    if image != sorted(host_ids.tolist()):
        raise BijectionFailure("image differs from the link vertex set")
    link_pos = {int(h): a for a, h in enumerate(host_ids.tolist())}
    mapped = {frozenset((link_pos[mapping[u]], link_pos[mapping[v]]))
              for u, v in local.host.edges.tolist()}
    actual = {frozenset(e) for e in L.edges.tolist()}
    if mapped != actual:
        raise BijectionFailure("edges are not preserved")
    return LinkSystem(tau, K_tau, subs, local, mapping)


def quotient_complex(family: str, **params) -> CosetComplex:
    """Named constructions.

    ``affine`` (m, k), ``affine-3r`` (r, k), ``el`` (m, q, s),
    ``knight`` (k, r).
    """
    if family == "affine":
        A = affine_group(params.get("m", 3), params.get("k", 2))
        return build_coset_complex(A, standard_subgroups(A))
    if family == "affine-3r":
        r = params.get("r", 1)
        # k = 1 collapses every part to a single coset
        A = affine_group(3 * r, params.get("k", 2))
        return build_coset_complex(A, standard_subgroups(A, [0, r, 2 * r]))
    if family == "el":
        E = el_group(params.get("m", 3), params.get("q", 2), params.get("s", 2))
        return build_coset_complex(E, standard_subgroups(E))
    if family == "knight":
        G, subs = knight_cycle_system(params.get("k", 2), params.get("r", 1))
        return build_coset_complex(G, subs)
    raise UnsupportedFamily(family)
