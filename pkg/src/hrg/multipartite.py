"""Ordered multipartite graphs and the clique-complex operations on them.

Vertices carry dense integer ids ``0..N-1`` assigned part by part, so part
``p`` owns the id range ``offsets[p]:offsets[p+1]``.  Edges are stored once
as sorted ``(u, v)`` pairs with ``u < v`` and in CSR form for neighbour
queries.  Clique work (links, profiles, gallery checks) runs on Python
integers used as bitsets, one per vertex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NonClique, NotHyperRegular, NotTypeRegular

__all__ = [
    "Face",
    "DegreeProfile",
    "PartiteGraph",
    "GalleryResult",
    "link",
    "enumerate_cliques",
    "degree_profile",
    "edge_common_counts",
    "type_regularity",
    "is_connected",
    "is_pure",
    "is_strongly_gallery_connected",
    "complete_multipartite",
]


class Face(NamedTuple):
    """A clique: sorted vertex ids together with the types it meets."""

    vertices: tuple
    types: tuple


class DegreeProfile(tuple):
    """Strictly decreasing positive tuple ``(d_0, ..., d_{n-1})``."""

    def __new__(cls, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if any(d <= 0 for d in dims):
            raise ValueError(f"profile entries must be positive: {dims}")
        if any(a <= b for a, b in zip(dims, dims[1:])):
            raise ValueError(f"profile must strictly decrease: {dims}")
        return super().__new__(cls, dims)

    @property
    def dims(self) -> tuple:
        return tuple(self)

    def __repr__(self):
        return f"DegreeProfile{tuple(self)}"


def _bits_to_ids(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class PartiteGraph:
    """Ordered multipartite graph with vertex labels.

    Parameters
    ----------
    sizes : sequence of int
        Number of vertices in each part, in part order.
    edges : array_like, shape (E, 2)
        Global vertex id pairs.  Duplicates and orientation are normalised.
    labels : list, optional
        One opaque label per vertex.
    types : tuple of int, optional
        Type label of each part position; defaults to ``0..p-1``.  Links keep
        the type labels of the parts they retain.
    origin : array_like, optional
        For derived graphs, the id of each vertex in the graph it came from.
    """

    def __init__(self, sizes, edges=(), labels=None, types=None, origin=None):
        self.sizes = tuple(int(s) for s in sizes)
        if any(s < 0 for s in self.sizes):
            raise ValueError("part sizes must be non-negative")
        self.types = tuple(range(len(self.sizes))) if types is None else tuple(types)
        if len(self.types) != len(self.sizes):
            raise ValueError("one type label per part is required")
        self.offsets = np.concatenate([[0], np.cumsum(self.sizes, dtype=np.int64)])
        n = int(self.offsets[-1])
        self.part_of = np.repeat(np.arange(len(self.sizes)), self.sizes)

        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e):
            if e.min() < 0 or e.max() >= n:
                raise ValueError("edge endpoint out of range")
            e = np.sort(e, axis=1)
            if np.any(self.part_of[e[:, 0]] == self.part_of[e[:, 1]]):
                bad = e[self.part_of[e[:, 0]] == self.part_of[e[:, 1]]][0]
                raise ValueError(f"edge {tuple(bad)} joins vertices of one part")
            e = np.unique(e, axis=0)
        self.edges = e
        self.edges.setflags(write=False)

        if labels is not None:
            labels = list(labels)
            if len(labels) != n:
                raise ValueError("one label per vertex is required")
        self.labels = labels
        self.origin = None if origin is None else np.asarray(origin, dtype=np.int64)

        both = np.concatenate([e, e[:, ::-1]]) if len(e) else np.zeros((0, 2), np.int64)
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        self.indptr = np.searchsorted(both[:, 0], np.arange(n + 1)).astype(np.int64)
        self.indices = both[:, 1].copy()
        self._bits = None
        self._part_masks = None

    # basic queries -----------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return int(self.offsets[-1])

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_parts(self) -> int:
        return len(self.sizes)

    def part(self, p: int) -> range:
        return range(int(self.offsets[p]), int(self.offsets[p + 1]))

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    def label(self, v: int):
        return v if self.labels is None else self.labels[v]

    def vertex_keys(self) -> list:
        """Labels if present, else ids in the originating graph, else ids."""
        if self.labels is not None:
            return list(self.labels)
        if self.origin is not None:
            return self.origin.tolist()
        return list(range(self.n_vertices))

    def edges_between(self, p: int, r: int):
        """Local ids ``(a, b)`` of the edges joining part ``p`` to part ``r``."""
        e = self.edges
        pu, pv = self.part_of[e[:, 0]], self.part_of[e[:, 1]]
        fwd = (pu == p) & (pv == r)
        bwd = (pu == r) & (pv == p)
        a = np.concatenate([e[fwd, 0], e[bwd, 1]]) - self.offsets[p]
        b = np.concatenate([e[fwd, 1], e[bwd, 0]]) - self.offsets[r]
        return a, b

    def adjacency(self, dtype=np.float64) -> csr_matrix:
        n = self.n_vertices
        data = np.ones(len(self.indices), dtype=dtype)
        return csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def face(self, vertices) -> Face:
        vs = tuple(sorted(int(v) for v in vertices))
        return Face(vs, tuple(self.types[self.part_of[v]] for v in vs))

    # bitsets ------------------------------------------------------------
    def neighbor_bits(self) -> list[int]:
        if self._bits is None:
            n = self.n_vertices
            bits = []
            row = np.zeros(n, dtype=bool)
            for v in range(n):
                nb = self.neighbors(v)
                row[nb] = True
                bits.append(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little"))
                row[nb] = False
            self._bits = bits
        return self._bits

    def part_masks(self) -> list[int]:
        if self._part_masks is None:
            self._part_masks = [
                ((1 << int(self.offsets[p + 1])) - 1) ^ ((1 << int(self.offsets[p])) - 1)
                for p in range(self.n_parts)
            ]
        return self._part_masks

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PartiteGraph):
            return NotImplemented
        return (
            self.sizes == other.sizes
            and self.types == other.types
            and np.array_equal(self.edges, other.edges)
            and self.labels == other.labels
        )

    __hash__ = None

    def labeled_signature(self):
        """Label-level description, independent of vertex numbering."""
        keys = self.vertex_keys()
        parts = tuple(
            frozenset(keys[v] for v in self.part(p)) for p in range(self.n_parts)
        )
        edges = frozenset(frozenset((keys[u], keys[v])) for u, v in self.edges.tolist())
        return self.types, parts, edges

    def __repr__(self):
        return f"PartiteGraph(sizes={self.sizes}, edges={self.n_edges})"


def complete_multipartite(sizes: Sequence[int]) -> PartiteGraph:
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    edges = []
    for p in range(len(sizes)):
        for r in range(p + 1, len(sizes)):
            a = np.arange(offsets[p], offsets[p + 1])
            b = np.arange(offsets[r], offsets[r + 1])
            aa, bb = np.meshgrid(a, b, indexing="ij")
            edges.append(np.stack([aa.ravel(), bb.ravel()], axis=1))
    e = np.concatenate(edges) if edges else np.zeros((0, 2), np.int64)
    return PartiteGraph(sizes, e)


# clique machinery --------------------------------------------------------

def _check_clique(G: PartiteGraph, vertices) -> tuple[tuple, int]:
    vs = tuple(sorted(int(v) for v in vertices))
    bits = G.neighbor_bits()
    mask = (1 << G.n_vertices) - 1
    for i, v in enumerate(vs):
        for u in vs[i + 1:]:
            if not (bits[v] >> u) & 1:
                raise NonClique(v, u)
        mask &= bits[v]
    return vs, mask


def _walk(G: PartiteGraph, max_size: int) -> Iterator[tuple[tuple, int]]:
    """Yield ``(clique, common_neighbourhood_mask)`` for every clique.

    Cliques are produced in lexicographic order of their sorted vertex
    tuples, with each new vertex drawn from a later part than the last.
    """
    bits = G.neighbor_bits()
    part_of = G.part_of
    offs = [int(o) for o in G.offsets]

    def rec(clique, mask, start):
        yield clique, mask
        if len(clique) >= max_size:
            return
        cand = (mask >> start) << start
        last = len(clique) + 1 == max_size
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            if last:
                yield clique + (v,), mask & bits[v]
            else:
                yield from rec(clique + (v,), mask & bits[v], offs[part_of[v] + 1])

    yield from rec((), (1 << G.n_vertices) - 1, 0)


def link(G: PartiteGraph, clique) -> PartiteGraph:
    """Common neighbourhood of a clique, as an induced multipartite graph.

    The parts met by ``clique`` are dropped; every other part keeps the
    vertices adjacent to all of ``clique``.  Labels are inherited and
    ``origin`` records ids in the ancestor the first link was taken of.

    Raises
    ------
    NonClique
        If two vertices of ``clique`` are not adjacent.
    """
    if isinstance(clique, Face):
        clique = clique.vertices
    vs = sorted(int(v) for v in clique)
    for a, v in enumerate(vs):
        for u in vs[a + 1:]:
            if not G.has_edge(v, u):
                raise NonClique(v, u)
    if vs:
        common = G.neighbors(vs[0])
        for v in vs[1:]:
            common = np.intersect1d(common, G.neighbors(v), assume_unique=True)
    else:
        common = np.arange(G.n_vertices)
    met = {int(G.part_of[v]) for v in vs}
    keep = [p for p in range(G.n_parts) if p not in met]
    # common is sorted, hence already grouped by part
    sizes = np.bincount(G.part_of[common], minlength=G.n_parts)[keep] if len(common) else [0] * len(keep)
    new_id = np.full(G.n_vertices, -1, dtype=np.int64)
    new_id[common] = np.arange(len(common))
    starts, stops = G.indptr[common], G.indptr[common + 1]
    lengths = stops - starts
    src = np.repeat(common, lengths)
    dst = G.indices[np.concatenate([np.arange(a, b) for a, b in zip(starts, stops)])] \
        if len(common) else np.zeros(0, np.int64)
    inside = (new_id[dst] >= 0) & (src < dst)
    edges = np.stack([new_id[src[inside]], new_id[dst[inside]]], axis=1)
    labels = None if G.labels is None else [G.labels[v] for v in common.tolist()]
    origin = common if G.origin is None else G.origin[common]
    return PartiteGraph(
        sizes, edges, labels=labels, types=[G.types[p] for p in keep], origin=origin,
    )


def enumerate_cliques(G: PartiteGraph, size: int) -> list[Face]:
    """All cliques with ``size`` vertices in lexicographic order."""
    if size < 0:
        raise ValueError("size must be non-negative")
    return [G.face(c) for c, _ in _walk(G, size) if len(c) == size]


BITSET_LIMIT = 40_000


def degree_profile(G: PartiteGraph) -> DegreeProfile:
    """Common link size of the ``i``-cliques for ``i = 1..p-1``.

    Graphs above ``BITSET_LIMIT`` vertices with at most three parts are
    handled with sparse matrix products instead of bitsets.

    Raises
    ------
    NotHyperRegular
        With two same-size cliques whose links differ, or a non-top clique
        with an empty link.
    """
    n = G.n_parts - 1
    if _sparse(G):
        return _sparse_profile(G)
    first: dict[int, tuple] = {}
    for c, mask in _walk(G, n):
        k = len(c)
        if k == 0:
            continue
        size = mask.bit_count()
        if size == 0:
            face = G.face(c)
            raise NotHyperRegular(((face, 0), (face, 0)), f"clique {c} has an empty link")
        if k not in first:
            first[k] = (c, size)
        elif first[k][1] != size:
            a, sa = first[k]
            raise NotHyperRegular(((G.face(a), sa), (G.face(c), size)))
    missing = [k for k in range(1, n + 1) if k not in first]
    if missing:
        raise NotHyperRegular(((Face((), ()), 0), (Face((), ()), 0)),
                              f"no cliques of size {missing[0]}")
    return DegreeProfile(first[k][1] for k in range(1, n + 1))


def _sparse(G: PartiteGraph) -> bool:
    return G.n_vertices > BITSET_LIMIT and G.n_parts <= 3


def edge_common_counts(G: PartiteGraph, chunk: int = 1024) -> np.ndarray:
    """Number of common neighbours of each edge, aligned with ``G.edges``.

    Computed with chunked sparse products, one part triple at a time, so
    it only supports graphs with at most three parts.
    """
    if G.n_parts > 3:
        raise ValueError("edge_common_counts supports at most three parts")
    out = np.zeros(G.n_edges, dtype=np.int64)
    if G.n_parts < 3 or G.n_edges == 0:
        return out
    A = G.adjacency(dtype=np.int32)
    e = G.edges
    pu, pv = G.part_of[e[:, 0]], G.part_of[e[:, 1]]
    for a, b in ((0, 1), (0, 2), (1, 2)):
        c = 3 - a - b
        ra, rb, rc = G.part(a), G.part(b), G.part(c)
        A_ac = A[ra.start:ra.stop][:, rc.start:rc.stop].tocsr()
        A_cb = A[rc.start:rc.stop][:, rb.start:rb.stop].tocsc()
        sel = np.flatnonzero((pu == a) & (pv == b))
        lu = e[sel, 0] - ra.start
        lv = e[sel, 1] - rb.start
        bounds = np.searchsorted(lu, np.arange(0, len(ra) + chunk, chunk))
        for s0, (i0, i1) in enumerate(zip(bounds[:-1], bounds[1:])):
            if i0 == i1:
                continue
            r0 = s0 * chunk
            M = (A_ac[r0:r0 + chunk] @ A_cb).tocsr()
            out[sel[i0:i1]] = np.asarray(M[lu[i0:i1] - r0, lv[i0:i1]]).ravel()
    return out


def _sparse_profile(G: PartiteGraph) -> DegreeProfile:
    deg = G.degrees()
    bad = np.flatnonzero(deg != deg[0])
    if len(bad) or deg[0] == 0:
        v = int(bad[0]) if len(bad) else 0
        raise NotHyperRegular(((G.face([0]), int(deg[0])), (G.face([v]), int(deg[v]))))
    if G.n_parts < 3:
        return DegreeProfile([int(deg[0])])
    counts = edge_common_counts(G)
    odd = np.flatnonzero(counts != counts[0])
    if len(odd) or counts[0] == 0:
        i = int(odd[0]) if len(odd) else 0
        raise NotHyperRegular(((G.face(G.edges[0]), int(counts[0])),
                               (G.face(G.edges[i]), int(counts[i]))))
    return DegreeProfile([int(deg[0]), int(counts[0])])


def type_regularity(G: PartiteGraph) -> dict:
    """Map each realised clique type ``J`` to ``{i: d_J(i)}`` for ``i`` not in ``J``.

    The empty type is included, with ``d_{}(i)`` the size of part ``i``.
    """
    masks = G.part_masks()
    types = G.types
    part_of = G.part_of
    seen: dict[frozenset, tuple] = {}
    for c, mask in _walk(G, G.n_parts - 1):
        J = frozenset(types[part_of[v]] for v in c)
        counts = {types[p]: (mask & masks[p]).bit_count()
                  for p in range(G.n_parts) if types[p] not in J}
        if J not in seen:
            seen[J] = (c, counts)
            continue
        c0, counts0 = seen[J]
        if counts != counts0:
            i = next(t for t in counts if counts[t] != counts0[t])
            raise NotTypeRegular(J, i, ((G.face(c0), counts0[i]), (G.face(c), counts[i])))
    return {J: counts for J, (_, counts) in seen.items()}


def is_connected(G: PartiteGraph) -> bool:
    if G.n_vertices == 0:
        return False
    k, _ = connected_components(G.adjacency(), directed=False)
    return k == 1


def is_pure(G: PartiteGraph) -> bool:
    """True iff every clique extends to one meeting every part."""
    top = G.n_parts
    if _sparse(G):
        if top == 1:
            return G.n_vertices > 0
        if np.any(G.degrees() == 0):
            return False
        return top == 2 or bool(np.all(edge_common_counts(G) > 0))
    return all(mask or len(c) == top for c, mask in _walk(G, top - 1))


def _mask_connected(bits: list[int], L: int) -> bool:
    reached = frontier = L & -L
    while frontier:
        new = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new |= bits[low.bit_length() - 1]
        frontier = new & L & ~reached
        reached |= frontier
    return reached == L


@dataclass
class GalleryResult:
    connected: bool
    witness: Face | None = None
    checked: int = field(default=0)

    def __bool__(self):
        return self.connected


def is_strongly_gallery_connected(G: PartiteGraph) -> GalleryResult:
    """Check that the complex and every link containing an edge are connected.

    The witness is the first clique (possibly empty) whose link has an edge
    but is disconnected.
    """
    bits = G.neighbor_bits()
    if not is_connected(G):
        return GalleryResult(False, Face((), ()), 0)
    checked = 1
    for c, mask in _walk(G, max(G.n_parts - 2, 0)):
        if not c:
            continue
        has_edge = False
        m = mask
        while m:
            low = m & -m
            m ^= low
            if bits[low.bit_length() - 1] & mask:
                has_edge = True
                break
        if not has_edge:
            continue
        checked += 1
        if not _mask_connected(bits, mask):
            return GalleryResult(False, G.face(c), checked)
    return GalleryResult(True, None, checked)
