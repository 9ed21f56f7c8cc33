"""Lattice-on-torus graphs: the stair lattice and the three-level lattice."""
from __future__ import annotations

import itertools
import math
import warnings

import numpy as np

from .errors import CapacityExceeded, InvalidParams
from .multipartite import PartiteGraph
from .product import vertex_cap

__all__ = ["stair_graph", "three_level_graph", "torus_points"]


def torus_points(n: int, N: int) -> np.ndarray:
    """All points of ``Z_N^n`` in lexicographic order."""
    grids = np.indices((N,) * n).reshape(n, -1).T
    return grids.astype(np.int64)


def _encode(points: np.ndarray, N: int) -> np.ndarray:
    n = points.shape[1]
    return points @ (N ** np.arange(n - 1, -1, -1, dtype=np.int64))


def _assemble(points, N, part_of_point, nparts, steps):
    """Build a partite graph from points, their parts and allowed steps.

    ``steps`` is a list of ``(source_part, vectors)``; each source point
    ``x`` is joined to ``x + v mod N`` for every ``v``.
    """
    lookup = np.full(N ** points.shape[1], -1, dtype=np.int64)
    order = np.lexsort((_encode(points, N), part_of_point))
    pts = points[order]
    parts = part_of_point[order]
    lookup[_encode(pts, N)] = np.arange(len(pts))
    sizes = np.bincount(parts, minlength=nparts)
    blocks = []
    for src, vecs in steps:
        base = pts[parts == src]
        ids = np.flatnonzero(parts == src)
        for v in vecs:
            tgt = lookup[_encode((base + v) % N, N)]
            if np.any(tgt < 0):
                raise AssertionError("step left the vertex set")
            blocks.append(np.stack([ids, tgt], axis=1))
    edges = np.concatenate(blocks) if blocks else np.zeros((0, 2), np.int64)
    raw = len(edges)
    G = PartiteGraph(sizes, edges, labels=[tuple(p) for p in pts.tolist()])
    return G, raw - G.n_edges


def _binary_vectors(n: int, ones: int) -> np.ndarray:
    out = np.zeros((math.comb(n, ones), n), dtype=np.int64)
    for r, cols in enumerate(itertools.combinations(range(n), ones)):
        out[r, list(cols)] = 1
    return out


def stair_graph(n: int, k: int, full_torus: bool = False) -> PartiteGraph:
    """Stair lattice on ``Z_{nk}^n`` with ``n`` parts.

    Part ``i`` holds the points whose coordinate sum is ``i`` modulo ``nk``
    (a connected slab).  A point of part ``i`` is joined to ``x + v`` for
    every 0/1 vector ``v`` with ``c`` ones, ``1 <= c <= n-1-i``.

    With ``full_torus=True`` part ``i`` is instead every point whose sum is
    ``i`` modulo ``n``; the result is ``k`` disjoint copies of the slab
    graph.  Labels are the coordinate tuples.
    """
    if n < 2 or k < 1:
        raise InvalidParams("stair lattice needs n >= 2 and k >= 1")
    N = n * k
    projected = N ** n if full_torus else n * N ** (n - 1)
    if projected > vertex_cap():
        raise CapacityExceeded(projected, vertex_cap())
    pts = torus_points(n, N)
    sums = pts.sum(axis=1)
    if full_torus:
        level = sums % n
        keep = np.ones(len(pts), dtype=bool)
    else:
        level = sums % N
        keep = level < n
    steps = [
        (i, np.concatenate([_binary_vectors(n, c) for c in range(1, n - i)]))
        for i in range(n - 1)
    ]
    G, dup = _assemble(pts[keep], N, level[keep], n, steps)
    if k == 1 or dup:
        warnings.warn(f"stair lattice with k={k}: {dup} coincident edges merged", stacklevel=2)
    return G


def three_level_graph(r: int, k: int, full_torus: bool = False) -> PartiteGraph:
    """Three-level lattice on ``Z_{3rk}^{3r}``: levels ``0, r, 2r`` of the stair lattice.

    Part ``j`` holds the points with coordinate sum ``j*r`` modulo ``3rk``
    (modulo ``3r`` when ``full_torus``).  A point of part 0 is joined to
    ``x + v`` for 0/1 vectors ``v`` with ``r`` or ``2r`` ones; a point of
    part 1 to ``x + v`` with ``r`` ones.  Vertex links are bipartite Kneser
    graphs on ``r``-subsets of ``3r`` points.
    """
    if r < 1 or k < 1:
        raise InvalidParams("three-level lattice needs r >= 1 and k >= 1")
    n, N = 3 * r, 3 * r * k
    projected = N ** n // (n if full_torus else N) * 3
    if projected > vertex_cap():
        raise CapacityExceeded(projected, vertex_cap())
    pts = torus_points(n, N)
    level = pts.sum(axis=1) % (n if full_torus else N)
    keep = (level % r == 0) & (level < n)
    low, high = _binary_vectors(n, r), _binary_vectors(n, 2 * r)
    G, dup = _assemble(pts[keep], N, level[keep] // r, 3,
                       [(0, np.concatenate([low, high])), (1, low)])
    if k == 1 or dup:
        warnings.warn(f"three-level lattice with k={k}: {dup} coincident edges merged", stacklevel=2)
    return G
