"""Coset complexes of elementary-matrix groups without enumerating the group.

A standard subgroup ``K_tau`` consists exactly of the matrices ``I + N`` with
``N`` supported on a fixed pattern of entries ``(k, j)`` with bounded
``t``-degree.  Column ``j`` of ``g (I + N)`` is therefore ``col_j(g)`` plus an
arbitrary vector of the ``F_q``-space ``W_j`` spanned by ``t^e col_k(g)``
over the pattern entries ``(k, j)``.  Columns vary independently, so the
coset ``g K_tau`` is a product of affine subspaces, and reducing every column
modulo its ``W_j`` gives a canonical element of the coset.
"""
from __future__ import annotations

import numpy as np

from .degrees import el_subgroup_pattern
from .errors import CapacityExceeded
from .groups import ELGroup, ElementSet, coset_labels, standard_subgroups
from .multipartite import PartiteGraph
from .product import vertex_cap

__all__ = ["PatternReducer", "el_coset_complex_bfs"]


def _inverse_table(q: int) -> np.ndarray:
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, q - 2, q)
    return inv


def _rref_mod(A: np.ndarray, q: int, inv: np.ndarray):
    """Batched reduced row echelon form over ``F_q``.

    ``A`` has shape ``(B, r, D)``.  Returns the reduced array and, per row,
    its pivot column (``-1`` for zero rows).
    """
    A = A % q
    B, r, D = A.shape
    row = np.zeros(B, dtype=np.int64)
    pivots = np.full((B, r), -1, dtype=np.int64)
    ar = np.arange(r)
    for c in range(D):
        cand = (A[:, :, c] != 0) & (ar[None, :] >= row[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        p = cand[b].argmax(axis=1)
        rr = row[b]
        top = A[b, rr].copy()
        A[b, rr] = A[b, p]
        A[b, p] = top
        scale = inv[A[b, rr, c]]
        A[b, rr] = (A[b, rr] * scale[:, None]) % q
        f = A[b, :, c].copy()
        f[np.arange(len(b)), rr] = 0
        A[b] = (A[b] - f[:, :, None] * A[b, rr][:, None, :]) % q
        pivots[b, rr] = c
        row[b] += 1
    return A, pivots


class PatternReducer:
    """Canonical elements of cosets ``g K_tau`` in an elementary-matrix group."""

    def __init__(self, G: ELGroup, tau):
        self.G = G
        self.pattern = el_subgroup_pattern(G.m, tau)
        self.inv = _inverse_table(G.q)
        self.sources = {
            j: [(k, min(d, G.s - 1)) for (k, jj), d in sorted(self.pattern.items()) if jj == j]
            for j in range(G.m)
        }

    def canonical(self, rows: np.ndarray) -> np.ndarray:
        G = self.G
        m, s, q = G.m, G.s, G.q
        mats = np.asarray(rows, dtype=np.int64).reshape(-1, m, m, s)
        out = mats.copy()
        for j, src in self.sources.items():
            if not src:
                continue
            vecs = []
            for k, deg in src:
                col = mats[:, :, k, :]
                for e in range(deg + 1):
                    shifted = np.zeros_like(col)
                    shifted[:, :, e:] = col[:, :, : s - e]
                    vecs.append(shifted.reshape(len(mats), m * s))
            span = np.stack(vecs, axis=1)
            red, piv = _rref_mod(span, q, self.inv)
            v = mats[:, :, j, :].reshape(len(mats), m * s).copy()
            idx = np.arange(len(mats))
            for i in range(red.shape[1]):
                pc = piv[:, i]
                ok = pc >= 0
                coef = np.where(ok, v[idx, np.maximum(pc, 0)], 0)
                v = (v - coef[:, None] * red[:, i, :]) % q
            out[:, :, j, :] = v.reshape(len(mats), m, s)
        return out.reshape(len(mats), G.width)

    def key(self, rows: np.ndarray) -> np.ndarray:
        return self.G.key(self.canonical(rows))


def el_coset_complex_bfs(m: int, q: int, s: int, cap: int | None = None,
                         batch: int = 4096, progress=None) -> PartiteGraph:
    """Coset complex of the standard system of ``EL_m(F_q[t]/t^s)`` by breadth-first search.

    Only the subgroups ``K_i`` are enumerated.  Labels are canonical coset
    elements as tuples; parts are ordered by canonical key.
    """
    cap = vertex_cap() if cap is None else cap
    G = ELGroup(m, q, s)
    subs = standard_subgroups(G)
    reducers = [PatternReducer(G, (i,)) for i in range(m)]
    # transversal of K_i / (K_i & K_j): the type-j neighbours of g K_i are g t K_j
    trans = {}
    for i in range(m):
        for j in range(m):
            if i != j:
                lab, reps = coset_labels(G, subs[i].intersection(subs[j]), ambient=subs[i])
                trans[(i, j)] = reps
    known = [np.zeros(0, dtype=np.int64) for _ in range(m)]
    rows_of = [[] for _ in range(m)]
    frontier = []
    for i in range(m):
        k = reducers[i].key(G.identity[None, :])
        known[i] = k
        rows_of[i].append(reducers[i].canonical(G.identity[None, :]))
        frontier.append(rows_of[i][0])
    edge_keys = {(i, j): [] for i in range(m) for j in range(m) if i < j}
    total = m
    while any(len(f) for f in frontier):
        new_frontier = [[] for _ in range(m)]
        for i in range(m):
            F = frontier[i]
            if len(F) == 0:
                continue
            src_keys = reducers[i].G.key(F)
            for j in range(m):
                if j == i:
                    continue
                T = trans[(i, j)]
                for a in range(0, len(F), max(1, batch // len(T))):
                    blk = F[a:a + max(1, batch // len(T))]
                    prod = G.mul_rows(blk[:, None, :], T[None, :, :]).reshape(-1, G.width)
                    canon = reducers[j].canonical(prod)
                    keys = G.key(canon)
                    if i < j:
                        sk = np.repeat(src_keys[a:a + len(blk)], len(T))
                        edge_keys[(i, j)].append(np.stack([sk, keys], axis=1))
                    uk, first = np.unique(keys, return_index=True)
                    fresh = ~np.isin(uk, known[j], assume_unique=True)
                    if fresh.any():
                        known[j] = np.union1d(known[j], uk[fresh])
                        new_frontier[j].append(canon[first[fresh]])
                        total += int(fresh.sum())
                        if total > cap:
                            raise CapacityExceeded(total, cap)
        frontier = [np.concatenate(f) if f else np.zeros((0, G.width), np.int64) for f in new_frontier]
        for i in range(m):
            if len(frontier[i]):
                rows_of[i].append(frontier[i])
        if progress:
            progress(total)
    # vertices of type i sorted by key; known[i] is already sorted
    offs = np.concatenate([[0], np.cumsum([len(k) for k in known])])
    blocks = []
    for (i, j), parts in edge_keys.items():
        if not parts:
            continue
        e = np.unique(np.concatenate(parts), axis=0)
        u = np.searchsorted(known[i], e[:, 0]) + offs[i]
        v = np.searchsorted(known[j], e[:, 1]) + offs[j]
        blocks.append(np.stack([u, v], axis=1))
    labels = [tuple(r) for i in range(m) for r in G.unkey(known[i]).tolist()]
    return PartiteGraph([len(k) for k in known], np.concatenate(blocks), labels=labels)
