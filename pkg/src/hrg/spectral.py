"""Random-walk spectra of weighted skeletons and high-dimensional expansion certificates.

The transition matrix of a weighted graph is ``T = D^-1 W``.  Its spectrum
is real because ``T`` is similar to ``D^-1/2 W D^-1/2``, which is what the
eigensolvers see.  Isolated vertices are dropped first; they only add zeros
to the spectrum.  ``lambda_2`` is the second entry of the spectrum sorted in
decreasing order, counted with multiplicity.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix, diags
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import eigsh

from .errors import BoundUndefined, Disconnected, EmptyGraph, NotBiregular, NotPure
from .multipartite import (
    PartiteGraph,
    _sparse,
    _walk,
    edge_common_counts,
    is_connected,
    is_pure,
    link,
)

__all__ = [
    "WeightedSkeleton",
    "link_weights",
    "transition_spectrum",
    "transition_lambda2",
    "biregular_spectrum_relation_check",
    "trickling_bound",
    "hdx_certificate",
    "HDXCertificate",
    "DENSE_LIMIT",
]

DENSE_LIMIT = 20_000


@dataclass
class WeightedSkeleton:
    graph: PartiteGraph
    weights: np.ndarray

    def matrix(self) -> csr_matrix:
        n = self.graph.n_vertices
        e = self.graph.edges
        w = np.asarray(self.weights, dtype=np.float64)
        return csr_matrix(
            (np.concatenate([w, w]), (np.concatenate([e[:, 0], e[:, 1]]),
                                      np.concatenate([e[:, 1], e[:, 0]]))),
            shape=(n, n),
        )


def _count_top(bits, masks_by_part, parts, mask):
    """Number of cliques with one vertex in each of ``parts`` inside ``mask``."""
    if not parts:
        return 1
    p, rest = parts[0], parts[1:]
    total = 0
    cand = mask & masks_by_part[p]
    while cand:
        low = cand & -cand
        cand ^= low
        total += _count_top(bits, masks_by_part, rest, mask & bits[low.bit_length() - 1])
    return total


def link_weights(X: PartiteGraph, clique=()) -> WeightedSkeleton:
    """1-skeleton of the link of ``clique`` weighted by top-face counts.

    An edge of the link weighs the number of top-dimensional cliques of the
    link that contain it.  For a 1-dimensional link every weight is 1.

    Raises
    ------
    NotPure
        If the complex is not pure.
    """
    if not is_pure(X):
        raise NotPure("weights need a pure complex")
    return _weights(link(X, clique) if len(clique) else X)


def _weights(L: PartiteGraph) -> WeightedSkeleton:
    if L.n_parts <= 2:
        return WeightedSkeleton(L, np.ones(L.n_edges))
    if _sparse(L):
        return WeightedSkeleton(L, edge_common_counts(L).astype(np.float64))
    bits = L.neighbor_bits()
    masks = L.part_masks()
    w = np.empty(L.n_edges, dtype=np.float64)
    for a, (u, v) in enumerate(L.edges.tolist()):
        pu, pv = L.part_of[u], L.part_of[v]
        others = [p for p in range(L.n_parts) if p not in (pu, pv)]
        w[a] = _count_top(bits, masks, others, bits[u] & bits[v])
    return WeightedSkeleton(L, w)


def _symmetric_operator(W: csr_matrix):
    deg = np.asarray(W.sum(axis=1)).ravel()
    live = deg > 0
    W = W[live][:, live]
    d = deg[live]
    s = 1.0 / np.sqrt(d)
    return diags(s) @ W @ diags(s), live


def _edges_weights(skel):
    if isinstance(skel, WeightedSkeleton):
        return skel.graph.n_vertices, skel.graph.edges, np.asarray(skel.weights, dtype=np.float64)
    return skel.n_vertices, skel.edges, np.ones(skel.n_edges)


def _dense_operator(n, e, w):
    """Symmetric conjugate ``D^-1/2 W D^-1/2`` on the non-isolated vertices, and connectivity."""
    W = np.zeros((n, n))
    W[e[:, 0], e[:, 1]] = w
    W[e[:, 1], e[:, 0]] = w
    deg = W.sum(axis=1)
    live = deg > 0
    W = W[np.ix_(live, live)]
    s = 1.0 / np.sqrt(deg[live])
    reach = np.zeros(len(W), dtype=bool)
    reach[0] = True
    while True:
        nxt = reach | (W[reach].sum(axis=0) > 0)
        if nxt.sum() == reach.sum():
            break
        reach = nxt
    return W * s[:, None] * s[None, :], bool(reach.all())


def _spectrum(skel, dense_limit: int, k: int | None):
    """Decreasing transition eigenvalues and whether the non-isolated part is connected."""
    n, e, w = _edges_weights(skel)
    if n == 0 or len(e) == 0:
        raise EmptyGraph("no edges")
    live = np.zeros(n, dtype=bool)
    live[e.ravel()] = True
    if live.sum() <= dense_limit:
        S, connected = _dense_operator(n, e, w)
        return np.linalg.eigvalsh(S)[::-1], connected
    W = skel.matrix() if isinstance(skel, WeightedSkeleton) else skel.adjacency()
    S, _ = _symmetric_operator(W)
    connected = connected_components(S, directed=False)[0] == 1
    vals = eigsh(S, k=k or 6, which="LA", return_eigenvectors=False, tol=1e-12)
    return np.sort(vals)[::-1], connected


def transition_spectrum(skel: WeightedSkeleton | PartiteGraph, dense_limit: int = DENSE_LIMIT,
                        k: int | None = None) -> np.ndarray:
    """Eigenvalues of the transition matrix in decreasing order.

    Isolated vertices are dropped first.  Above ``dense_limit`` vertices
    only the ``k`` (default 6) largest are computed iteratively.
    """
    return _spectrum(skel, dense_limit, k)[0]


def transition_lambda2(skel: WeightedSkeleton | PartiteGraph, dense_limit: int = DENSE_LIMIT) -> float:
    """Second largest transition eigenvalue.

    Raises
    ------
    Disconnected
        If the graph (isolated vertices ignored) is disconnected; then
        ``lambda_2 = 1`` by definition.
    """
    vals, connected = _spectrum(skel, dense_limit, 2)
    if not connected:
        raise Disconnected("graph has more than one component")
    return float(vals[1]) if len(vals) > 1 else -1.0


def biregular_spectrum_relation_check(G: PartiteGraph, tol: float = 1e-9) -> bool:
    """Check ``spec(T) = spec(A) / sqrt(d k)`` for a ``(d, k)``-biregular bipartite graph.

    ``T`` is diagonalised directly as a non-symmetric matrix, so the check
    does not go through the symmetric conjugate.
    """
    if G.n_parts != 2:
        raise NotBiregular("graph is not bipartite with two parts")
    deg = G.degrees()
    d_set = set(deg[: G.sizes[0]].tolist())
    k_set = set(deg[G.sizes[0]:].tolist())
    if len(d_set) != 1 or len(k_set) != 1 or 0 in d_set | k_set:
        raise NotBiregular(f"degrees {sorted(d_set)} / {sorted(k_set)}")
    d, k = d_set.pop(), k_set.pop()
    A = G.adjacency().toarray()
    T = A / deg[:, None]
    t = np.sort(np.linalg.eigvals(T).real)
    a = np.sort(np.linalg.eigvalsh(A)) / np.sqrt(d * k)
    return bool(np.allclose(t, a, atol=tol, rtol=0))


def trickling_bound(lam: float, d: int) -> float:
    """``lam / (1 - (d-1) lam)``; undefined once ``(d-1) lam >= 1``."""
    if (d - 1) * lam >= 1:
        raise BoundUndefined(f"(d-1)*lambda = {(d - 1) * lam} >= 1")
    return lam / (1 - (d - 1) * lam)


@dataclass
class HDXCertificate:
    target: float
    tolerance: float
    global_lambda2: float
    link_lambda2: dict = field(default_factory=dict)
    max_link_lambda2: float = float("-inf")
    trickle_mu: float | None = None
    connected: bool = True
    worst_link: tuple = ()

    @property
    def verdict(self) -> bool:
        return self.connected and max(self.global_lambda2, self.max_link_lambda2) <= self.target + self.tolerance

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "tolerance": self.tolerance,
            "global_lambda2": self.global_lambda2,
            "max_link_lambda2": self.max_link_lambda2,
            "worst_link": list(self.worst_link),
            "links_checked": len(self.link_lambda2),
            "trickle_mu": self.trickle_mu,
            "connected": self.connected,
            "verdict": "pass" if self.verdict else "fail",
        }


def _lambda2_or_one(skel):
    try:
        return transition_lambda2(skel), True
    except Disconnected:
        return 1.0, False


def hdx_certificate(X: PartiteGraph, target: float, tol: float = 1e-9, jobs: int = 1,
                    include_global: bool = True) -> HDXCertificate:
    """Certify ``lambda_2 <= target`` for the complex and all links of dimension >= 1.

    A clique of size ``j`` has a link of dimension ``n - j`` where ``n`` is
    the number of parts minus one; links of every clique with ``j <= n - 1``
    are checked with their own top-face weights.  ``trickle_mu`` is the
    trickling-down bound from the worst 1-dimensional link, or ``None`` when
    the bound is undefined.
    """
    if not is_pure(X):
        raise NotPure("certificate needs a pure complex")
    if not is_connected(X):
        raise Disconnected("complex is disconnected")
    n = X.n_parts - 1
    if _sparse(X):
        cliques = [(v,) for v in range(X.n_vertices)] if n == 2 else []
    else:
        cliques = [c for c, _ in _walk(X, n - 1) if c]
    glob = _lambda2_or_one(_weights(X))[0] if include_global else float("-inf")

    def one(c):
        return c, _lambda2_or_one(_weights(link(X, c)))

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(one, cliques))
    else:
        results = [one(c) for c in cliques]
    cert = HDXCertificate(target, tol, glob)
    worst_1d = float("-inf")
    for c, (lam, ok) in results:
        cert.link_lambda2[c] = lam
        cert.connected &= ok
        if lam > cert.max_link_lambda2:
            cert.max_link_lambda2 = lam
            cert.worst_link = c
        if len(c) == n - 1:
            worst_1d = max(worst_1d, lam)
    if n >= 2 and worst_1d > float("-inf"):
        try:
            cert.trickle_mu = trickling_bound(worst_1d, n)
        except BoundUndefined:
            cert.trickle_mu = None
    return cert
