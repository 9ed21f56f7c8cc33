import itertools
import os
import warnings

import numpy as np
import pytest

from hrg.multipartite import PartiteGraph, is_pure


def pytest_collection_modifyitems(config, items):
    if os.environ.get("HRG_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="stretch run; set HRG_STRETCH=1")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def random_partite(rng, sizes, p_edge=0.6):
    sizes = tuple(int(s) for s in sizes)
    offs = np.concatenate([[0], np.cumsum(sizes)])
    edges = []
    for a, b in itertools.combinations(range(len(sizes)), 2):
        for u in range(offs[a], offs[a + 1]):
            for v in range(offs[b], offs[b + 1]):
                if rng.random() < p_edge:
                    edges.append((u, v))
    return PartiteGraph(sizes, np.array(edges, dtype=np.int64).reshape(-1, 2))


def random_pure_tripartite(rng, max_part=6):
    """Union of random triangles, so every vertex and edge lies in a triangle."""
    sizes = [int(rng.integers(1, max_part + 1)) for _ in range(3)]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    tris = set()
    # cover every vertex, then sprinkle extra triangles
    for p in range(3):
        for v in range(sizes[p]):
            t = [int(rng.integers(sizes[q])) for q in range(3)]
            t[p] = v
            tris.add(tuple(t))
    for _ in range(int(rng.integers(0, 2 * max(sizes)))):
        tris.add(tuple(int(rng.integers(sizes[q])) for q in range(3)))
    edges = set()
    for t in tris:
        g = [offs[q] + t[q] for q in range(3)]
        edges.update({(g[0], g[1]), (g[0], g[2]), (g[1], g[2])})
    G = PartiteGraph(sizes, np.array(sorted(edges)))
    return G if is_pure(G) else random_pure_tripartite(rng, max_part)


def random_biregular(rng, n_left, d, n_right=None, tries=200):
    """Connected ``(d, k)``-biregular bipartite graph built from a shuffled stub matching."""
    from scipy.sparse.csgraph import connected_components

    n_right = n_left if n_right is None else n_right
    total = n_left * d
    if total % n_right:
        raise ValueError("n_left * d must be divisible by n_right")
    k = total // n_right
    for _ in range(tries):
        left = np.repeat(np.arange(n_left), d)
        right = np.repeat(np.arange(n_right), k)
        rng.shuffle(right)
        pairs = set(zip(left.tolist(), right.tolist()))
        if len(pairs) != total:
            continue
        G = PartiteGraph((n_left, n_right), [(u, n_left + v) for u, v in pairs])
        if connected_components(G.adjacency(), directed=False)[0] == 1:
            return G
    raise RuntimeError("no simple connected biregular graph found")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(autouse=True)
def _quiet_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        yield
