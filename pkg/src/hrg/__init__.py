"""Hyper-regular multipartite graphs: products, coset complexes and spectral checks."""
from __future__ import annotations

__version__ = "0.1.0"

from .multipartite import (  # noqa: E402
    DegreeProfile,
    Face,
    PartiteGraph,
    degree_profile,
    enumerate_cliques,
    is_connected,
    is_pure,
    is_strongly_gallery_connected,
    link,
    type_regularity,
)
from .product import partite_product, relabel, symmetrize  # noqa: E402
