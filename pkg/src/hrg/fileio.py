"""Plain-text graph files, JSON reports and DOT export.

Graph file layout::

    #hrg v1
    #manifest {"command": ...}
    #part 0 12
    #part 1 12
    #label 0 (0, 1, 2)
    0 12
    ...

Labels are written with ``repr`` and read back with ``ast.literal_eval``
when possible, otherwise kept as strings.
"""
from __future__ import annotations

import ast
import json
from typing import TextIO

import numpy as np

from .errors import InvalidParams
from .multipartite import PartiteGraph

__all__ = ["write_graph", "read_graph", "to_dot", "DOT_LIMIT"]

HEADER = "#hrg v1"
DOT_LIMIT = 2000


def write_graph(G: PartiteGraph, fh: TextIO, manifest: dict | None = None) -> None:
    fh.write(HEADER + "\n")
    if manifest is not None:
        fh.write("#manifest " + json.dumps(manifest, sort_keys=True) + "\n")
    for p, size in enumerate(G.sizes):
        fh.write(f"#part {G.types[p]} {size}\n")
    if G.labels is not None:
        for v, lab in enumerate(G.labels):
            fh.write(f"#label {v} {lab!r}\n")
    np.savetxt(fh, G.edges, fmt="%d")


def _parse_label(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def read_graph(fh: TextIO) -> tuple[PartiteGraph, dict | None]:
    """Parse a graph file; returns the graph and its manifest (if any)."""
    first = fh.readline().strip()
    if first != HEADER:
        raise InvalidParams(f"not an hrg v1 file (header {first!r})")
    types, sizes, labels, edges = [], [], {}, []
    manifest = None
    for lineno, line in enumerate(fh, start=2):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#manifest "):
            manifest = json.loads(line[len("#manifest "):])
        elif line.startswith("#part "):
            _, t, s = line.split()
            types.append(int(t))
            sizes.append(int(s))
        elif line.startswith("#label "):
            _, v, rest = line.split(" ", 2)
            labels[int(v)] = _parse_label(rest)
        elif line.startswith("#"):
            continue
        else:
            try:
                u, v = line.split()
                edges.append((int(u), int(v)))
            except ValueError:
                raise InvalidParams(f"line {lineno}: expected 'u v', got {line!r}") from None
    n = sum(sizes)
    lab = None
    if labels:
        if sorted(labels) != list(range(n)):
            raise InvalidParams("labels must cover every vertex exactly once")
        lab = [labels[v] for v in range(n)]
    G = PartiteGraph(sizes, np.array(edges, dtype=np.int64).reshape(-1, 2), labels=lab, types=types)
    return G, manifest


def to_dot(G: PartiteGraph) -> str:
    """Graphviz text with one cluster per part (graphs under ``DOT_LIMIT`` vertices)."""
    if G.n_vertices >= DOT_LIMIT:
        raise InvalidParams(f"DOT export is limited to fewer than {DOT_LIMIT} vertices")
    lines = ["graph hrg {"]
    for p in range(G.n_parts):
        lines.append(f"  subgraph cluster_{G.types[p]} {{ label=\"type {G.types[p]}\";")
        for v in G.part(p):
            lab = str(G.label(v)).replace('"', "'")
            lines.append(f'    {v} [label="{lab}"];')
        lines.append("  }")
    for u, v in G.edges.tolist():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
