"""Desk-scale planarity test backing the ``builtin_is_planar`` builtin.

The test reduces the graph (drop loops and parallel edges, prune vertices of
degree <= 1, smooth degree-2 vertices), applies the quick accept / Euler
reject bounds, and otherwise searches exhaustively for a K5 or K3,3
subdivision. The search kernel is compiled with Cython when the extension is
available; set ``ECOMINI_PURE_PYTHON=1`` to force the Python kernel.
"""

from __future__ import annotations

import os
from typing import Iterable

from . import _search_py

MAX_VERTICES = _search_py.MAX_VERTICES

py_kernel = _search_py.has_kuratowski_subdivision

try:
    if os.environ.get("ECOMINI_PURE_PYTHON"):
        raise ImportError("pure-Python kernel requested")
    from . import _search_c  # type: ignore[attr-defined]

    c_kernel = _search_c.has_kuratowski_subdivision
    BACKEND = "cython"
except ImportError:
    c_kernel = None
    BACKEND = "python"

kernel = c_kernel or py_kernel


def simple_edges(edges: Iterable[tuple[int, int]]) -> set[frozenset]:
    out = set()
    for u, v in edges:
        if u != v:
            out.add(frozenset((u, v)))
    return out


def reduce_graph(edges: set[frozenset]) -> dict[int, set[int]]:
    """Prune degree <= 1 vertices and smooth degree-2 vertices until stable.

    Both operations preserve planarity and the presence of a Kuratowski
    subdivision; the result is a simple graph with minimum degree >= 3.
    """
    adj: dict[int, set[int]] = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    work = list(adj)
    while work:
        v = work.pop()
        nbrs = adj.get(v)
        if nbrs is None:
            continue
        if len(nbrs) <= 1:
            for u in nbrs:
                adj[u].discard(v)
                work.append(u)
            del adj[v]
        elif len(nbrs) == 2:
            a, b = nbrs
            adj[a].discard(v)
            adj[b].discard(v)
            del adj[v]
            adj[a].add(b)
            adj[b].add(a)
            work.extend((a, b))
    return adj


def is_planar(edges: Iterable[tuple[int, int]], search=None) -> bool:
    """True iff the graph spanned by ``edges`` is planar.

    Raises ValueError when the edges touch more than ``MAX_VERTICES`` vertices.
    """
    simple = simple_edges(edges)
    vertices = set()
    for e in simple:
        vertices |= e
    if len(vertices) > MAX_VERTICES:
        raise ValueError(f"planarity test supports at most {MAX_VERTICES} vertices, got {len(vertices)}")
    m, n = len(simple), len(vertices)
    if m <= 8:
        return True
    if n >= 3 and m > 3 * n - 6:
        return False

    adj = reduce_graph(simple)
    n = len(adj)
    m = sum(len(s) for s in adj.values()) // 2
    if m <= 8:
        return True
    if m > 3 * n - 6:
        return False
    index = {v: i for i, v in enumerate(sorted(adj))}
    masks = [0] * n
    for v, nbrs in adj.items():
        mask = 0
        for u in nbrs:
            mask |= 1 << index[u]
        masks[index[v]] = mask
    return not (search or kernel)(n, masks)
