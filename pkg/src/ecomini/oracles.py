"""Host-side reference oracles used by the test suite.

None of these are reachable from ECO-mini programs. Connectivity has two
independent implementations (breadth-first search and union-find) so they
can be checked against each other; planarity defers to networkx, which
shares no code with the builtin's subdivision search.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

import networkx as nx
from scipy.cluster.hierarchy import DisjointSet

Partition = frozenset  # frozenset of frozensets of vertex ids


def oracle_connected(edges: Iterable[tuple[int, int]], vertices: Iterable[int]) -> Partition:
    """Exact partition of ``vertices`` into connected components, by BFS from scratch."""
    vertices = list(vertices)
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen: set[int] = set()
    blocks = []
    for s in vertices:
        if s in seen:
            continue
        seen.add(s)
        block = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    block.append(y)
                    queue.append(y)
        blocks.append(frozenset(block))
    return frozenset(blocks)


def union_find_partition(edges: Iterable[tuple[int, int]], vertices: Iterable[int]) -> Partition:
    ds = DisjointSet(list(vertices))
    for u, v in edges:
        ds.merge(u, v)
    return frozenset(frozenset(s) for s in ds.subsets())


def is_connected_verdict(partition: Partition) -> bool:
    """Connectivity verdict under the library's convention: at most one component."""
    return len(partition) <= 1


def oracle_is_planar(edges: Iterable[tuple[int, int]]) -> bool:
    g = nx.Graph()
    g.add_edges_from((u, v) for u, v in edges if u != v)
    return nx.check_planarity(g)[0]
