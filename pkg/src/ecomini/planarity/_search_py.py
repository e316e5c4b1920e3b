"""Pure-Python Kuratowski subdivision search over bitmask adjacency.

Counterpart of ``_search_c.pyx``; both take a reduced simple graph on at most
``MAX_VERTICES`` vertices given as one adjacency bitmask per vertex, and both
explore branch sets and path systems in the same order.
"""

from itertools import combinations

MAX_VERTICES = 12


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _route(adj, pairs, k, used, need):
    """Try to connect pairs[k:] by internally vertex-disjoint paths avoiding ``used``."""
    if k == len(pairs):
        return True
    a, b = pairs[k]
    bbit = 1 << b
    need[a] -= 1
    need[b] -= 1
    try:
        if adj[a] & bbit and _feasible(adj, pairs, k + 1, used, need) and _route(adj, pairs, k + 1, used, need):
            return True
        # Depth-first over simple paths a -> ... -> b whose interior avoids ``used``.
        stack = [(a, adj[a] & ~used, used)]
        while stack:
            v, cand, cur_used = stack[-1]
            if not cand:
                stack.pop()
                continue
            low = cand & -cand
            stack[-1] = (v, cand ^ low, cur_used)
            w = low.bit_length() - 1
            w_used = cur_used | low
            if adj[w] & bbit and _feasible(adj, pairs, k + 1, w_used, need) and _route(adj, pairs, k + 1, w_used, need):
                return True
            stack.append((w, adj[w] & ~w_used, w_used))
        return False
    finally:
        need[a] += 1
        need[b] += 1


def _feasible(adj, pairs, k, used, need):
    """Each branch vertex must keep enough free or directly usable neighbours for its remaining paths."""
    for v, count in need.items():
        if count and _popcount(adj[v] & ~used) + _direct(adj, pairs, k, v) < count:
            return False
    return True


def _direct(adj, pairs, k, v):
    n = 0
    for a, b in pairs[k:]:
        if a == v and adj[a] >> b & 1:
            n += 1
        elif b == v and adj[b] >> a & 1:
            n += 1
    return n


def _paths_exist(adj, branch, pairs):
    used = 0
    for v in branch:
        used |= 1 << v
    need = {v: 0 for v in branch}
    for a, b in pairs:
        need[a] += 1
        need[b] += 1
    return _feasible(adj, pairs, 0, used, need) and _route(adj, pairs, 0, used, need)


def has_k5_subdivision(n: int, adj: list) -> bool:
    cand = [v for v in range(n) if _popcount(adj[v]) >= 4]
    for branch in combinations(cand, 5):
        pairs = list(combinations(branch, 2))
        if _paths_exist(adj, branch, pairs):
            return True
    return False


def has_k33_subdivision(n: int, adj: list) -> bool:
    cand = [v for v in range(n) if _popcount(adj[v]) >= 3]
    for six in combinations(cand, 6):
        first, rest = six[0], six[1:]
        for pair in combinations(rest, 2):
            side_a = (first,) + pair
            side_b = tuple(v for v in rest if v not in pair)
            pairs = [(a, b) for a in side_a for b in side_b]
            if _paths_exist(adj, six, pairs):
                return True
    return False


def has_kuratowski_subdivision(n: int, adj: list) -> bool:
    if n > MAX_VERTICES:
        raise ValueError(f"subdivision search supports at most {MAX_VERTICES} vertices, got {n}")
    return has_k5_subdivision(n, adj) or has_k33_subdivision(n, adj)
