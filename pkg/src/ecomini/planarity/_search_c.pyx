# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Kuratowski subdivision search; mirrors ``_search_py`` step for step."""

from itertools import combinations

cdef enum:
    NMAX = 12
    PMAX = 10

cdef extern from *:
    int __builtin_popcount(unsigned int) nogil
    int __builtin_ctz(unsigned int) nogil


cdef struct Search:
    unsigned int adj[NMAX]
    int pa[PMAX]
    int pb[PMAX]
    int npairs
    int need[NMAX]
    int nbranch
    int branch[6]


cdef bint feasible(Search* s, int k, unsigned int used) nogil:
    cdef int i, j, v, direct
    for i in range(s.nbranch):
        v = s.branch[i]
        if s.need[v] == 0:
            continue
        direct = 0
        for j in range(k, s.npairs):
            if s.pa[j] == v and (s.adj[v] >> s.pb[j]) & 1:
                direct += 1
            elif s.pb[j] == v and (s.adj[v] >> s.pa[j]) & 1:
                direct += 1
        if __builtin_popcount(s.adj[v] & ~used) + direct < s.need[v]:
            return False
    return True


cdef bint extend(Search* s, int k, int v, int b, unsigned int used) nogil:
    cdef unsigned int cand = s.adj[v] & ~used
    cdef unsigned int low, wused
    cdef int w
    while cand:
        low = cand & (~cand + 1)
        cand ^= low
        w = __builtin_ctz(low)
        wused = used | low
        if (s.adj[w] >> b) & 1 and feasible(s, k + 1, wused) and route(s, k + 1, wused):
            return True
        if extend(s, k, w, b, wused):
            return True
    return False


cdef bint route(Search* s, int k, unsigned int used) nogil:
    if k == s.npairs:
        return True
    cdef int a = s.pa[k]
    cdef int b = s.pb[k]
    cdef bint ok = False
    s.need[a] -= 1
    s.need[b] -= 1
    if (s.adj[a] >> b) & 1 and feasible(s, k + 1, used) and route(s, k + 1, used):
        ok = True
    elif extend(s, k, a, b, used):
        ok = True
    s.need[a] += 1
    s.need[b] += 1
    return ok


cdef bint paths_exist(Search* s, branch, pairs):
    cdef unsigned int used = 0
    cdef int i
    s.nbranch = len(branch)
    for i in range(NMAX):
        s.need[i] = 0
    for i, v in enumerate(branch):
        s.branch[i] = v
        used |= 1u << <int>v
    s.npairs = len(pairs)
    for i, (a, b) in enumerate(pairs):
        s.pa[i] = a
        s.pb[i] = b
        s.need[<int>a] += 1
        s.need[<int>b] += 1
    with nogil:
        return feasible(s, 0, used) and route(s, 0, used)


def has_kuratowski_subdivision(int n, adj):
    if n > NMAX:
        raise ValueError(f"subdivision search supports at most {NMAX} vertices, got {n}")
    cdef Search s
    cdef int v
    for v in range(n):
        s.adj[v] = adj[v]
    cand = [v for v in range(n) if __builtin_popcount(s.adj[v]) >= 4]
    for branch in combinations(cand, 5):
        if paths_exist(&s, branch, list(combinations(branch, 2))):
            return True
    cand = [v for v in range(n) if __builtin_popcount(s.adj[v]) >= 3]
    for six in combinations(cand, 6):
        first, rest = six[0], six[1:]
        for pair in combinations(rest, 2):
            side_a = (first,) + pair
            side_b = tuple(v for v in rest if v not in pair)
            if paths_exist(&s, six, [(a, b) for a in side_a for b in side_b]):
                return True
    return False
