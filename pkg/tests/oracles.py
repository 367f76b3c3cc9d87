"""Brute-force reference computations used to derive and freeze expected values.

These deliberately avoid the package's own search code: they only read the
Cayley table of a group (or work with raw permutation tuples).
"""

from __future__ import annotations

from itertools import product

import numpy as np


def closure(G, gens) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.mul[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def greedy_generators(G) -> list[int]:
    gens: list[int] = []
    span = {0}
    for x in sorted(range(G.order), key=lambda e: -int(G.elt_order[e])):
        if x not in span:
            gens.append(x)
            span = closure(G, gens)
        if len(span) == G.order:
            break
    return gens


def _map_from_images(G, H, gens, images):
    """Extend gens -> images along a spanning tree of the Cayley graph; None if inconsistent."""
    f = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y = int(G.mul[x, g])
                img = int(H.mul[f[x], h])
                if y in f:
                    if f[y] != img:
                        return None
                else:
                    f[y] = img
                    nxt.append(y)
        frontier = nxt
    return np.array([f[x] for x in range(G.order)])


def brute_homs(G, H, bijective=True):
    """Every homomorphism G -> H (bijective ones only by default), by generator images."""
    gens = greedy_generators(G)
    pools = [[y for y in range(H.order) if int(G.elt_order[g]) % int(H.elt_order[y]) == 0
              and (not bijective or H.elt_order[y] == G.elt_order[g])] for g in gens]
    out = []
    for images in product(*pools):
        f = _map_from_images(G, H, gens, images)
        if f is None:
            continue
        if bijective and len(set(f.tolist())) != G.order:
            continue
        if np.array_equal(f[G.mul], H.mul[f[:, None], f[None, :]]):
            out.append(f)
    return out


def brute_aut_order(G) -> int:
    return len(brute_homs(G, G))


def brute_isomorphic(G, H) -> bool:
    return G.order == H.order and bool(brute_homs(G, H))


def involutions(G) -> list[int]:
    return [x for x in range(1, G.order) if G.mul[x, x] == 0]


def brute_p_rank(G) -> int:
    """Largest r with an elementary abelian 2-subgroup of order 2^r, by exhaustive growth."""
    invs = involutions(G)
    best = 0
    seen: set[frozenset] = set()
    frontier = [frozenset({0})]
    rank = 0
    while frontier:
        best = rank
        nxt = []
        for E in frontier:
            for x in invs:
                if x in E or any(G.mul[x, e] != G.mul[e, x] for e in E):
                    continue
                F = frozenset(E | {int(G.mul[e, x]) for e in E})
                if F not in seen:
                    seen.add(F)
                    nxt.append(F)
        frontier = nxt
        rank += 1
    return best


def is_associative(G) -> bool:
    m = G.mul.astype(np.int64)
    left = m[m[:, :, None], np.arange(G.order)[None, None, :]]
    right = m[np.arange(G.order)[:, None, None], m[None, :, :]]
    return bool(np.array_equal(left, right))


# ------------------------------------------------------------ permutations

def compose(p, q):
    """Apply p, then q."""
    return tuple(q[i] for i in p)


def perm_inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_closure(gens) -> set[tuple[int, ...]]:
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def cycles_to_perm(n: int, *cycles) -> tuple[int, ...]:
    p = list(range(n))
    for c in cycles:
        for i, x in enumerate(c):
            p[x] = c[(i + 1) % len(c)]
    return tuple(p)


def fusion_class_sizes(ambient, sylow) -> list[int]:
    """Sizes of the classes of ``sylow`` elements under conjugation by ``ambient``."""
    S = set(sylow)
    left = set(S)
    sizes = []
    while left:
        x = left.pop()
        cls = {compose(compose(perm_inverse(g), x), g) for g in ambient} & S
        left -= cls
        sizes.append(len(cls))
    return sorted(sizes)


def element_orbits(n: int, maps) -> list[list[int]]:
    """Orbits of {0..n-1} under partial maps (arrays with -1 outside the domain)."""
    adj = [set() for _ in range(n)]
    for m in maps:
        for x in np.flatnonzero(np.asarray(m) >= 0):
            adj[int(x)].add(int(m[x]))
            adj[int(m[x])].add(int(x))
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        orbit, stack = [], [s]
        seen[s] = True
        while stack:
            x = stack.pop()
            orbit.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        out.append(sorted(orbit))
    return sorted(out)
