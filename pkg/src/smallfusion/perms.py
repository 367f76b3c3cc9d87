"""Small permutation groups held as explicit element lists.

Used for automorphism groups, where a full Cayley table would be wasteful
but the element list (a few thousand permutations of at most 128 points) is
cheap.  Permutations compose left to right: ``compose(x, y)`` applies x first.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import UnsupportedOrder


def compose(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return y[x]


def invert(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    out[x] = np.arange(len(x))
    return out


class PermGroup:
    """All elements of <gens>, identity first, with index lookup."""

    def __init__(self, gens: Sequence[np.ndarray], degree: int, limit: int = 1 << 16):
        ident = np.arange(degree, dtype=np.int64)
        gens = [np.asarray(g, dtype=np.int64) for g in gens]
        elems = [ident]
        index = {ident.tobytes(): 0}
        i = 0
        while i < len(elems):
            x = elems[i]
            for g in gens:
                y = g[x]
                k = y.tobytes()
                if k not in index:
                    if len(elems) >= limit:
                        raise UnsupportedOrder(f"permutation group exceeds {limit} elements")
                    index[k] = len(elems)
                    elems.append(y)
            i += 1
        self.degree = degree
        self.gens = gens
        self.elements = np.array(elems, dtype=np.int64).reshape(len(elems), degree)
        self.index = index
        self.order = len(elems)
        self._orders: np.ndarray | None = None
        self._build_codes()

    def _build_codes(self) -> None:
        """Pick base points whose images determine an element, and sort the codes."""
        e = self.elements
        base: list[int] = []
        codes = np.zeros(self.order, dtype=np.int64)
        distinct = 1
        for pt in range(self.degree):
            if distinct == self.order:
                break
            trial = codes * self.degree + e[:, pt]
            n = len(np.unique(trial))
            if n > distinct:
                base.append(pt)
                codes, distinct = trial, n
        self.base = np.asarray(base, dtype=np.int64)
        self._sorter = np.argsort(codes, kind="stable")
        self._sorted_codes = codes[self._sorter]

    def _codes(self, base_images: np.ndarray) -> np.ndarray:
        codes = np.zeros(base_images.shape[0], dtype=np.int64)
        for j in range(base_images.shape[1]):
            codes = codes * self.degree + base_images[:, j]
        return codes

    def lookup(self, base_images: np.ndarray) -> np.ndarray:
        """Indices of the elements with the given images of the base points."""
        codes = self._codes(np.atleast_2d(base_images))
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.minimum(pos, self.order - 1)
        if not (self._sorted_codes[pos] == codes).all():
            raise KeyError("permutation is not in the group")
        return self._sorter[pos]

    def find(self, perm: np.ndarray) -> int:
        return int(self.lookup(np.asarray(perm, dtype=np.int64)[self.base][None, :])[0])

    def mul(self, i: int, j: int) -> int:
        """Index of element i followed by element j."""
        return self.find(self.elements[j][self.elements[i]])

    def inv(self, i: int) -> int:
        return self.find(invert(self.elements[i]))

    def conj(self, i: int, g: int) -> int:
        """g^-1 i g in left-to-right composition."""
        e = self.elements
        return self.find(e[g][e[i][invert(e[g])]])

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            ident = np.arange(self.degree)
            power = self.elements.copy()
            k = 1
            while (orders == 0).any():
                done = (orders == 0) & (power == ident).all(axis=1)
                orders[done] = k
                power = np.take_along_axis(self.elements, power, axis=1)
                k += 1
            self._orders = orders
        return self._orders

    def closure(self, gens: Iterable[int]) -> np.ndarray:
        """Membership mask of the subgroup generated by element indices."""
        gens = [int(g) for g in gens]
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.zeros(1, dtype=np.int64)
        e = self.elements
        while frontier.size:
            if not gens:
                break
            cols = e[frontier][:, self.base]
            found = np.unique(self.lookup(np.concatenate([e[g][cols] for g in gens])))
            found = found[~mask[found]]
            mask[found] = True
            frontier = found
        return mask

    def conjugate_mask(self, mask: np.ndarray, g: int) -> np.ndarray:
        e = self.elements
        ginv = invert(e[g])
        imgs = e[g][e[np.flatnonzero(mask)][:, ginv[self.base]]]
        out = np.zeros(self.order, dtype=bool)
        out[self.lookup(imgs)] = True
        return out

    def generator_powers(self, x: int) -> list[int]:
        """Indices of the generators x^k, gcd(k, |x|) = 1, of the cyclic group <x>."""
        n = int(self.orders[x])
        out = []
        y = np.arange(self.degree)
        for k in range(1, n + 1):
            y = self.elements[x][y]
            if gcd(k, n) == 1:
                out.append(self.find(y))
        return out

    def is_normal(self, mask: np.ndarray) -> bool:
        return all(np.array_equal(self.conjugate_mask(mask, self.find(g)), mask) for g in self.gens)


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def p_prime_overgroups(
    G: PermGroup,
    base: Sequence[int],
    p: int,
    up_to_conjugacy: bool = False,
) -> list[tuple[np.ndarray, tuple[int, ...]]]:
    """Subgroups K >= <base> in which <base> is a Sylow p-subgroup.

    Every such K is generated by <base> together with its p'-elements, so the
    search adds one p'-element at a time.  Returns ``(mask, generators)``
    pairs; with ``up_to_conjugacy`` only one subgroup per G-conjugacy class
    is kept.
    """
    base = [int(b) for b in base]
    bmask = G.closure(base)
    bp = int(bmask.sum())
    if _p_part(bp, p) != bp:
        raise ValueError("base subgroup is not a p-group")
    orders = G.orders
    pprime = [int(x) for x in np.flatnonzero((orders % p != 0) & (orders > 1))]
    pprime.sort(key=lambda x: (int(orders[x]), x))
    base_normal = G.is_normal(bmask)

    found: dict[bytes, tuple[np.ndarray, tuple[int, ...]]] = {}
    class_of: dict[bytes, bytes] = {}

    def register(mask: np.ndarray, gens: tuple[int, ...]) -> bool:
        key = np.packbits(mask).tobytes()
        if key in class_of:
            return False
        if up_to_conjugacy:
            orbit = [mask]
            keys = {key}
            while orbit:
                m = orbit.pop()
                for g in G.gens:
                    c = G.conjugate_mask(m, G.find(g))
                    k = np.packbits(c).tobytes()
                    if k not in keys:
                        keys.add(k)
                        orbit.append(c)
            for k in keys:
                class_of[k] = key
        else:
            class_of[key] = key
        found[key] = (mask, gens)
        return True

    register(bmask, tuple(base))
    queue = [bmask]
    gens_of = {np.packbits(bmask).tobytes(): tuple(base)}
    while queue:
        K = queue.pop(0)
        kgens = gens_of[np.packbits(K).tobytes()]
        done = np.zeros(G.order, dtype=bool)
        first = K is bmask
        useful = np.zeros(G.order, dtype=bool)
        for x in pprime:
            if K[x] or done[x]:
                continue
            J = G.closure(kgens + (x,))
            powers = G.generator_powers(x)
            done[powers] = True
            if _p_part(int(J.sum()), p) != bp:
                continue
            if first:
                useful[powers] = True
            if base_normal and first:
                # over a normal p-subgroup every p'-element of J with the order of x generates J
                same = J & (orders == orders[x])
                done |= same
                useful |= same
            jkey = np.packbits(J).tobytes()
            if register(J, kgens + (x,)):
                gens_of[jkey] = kgens + (x,)
                queue.append(J)
        if first:
            # if <base, x> already has a larger p-part, so does every overgroup
            pprime = [x for x in pprime if useful[x] or bmask[x]]
    return [found[k] for k in found]
