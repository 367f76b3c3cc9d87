"""Subgroups as element bitsets, the standard characteristic subgroups, and
subgroup enumeration up to conjugacy."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import get_caps
from .errors import CapExceeded
from .group import Group, subgroup_as_group


def closure_mask(G: Group, gens: Iterable[int]) -> np.ndarray:
    """Boolean mask of the subgroup generated by ``gens``."""
    gens = np.unique(np.asarray([int(g) for g in gens] or [0], dtype=np.int64))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int64)
    mul = G.mul
    while frontier.size:
        new = np.unique(mul[frontier[:, None], gens[None, :]].ravel())
        new = new[~mask[new]]
        mask[new] = True
        frontier = new.astype(np.int64)
    return mask


def _mask_key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


class Subgroup:
    """A subgroup of ``parent`` stored as a boolean membership mask."""

    __slots__ = ("parent", "mask", "_gens", "__dict__")

    def __init__(self, parent: Group, mask: np.ndarray, gens: Sequence[int] | None = None):
        mask = np.asarray(mask, dtype=bool)
        mask.flags.writeable = False
        self.parent = parent
        self.mask = mask
        self._gens = tuple(int(g) for g in gens) if gens is not None else None

    @classmethod
    def generated(cls, G: Group, gens: Iterable[int]) -> "Subgroup":
        gens = [int(g) for g in gens if int(g) != 0]
        return cls(G, closure_mask(G, gens), _reduce_gens(G, gens))

    @classmethod
    def whole(cls, G: Group) -> "Subgroup":
        return cls(G, np.ones(G.order, dtype=bool), G.generators())

    @classmethod
    def trivial(cls, G: Group) -> "Subgroup":
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        return cls(G, mask, ())

    @cached_property
    def order(self) -> int:
        return int(self.mask.sum())

    @cached_property
    def elements(self) -> np.ndarray:
        e = np.flatnonzero(self.mask)
        e.flags.writeable = False
        return e

    @cached_property
    def key(self) -> bytes:
        return _mask_key(self.mask)

    @property
    def gens(self) -> tuple[int, ...]:
        if self._gens is None:
            self._gens = _greedy_gens(self.parent, self.mask)
        return self._gens

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __le__(self, other: "Subgroup") -> bool:
        return bool((other.mask | ~self.mask).all())

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and self.order < other.order

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.mask & other.mask)

    def join(self, other: "Subgroup | Iterable[int]") -> "Subgroup":
        extra = other.gens if isinstance(other, Subgroup) else tuple(other)
        return Subgroup.generated(self.parent, self.gens + tuple(extra))

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.parent.name}>"

    def as_group(self) -> Group:
        """Standalone re-indexed copy (cached); see :attr:`embedding`."""
        if "_asgroup" not in self.__dict__:
            H, emb = subgroup_as_group(self.parent, self.mask)
            self.__dict__["_asgroup"] = H
            self.__dict__["embedding"] = emb
        return self.__dict__["_asgroup"]

    @property
    def embedding(self) -> np.ndarray:
        self.as_group()
        return self.__dict__["embedding"]

    def is_normal(self) -> bool:
        conj = self.parent.conj_table()
        return bool(self.mask[conj[:, list(self.gens) or [0]]].all())

    def conjugate(self, g: int) -> "Subgroup":
        conj = self.parent.conj_table()
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[conj[g, self.elements]] = True
        return Subgroup(self.parent, mask, [int(conj[g, x]) for x in self.gens])

    def image(self, perm: np.ndarray) -> "Subgroup":
        """Image under an element map (e.g. an automorphism)."""
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[np.asarray(perm)[self.elements]] = True
        return Subgroup(self.parent, mask, [int(perm[x]) for x in self.gens])


def _reduce_gens(G: Group, gens: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for g in gens:
        if not mask[g]:
            out.append(int(g))
            mask = closure_mask(G, out)
    return tuple(out)


def _greedy_gens(G: Group, mask: np.ndarray) -> tuple[int, ...]:
    elems = np.flatnonzero(mask)
    order = np.argsort(-G.elt_order[elems], kind="stable")
    out: list[int] = []
    cur = np.zeros(G.order, dtype=bool)
    cur[0] = True
    target = int(mask.sum())
    for x in elems[order]:
        if cur.sum() == target:
            break
        if not cur[x]:
            out.append(int(x))
            cur = closure_mask(G, out)
    return tuple(out)


# ----------------------------------------------------- characteristic subgroups

def _cached(G: Group, key, fn):
    if key not in G._cache:
        G._cache[key] = fn()
    return G._cache[key]


def center(G: Group) -> Subgroup:
    return _cached(G, "center", lambda: Subgroup(G, (G.mul == G.mul.T).all(axis=1)))


def commutator_set(G: Group, A: Subgroup | None = None, B: Subgroup | None = None) -> np.ndarray:
    a = A.elements if A is not None else np.arange(G.order)
    b = B.elements if B is not None else np.arange(G.order)
    mul = G.mul
    left = mul[G.inv[a][:, None], G.inv[b][None, :]]
    right = mul[a[:, None], b[None, :]]
    return np.unique(mul[left, right])


def commutator_subgroup(G: Group, A: Subgroup, B: Subgroup) -> Subgroup:
    """[A, B] = <[a, b]>; normal whenever A and B are normal."""
    return Subgroup.generated(G, commutator_set(G, A, B))


def derived(G: Group) -> Subgroup:
    return _cached(G, "derived", lambda: Subgroup.generated(G, commutator_set(G)))


def power_set(G: Group, k: int) -> np.ndarray:
    x = np.arange(G.order)
    out = np.zeros(G.order, dtype=np.int64)
    for _ in range(k):
        out = G.mul[out, x].astype(np.int64)
    return np.unique(out)


def agemo(G: Group, k: int = 1, p: int | None = None) -> Subgroup:
    """Subgroup generated by the p^k-th powers."""
    p = p or G.prime() or 2
    return _cached(G, ("agemo", k, p), lambda: Subgroup.generated(G, power_set(G, p**k)))


def omega(G: Group, k: int = 1, p: int | None = None) -> Subgroup:
    """Subgroup generated by elements of order dividing p^k."""
    p = p or G.prime() or 2
    return _cached(G, ("omega", k, p), lambda: Subgroup.generated(G, np.flatnonzero((p**k) % G.elt_order == 0)))


def frattini(G: Group) -> Subgroup:
    """Frattini subgroup of a p-group: generated by commutators and p-th powers."""
    p = G.prime()
    if G.order == 1:
        return Subgroup.trivial(G)
    if p is None:
        raise ValueError("frattini() is implemented for p-groups only")

    def build():
        gens = np.concatenate([commutator_set(G), power_set(G, p)])
        return Subgroup.generated(G, gens)

    return _cached(G, "frattini", build)


def lower_central_series(G: Group) -> list[Subgroup]:
    def build():
        series = [Subgroup.whole(G)]
        whole = series[0]
        while True:
            nxt = commutator_subgroup(G, series[-1], whole)
            if nxt.order == series[-1].order:
                break
            series.append(nxt)
        return series

    return _cached(G, "lcs", build)


def nilpotency_class(G: Group) -> int | None:
    """Nilpotency class (0 for the trivial group); None if not nilpotent."""
    series = lower_central_series(G)
    if series[-1].order != 1:
        return None
    return len(series) - 1


def exponent(G: Group) -> int:
    return int(np.lcm.reduce(G.elt_order))


def centralizer(G: Group, S: Subgroup | Iterable[int]) -> Subgroup:
    gens = list(S.gens) if isinstance(S, Subgroup) else [int(s) for s in S]
    if not gens:
        return Subgroup.whole(G)
    g = np.asarray(gens)
    mask = (G.mul[:, g] == G.mul[g, :].T).all(axis=1)
    return Subgroup(G, mask)


def normalizer(G: Group, S: Subgroup) -> Subgroup:
    gens = list(S.gens)
    if not gens:
        return Subgroup.whole(G)
    conj = G.conj_table()
    return Subgroup(G, S.mask[conj[:, gens]].all(axis=1))


def normal_closure(G: Group, elems: Iterable[int]) -> Subgroup:
    conj = G.conj_table()
    elems = np.asarray(list(elems) or [0])
    return Subgroup.generated(G, np.unique(conj[:, elems]))


# ------------------------------------------------------- Frattini quotient data

@dataclass(frozen=True)
class FrattiniData:
    """Coordinates of G/Phi(G) = F_p^d.

    ``coords[x]`` encodes the image of ``x`` as the integer sum e_i p^i, in the
    basis given by the images of ``basis``.
    """

    p: int
    d: int
    basis: tuple[int, ...]
    coords: np.ndarray


def frattini_data(G: Group, prefer: Sequence[int] = ()) -> FrattiniData:
    key = ("frattini_data", tuple(prefer))
    if key in G._cache:
        return G._cache[key]
    p = G.prime() or 2
    phi = frattini(G)
    basis: list[int] = []
    span = phi.mask.copy()
    candidates = list(prefer) + list(G.generators()) + list(range(G.order))
    for x in candidates:
        if not span[x]:
            basis.append(int(x))
            span = closure_mask(G, list(phi.gens) + basis)
        if span.all():
            break
    d = len(basis)
    coords = np.full(G.order, -1, dtype=np.int64)
    phi_el = phi.elements
    for code in range(p**d):
        g = 0
        c = code
        for b in basis:
            e = c % p
            c //= p
            g = G.m(g, *([b] * e))
        coords[G.mul[g, phi_el]] = code
    assert (coords >= 0).all()
    coords.flags.writeable = False
    data = FrattiniData(p, d, tuple(basis), coords)
    G._cache[key] = data
    return data


def generator_rank(G: Group) -> int:
    """d(G): dimension of G/Phi(G)."""
    return frattini_data(G).d if G.order > 1 else 0


def _dot(p: int, d: int, f: int, coords: np.ndarray) -> np.ndarray:
    total = np.zeros_like(coords)
    c = coords.copy()
    ff = f
    for _ in range(d):
        total += (ff % p) * (c % p)
        ff //= p
        c //= p
    return total % p


def maximal_subgroups(G: Group) -> list[Subgroup]:
    """Maximal subgroups of a p-group: kernels of the nonzero functionals on G/Phi."""
    if G.order == 1:
        return []

    def build():
        fd = frattini_data(G)
        out = []
        seen = set()
        for f in range(1, fd.p**fd.d):
            mask = _dot(fd.p, fd.d, f, fd.coords) == 0
            sub = Subgroup(G, mask)
            if sub.key not in seen:
                seen.add(sub.key)
                out.append(sub)
        return out

    return _cached(G, "maximals", build)


# ----------------------------------------------------------- full enumeration

@dataclass
class SubgroupLattice:
    """Every subgroup of a p-group plus the partition into conjugacy classes."""

    group: Group
    subgroups: list[Subgroup]
    index: dict[bytes, int]
    classes: list[list[int]]
    class_of: list[int] = field(default_factory=list)

    def find(self, S: Subgroup) -> int:
        return self.index[S.key]

    def class_reps(self) -> list[Subgroup]:
        return [self.subgroups[c[0]] for c in self.classes]


@dataclass(frozen=True)
class SubgroupClass:
    rep: Subgroup
    size: int

    @property
    def order(self) -> int:
        return self.rep.order


def subgroup_lattice(G: Group, cap: int | None = None) -> SubgroupLattice:
    cap = get_caps().subgroups if cap is None else cap
    if G.order > cap:
        raise CapExceeded(f"subgroup enumeration capped at order {cap} (group has order {G.order})")
    if "lattice" in G._cache:
        return G._cache["lattice"]
    p = G.prime()
    if G.order > 1 and p is None:
        raise ValueError("subgroup enumeration is implemented for p-groups only")
    conj = G.conj_table()
    ppow = G.mul.astype(np.int64)
    # x^p for every x
    xp = np.zeros(G.order, dtype=np.int64)
    for _ in range(p or 1):
        xp = ppow[xp, np.arange(G.order)]

    subs: list[Subgroup] = [Subgroup.trivial(G)]
    index = {subs[0].key: 0}
    layer = [0]
    while layer:
        nxt = []
        for hi in layer:
            H = subs[hi]
            hel = H.elements
            normalizes = H.mask[conj[:, list(H.gens) or [0]]].all(axis=1)
            cand = normalizes & ~H.mask & H.mask[xp]
            used = np.zeros(G.order, dtype=bool)
            for x in np.flatnonzero(cand):
                if used[x]:
                    continue
                mask = H.mask.copy()
                y = x
                for _ in range((p or 2) - 1):
                    mask[G.mul[hel, y]] = True
                    y = int(G.mul[y, x])
                used |= mask
                key = _mask_key(mask)
                if key not in index:
                    index[key] = len(subs)
                    subs.append(Subgroup(G, mask, H.gens + (int(x),)))
                    nxt.append(index[key])
        layer = nxt

    order_key = sorted(range(len(subs)), key=lambda i: (subs[i].order, subs[i].key))
    subs = [subs[i] for i in order_key]
    index = {s.key: i for i, s in enumerate(subs)}

    parent = list(range(len(subs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, S in enumerate(subs):
        for g in G.generators():
            m = np.zeros(G.order, dtype=bool)
            m[conj[g, S.elements]] = True
            j = index[_mask_key(m)]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(len(subs)):
        groups.setdefault(find(i), []).append(i)
    classes = sorted(groups.values(), key=lambda c: c[0])
    class_of = [0] * len(subs)
    for ci, c in enumerate(classes):
        for i in c:
            class_of[i] = ci
    lat = SubgroupLattice(G, subs, index, classes, class_of)
    G._cache["lattice"] = lat
    return lat


def all_subgroups(G: Group, cap: int | None = None) -> list[SubgroupClass]:
    """Conjugacy-class representatives of all subgroups, with class sizes."""
    lat = subgroup_lattice(G, cap)
    return [SubgroupClass(lat.subgroups[c[0]], len(c)) for c in lat.classes]
