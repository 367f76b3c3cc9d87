"""Fusion systems on a finite p-group held by generating automizer data.

A morphism is stored as an integer array of length |P| giving the image of
each element of its domain and ``-1`` elsewhere.  The system is generated by
Aut_F(P) (which always contains Inn(P)) together with, for each essential
class, automorphisms of one representative U; conjugates of those
automorphisms by a transversal of N_P(U) in P extend the data to the whole
P-class of U.  Every F-morphism is then a composite of restrictions of these
generating maps (Alperin's fusion theorem), which is how the closure below is
computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from ..config import get_caps
from ..errors import CapExceeded
from ..group import Group
from ..subgroups import Subgroup, centralizer, normalizer, subgroup_lattice


def restrict(perm: np.ndarray, S: Subgroup) -> np.ndarray:
    """Partial map with domain S agreeing with ``perm``."""
    out = np.full(len(perm), -1, dtype=np.int64)
    out[S.elements] = np.asarray(perm)[S.elements]
    return out


def domain_mask(m: np.ndarray) -> np.ndarray:
    return m >= 0


@dataclass(frozen=True)
class Essential:
    """One representative U of an essential class and generators of A_U <= Aut(U).

    ``gens`` are partial maps with domain U.
    """

    U: Subgroup
    gens: tuple[np.ndarray, ...]

    def __post_init__(self):
        for g in self.gens:
            if not np.array_equal(g >= 0, self.U.mask):
                raise ValueError("essential automizer generator must have domain U")


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values(), key=lambda c: c[0])


class FusionSystem:
    """Saturated-candidate fusion system on ``P``.

    ``aut_P`` lists generators (full permutations of P) of Aut_F(P) beyond
    Inn(P), which is always included.  The closure (element and subgroup
    F-classes, hom-sets) is materialized lazily and cached.
    """

    def __init__(
        self,
        P: Group,
        aut_P: Sequence[np.ndarray] = (),
        essentials: Sequence[Essential] = (),
        label: str | None = None,
    ):
        cap = get_caps().fusion
        if P.order > cap:
            raise CapExceeded(f"fusion systems capped at order {cap} (group has order {P.order})")
        self.P = P
        conj = P.conj_table()
        gens = [conj[g].astype(np.int64) for g in P.generators()]
        seen = {g.tobytes() for g in gens}
        for a in aut_P:
            a = np.asarray(a, dtype=np.int64)
            if a.tobytes() not in seen and not np.array_equal(a, np.arange(P.order)):
                seen.add(a.tobytes())
                gens.append(a)
        self.aut_P_gens: tuple[np.ndarray, ...] = tuple(gens)
        self.extra_aut_P: tuple[np.ndarray, ...] = tuple(np.asarray(a, dtype=np.int64) for a in aut_P)
        self.essentials: tuple[Essential, ...] = tuple(essentials)
        self.label = label
        self._homs: dict[bytes, dict[bytes, np.ndarray]] = {}

    def __repr__(self) -> str:
        name = self.label or "F"
        return f"<FusionSystem {name} on {self.P.name}: |Aut_F(P)|={self.aut_P_order}, essentials={len(self.essentials)}>"

    @property
    def prime(self) -> int:
        return self.P.prime() or 2

    # ------------------------------------------------------------ generators

    @cached_property
    def generating_maps(self) -> tuple[np.ndarray, ...]:
        P = self.P
        conj = P.conj_table()
        maps = list(self.aut_P_gens)
        for E in self.essentials:
            U = E.U
            for g in right_transversal(P, normalizer(P, U)):
                src = conj[g, U.elements]
                for a in E.gens:
                    m = np.full(P.order, -1, dtype=np.int64)
                    m[src] = conj[g, a[U.elements]]
                    maps.append(m)
        return tuple(maps)

    # -------------------------------------------------------------- closure

    @cached_property
    def lattice(self):
        return subgroup_lattice(self.P, cap=get_caps().fusion)

    @cached_property
    def _element_partition(self) -> list[list[int]]:
        uf = _UnionFind(self.P.order)
        for m in self.generating_maps:
            for x in np.flatnonzero(m >= 0):
                uf.union(int(x), int(m[x]))
        return uf.groups()

    @property
    def element_classes(self) -> list[np.ndarray]:
        """F-conjugacy classes of elements, each sorted, ordered by least member."""
        return [np.asarray(c) for c in self._element_partition]

    @cached_property
    def element_class_of(self) -> np.ndarray:
        out = np.zeros(self.P.order, dtype=np.int64)
        for i, c in enumerate(self._element_partition):
            out[c] = i
        return out

    @cached_property
    def _subgroup_partition(self) -> list[list[int]]:
        lat = self.lattice
        subs = lat.subgroups
        masks = np.array([s.mask for s in subs])
        uf = _UnionFind(len(subs))
        for m in self.generating_maps:
            dom = m >= 0
            inside = ~(masks & ~dom).any(axis=1)
            for i in np.flatnonzero(inside):
                img = np.zeros(self.P.order, dtype=bool)
                img[m[subs[i].elements]] = True
                uf.union(int(i), lat.index[np.packbits(img).tobytes()])
        return uf.groups()

    @property
    def subgroup_classes(self) -> list[list[Subgroup]]:
        subs = self.lattice.subgroups
        return [[subs[i] for i in c] for c in self._subgroup_partition]

    @cached_property
    def subgroup_class_of(self) -> np.ndarray:
        out = np.zeros(len(self.lattice.subgroups), dtype=np.int64)
        for i, c in enumerate(self._subgroup_partition):
            out[c] = i
        return out

    def f_class(self, S: Subgroup) -> list[Subgroup]:
        return self.subgroup_classes[int(self.subgroup_class_of[self.lattice.find(S)])]

    def are_conjugate(self, A: Subgroup, B: Subgroup) -> bool:
        c = self.subgroup_class_of
        return bool(c[self.lattice.find(A)] == c[self.lattice.find(B)])

    def homs(self, Q: Subgroup) -> dict[bytes, np.ndarray]:
        """All F-morphisms out of Q, as image arrays aligned with ``Q.elements``.

        Breadth-first closure of Q's inclusion under the generating maps: a
        map applies to a current image when the image lies in its domain.
        """
        if Q.key in self._homs:
            return self._homs[Q.key]
        start = np.asarray(Q.elements, dtype=np.int64)
        states = {start.tobytes(): start}
        frontier = [start]
        maps = self.generating_maps
        while frontier:
            block = np.stack(frontier)
            frontier = []
            for m in maps:
                img = m[block]
                ok = (img >= 0).all(axis=1)
                for row in img[ok]:
                    k = row.tobytes()
                    if k not in states:
                        states[k] = row
                        frontier.append(row)
        self._homs[Q.key] = states
        return states

    def hom(self, Q: Subgroup, R: Subgroup) -> list[np.ndarray]:
        """Hom_F(Q, R): images (aligned with Q.elements) landing inside R."""
        return [v for v in self.homs(Q).values() if R.mask[v].all()]

    def automizer(self, Q: Subgroup) -> list[np.ndarray]:
        """Aut_F(Q) as images aligned with Q.elements."""
        return self.hom(Q, Q)

    def automizer_order(self, Q: Subgroup) -> int:
        return len(self.automizer(Q))

    @cached_property
    def aut_P_order(self) -> int:
        return self.automizer_order(Subgroup.whole(self.P))

    def morphism_count(self) -> int:
        """Total number of F-morphisms between subgroups (sum of |Hom_F(Q, P)|)."""
        return sum(len(self.homs(S)) for S in self.lattice.subgroups)

    def contains_map(self, m: np.ndarray) -> bool:
        """True if the partial map ``m`` is an F-morphism."""
        dom = np.flatnonzero(m >= 0)
        lat = self.lattice
        mask = np.zeros(self.P.order, dtype=bool)
        mask[dom] = True
        key = np.packbits(mask).tobytes()
        if key not in lat.index:
            return False
        return m[dom].astype(np.int64).tobytes() in self.homs(lat.subgroups[lat.index[key]])

    def generate(self) -> "FusionSystem":
        """Materialize the element and subgroup partitions and return self."""
        _ = self._element_partition, self._subgroup_partition
        return self


def right_transversal(P: Group, N: Subgroup) -> list[int]:
    """Representatives g of the right cosets Ng."""
    seen = np.zeros(P.order, dtype=bool)
    reps = []
    for g in range(P.order):
        if not seen[g]:
            reps.append(g)
            seen[P.mul[N.elements, g]] = True
    return reps


def trivial_system(P: Group) -> FusionSystem:
    """F_P(P): the fusion system of P acting on itself by conjugation."""
    return FusionSystem(P, label="F_P(P)")


def generate(F: FusionSystem) -> FusionSystem:
    return F.generate()


def aut_p_maps(P: Group, Q: Subgroup) -> dict[bytes, np.ndarray]:
    """Aut_P(Q): conjugation maps by N_P(Q), aligned with Q.elements."""
    conj = P.conj_table()
    out = {}
    for h in normalizer(P, Q).elements:
        row = conj[h, Q.elements].astype(np.int64)
        out.setdefault(row.tobytes(), row)
    return out


def aut_p_order(P: Group, Q: Subgroup) -> int:
    return normalizer(P, Q).order // centralizer(P, Q).order


@dataclass
class ValidationReport:
    ok: bool
    problems: list[str] = field(default_factory=list)


def validate(F: FusionSystem) -> ValidationReport:
    """Structural checks on the defining data.

    Every generator must be an injective homomorphism on a subgroup, and at
    P and at every essential representative the P-automizer must be a Sylow
    p-subgroup of the automizer generated by the data.
    """
    from ..perms import PermGroup

    P = F.P
    p = F.prime
    problems = []
    for a in F.aut_P_gens:
        if not _is_hom_on(P, a, np.arange(P.order)):
            problems.append("aut_P generator is not an automorphism")
    pos = np.full(P.order, -1, dtype=np.int64)
    items = [(Subgroup.whole(P), list(F.aut_P_gens))]
    items += [(E.U, list(E.gens)) for E in F.essentials]
    for U, gens in items:
        pos[:] = -1
        pos[U.elements] = np.arange(U.order)
        for a in gens:
            if not _is_hom_on(P, a, U.elements):
                problems.append(f"generator on a subgroup of order {U.order} is not an automorphism")
        local = [pos[a[U.elements]] for a in gens]
        local += [pos[row] for row in aut_p_maps(P, U).values()]
        A = PermGroup(local, U.order)
        sylow = aut_p_order(P, U)
        a_p = _p_part(A.order, p)
        if a_p != sylow:
            problems.append(
                f"Aut_P(U) is not Sylow in the automizer of a subgroup of order {U.order} "
                f"({sylow} vs {a_p})"
            )
    return ValidationReport(not problems, problems)


def _is_hom_on(P: Group, m: np.ndarray, elems: np.ndarray) -> bool:
    elems = np.asarray(elems)
    img = m[elems]
    if (img < 0).any() or len(set(img.tolist())) != len(elems):
        return False
    prod = P.mul[elems[:, None], elems[None, :]]
    return bool((m[prod] == P.mul[img[:, None], img[None, :]]).all())


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out
