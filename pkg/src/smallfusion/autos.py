"""Automorphisms and isomorphisms by backtracking on generator images.

Every search picks a minimal generating sequence g_1, ..., g_d of the source
group (a basis of G/Phi(G)) and assigns images one generator at a time.  A
partial assignment is kept only if it extends to an injective homomorphism of
the prefix subgroup <g_1, ..., g_k>; that test is a vectorised pass over a
spanning tree of the prefix subgroup.  Candidate images are restricted to
elements with the same cheap characteristic invariants (element order,
centralizer order, membership in Z, G', Phi, Omega_1, agemo_1) and must stay
independent modulo the Frattini subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .config import get_caps
from .errors import CapExceeded
from .field import gl_action_tables, gl_order, gl_orders
from .group import Group, group_from_permutations
from .subgroups import (
    Subgroup,
    agemo,
    center,
    closure_mask,
    derived,
    frattini,
    frattini_data,
    maximal_subgroups,
    omega,
)

ODD_PRIME_MENU = (3, 5, 7)


@dataclass(frozen=True, eq=False)
class Automorphism:
    """Element permutation of ``group`` respecting multiplication.

    Composition is left to right: ``a.then(b)`` applies ``a`` first.
    """

    group: Group
    perm: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.perm, dtype=np.int64)
        p.flags.writeable = False
        object.__setattr__(self, "perm", p)

    def __call__(self, x: int) -> int:
        return int(self.perm[x])

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and np.array_equal(self.perm, other.perm)

    def __hash__(self) -> int:
        return hash(self.perm.tobytes())

    @classmethod
    def identity(cls, G: Group) -> "Automorphism":
        return cls(G, np.arange(G.order))

    @classmethod
    def inner(cls, G: Group, g: int) -> "Automorphism":
        """Conjugation x -> x^g."""
        return cls(G, G.conj_table()[g])

    def then(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(self.group, other.perm[self.perm])

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm))
        return Automorphism(self.group, inv)

    def power(self, k: int) -> "Automorphism":
        k %= self.order
        out = np.arange(len(self.perm))
        for _ in range(k):
            out = self.perm[out]
        return Automorphism(self.group, out)

    @property
    def order(self) -> int:
        seen = np.zeros(len(self.perm), dtype=bool)
        out = 1
        for start in range(len(self.perm)):
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.perm[x]
                length += 1
            out = lcm(out, length)
        return out

    def is_valid(self) -> bool:
        """Bijective and multiplicative, checked exhaustively."""
        G = self.group
        p = self.perm
        if len(np.unique(p)) != G.order:
            return False
        return bool(np.array_equal(p[G.mul], G.mul[p[:, None], p[None, :]]))

    def images(self, gens: Sequence[int]) -> list[tuple[int, int]]:
        """Witness form: (generator index, image index) pairs."""
        return [(int(g), int(self.perm[g])) for g in gens]


# ------------------------------------------------------------------- signatures

def element_signatures(G: Group) -> np.ndarray:
    """Per-element tuple of characteristic invariants, encoded as one integer."""
    if "signatures" in G._cache:
        return G._cache["signatures"]
    cent = (G.mul == G.mul.T).sum(axis=1).astype(np.int64)
    flags = np.zeros(G.order, dtype=np.int64)
    p = G.prime()
    subs = [center(G), derived(G)]
    if p is not None:
        subs += [frattini(G), omega(G, 1), agemo(G, 1)]
    for bit, S in enumerate(subs):
        flags |= S.mask.astype(np.int64) << bit
    sig = (G.elt_order.astype(np.int64) * (G.order + 1) + cent) * 64 + flags
    sig.flags.writeable = False
    G._cache["signatures"] = sig
    return sig


def minimal_generators(G: Group) -> tuple[int, ...]:
    """A generating sequence lifting a basis of G/Phi(G), largest orders first."""
    if G.order == 1:
        return ()
    if "mingens" in G._cache:
        return G._cache["mingens"]
    fd = frattini_data(G, prefer=tuple(G.generators()))
    gens = sorted(fd.basis, key=lambda g: (-int(G.elt_order[g]), g))
    G._cache["mingens"] = tuple(gens)
    return G._cache["mingens"]


@dataclass
class _Prefix:
    elems: np.ndarray
    layers: list[tuple[np.ndarray, np.ndarray, np.ndarray]]  # (elements, parents, generator slot)


def _prefix_trees(G: Group, gens: Sequence[int]) -> list[_Prefix]:
    out = []
    for k in range(1, len(gens) + 1):
        sub = np.asarray(gens[:k], dtype=np.int64)
        seen = np.zeros(G.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        layers = []
        while frontier.size:
            prod = G.mul[frontier[:, None], sub[None, :]].astype(np.int64)
            par = np.repeat(frontier, len(sub))
            slot = np.tile(np.arange(len(sub)), len(frontier))
            flat = prod.ravel()
            first = np.unique(flat, return_index=True)[1]
            keep = first[~seen[flat[first]]]
            new = flat[keep]
            seen[new] = True
            if new.size:
                layers.append((new, par[keep], slot[keep]))
            frontier = new
        out.append(_Prefix(np.flatnonzero(seen), layers))
    return out


class _HomSearch:
    """Backtracking over injective homomorphisms G -> H fixed by generator images."""

    def __init__(self, G: Group, H: Group, gens: Sequence[int] | None = None, budget: int | None = None):
        self.G, self.H = G, H
        self.gens = tuple(gens) if gens is not None else minimal_generators(G)
        self.prefix = _prefix_trees(G, self.gens)
        self.Gmul = G.mul.astype(np.int64)
        self.Hmul = H.mul.astype(np.int64)
        self.budget = budget
        self.nodes = 0
        sg, sh = element_signatures(G), element_signatures(H)
        self.candidates = [np.flatnonzero(sh == sg[g]) for g in self.gens]
        self.Hfd = frattini_data(H) if H.prime() is not None else None

    def extend_ok(self, images: Sequence[int]) -> np.ndarray | None:
        """Image array on the prefix subgroup if the assignment is an injective hom."""
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise CapExceeded(f"search exceeded node budget {self.budget}")
        k = len(images)
        pre = self.prefix[k - 1]
        img = np.full(self.G.order, -1, dtype=np.int64)
        img[0] = 0
        imgs = np.asarray(images, dtype=np.int64)
        for el, par, slot in pre.layers:
            img[el] = self.Hmul[img[par], imgs[slot]]
        E = pre.elems
        iE = img[E]
        if np.unique(iE).size != E.size:
            return None
        for j in range(k):
            lhs = img[self.Gmul[E, self.gens[j]]]
            if (lhs < 0).any() or not np.array_equal(lhs, self.Hmul[iE, imgs[j]]):
                return None
        return img

    def _independent(self, images: Sequence[int], y: int) -> bool:
        if self.Hfd is None:
            return True
        p = self.Hfd.p
        span = {0}
        for x in images:
            cx = int(self.Hfd.coords[x])
            span = {_vadd(s, _vscale(cx, t, p, self.Hfd.d), p, self.Hfd.d) for s in span for t in range(p)}
        return int(self.Hfd.coords[y]) not in span

    def search(self, fixed: Sequence[int] = (), allowed: Sequence[np.ndarray] | None = None):
        """Depth-first search extending ``fixed``; yields full image arrays."""
        d = len(self.gens)
        cands = allowed if allowed is not None else self.candidates
        if fixed and self.extend_ok(fixed) is None:
            return

        def rec(images: list[int]):
            k = len(images)
            if k == d:
                img = self.extend_ok(images) if d else np.zeros(1, dtype=np.int64)
                if img is not None:
                    yield img
                return
            for y in cands[k]:
                y = int(y)
                if y in images or not self._independent(images, y):
                    continue
                trial = images + [y]
                if k + 1 < d and self.extend_ok(trial) is None:
                    continue
                yield from rec(trial)

        yield from rec(list(fixed))


def _vadd(a: int, b: int, p: int, d: int) -> int:
    if p == 2:
        return a ^ b
    out, mult = 0, 1
    for _ in range(d):
        out += ((a % p + b % p) % p) * mult
        a //= p
        b //= p
        mult *= p
    return out


def _vscale(a: int, t: int, p: int, d: int) -> int:
    if p == 2:
        return a if t % 2 else 0
    out, mult = 0, 1
    for _ in range(d):
        out += ((a % p) * t % p) * mult
        a //= p
        mult *= p
    return out


# ----------------------------------------------------------- automorphism group

def _orbit(point: int, gens: Sequence[np.ndarray]) -> set[int]:
    orbit = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(g[x])
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    return orbit


def automorphism_group(G: Group, cap: int | None = None) -> tuple[int, list[Automorphism]]:
    """Exact |Aut(G)| and a generating set, via a stabilizer chain on generator images."""
    cap = get_caps().aut if cap is None else cap
    if G.order > cap:
        raise CapExceeded(f"automorphism search capped at order {cap} (group has order {G.order})")
    if "aut" in G._cache:
        return G._cache["aut"]
    if G.order == 1:
        G._cache["aut"] = (1, [])
        return G._cache["aut"]
    search = _HomSearch(G, G)
    gens = search.gens
    d = len(gens)
    found: list[np.ndarray] = []
    order = 1
    for k in reversed(range(d)):
        fixed = list(gens[:k])
        orbit = _orbit(gens[k], found)
        rejected: set[int] = set()
        for y in search.candidates[k]:
            y = int(y)
            if y in orbit or y in rejected:
                continue
            hit = next(search.search(fixed + [y]), None) if _indep_ok(search, fixed, y) else None
            if hit is None:
                rejected.add(y)
                continue
            found.append(hit)
            orbit = _orbit(gens[k], found)
        order *= len(orbit)
    autos = [Automorphism(G, p) for p in found]
    G._cache["aut"] = (order, autos)
    return order, autos


def _indep_ok(search: _HomSearch, fixed: Sequence[int], y: int) -> bool:
    return y not in fixed and search._independent(fixed, y)


def aut_order(G: Group) -> int:
    return automorphism_group(G)[0]


def aut_as_group(G: Group):
    """Aut(G) as a table group; returns ``(A, perms)`` with ``perms[i]`` the permutation of element i."""
    if "aut_group" in G._cache:
        return G._cache["aut_group"]
    order, autos = automorphism_group(G)
    A, perms = group_from_permutations([a.perm for a in autos] or [np.arange(G.order)],
                                       limit=max(order, 1), name=f"Aut({G.name})")
    assert A.order == order
    G._cache["aut_group"] = (A, perms)
    return A, perms


def inner_automorphisms(G: Group) -> list[Automorphism]:
    return [Automorphism.inner(G, g) for g in G.generators()]


# --------------------------------------------------------------- isomorphism

def find_isomorphism(G: Group, H: Group) -> np.ndarray | None:
    """An element map G -> H that is an isomorphism, or None."""
    from .invariants import fingerprint

    if G.order != H.order:
        return None
    cap = get_caps().order
    if G.order > cap:
        raise CapExceeded(f"isomorphism test capped at order {cap}")
    if fingerprint(G) != fingerprint(H):
        return None
    if G.order == 1:
        return np.zeros(1, dtype=np.int64)
    if not np.array_equal(np.sort(element_signatures(G)), np.sort(element_signatures(H))):
        return None
    search = _HomSearch(G, H)
    return next(search.search(), None)


def is_isomorphic(G: Group, H: Group) -> bool:
    return find_isomorphism(G, H) is not None


def verify_isomorphism(G: Group, H: Group, perm: np.ndarray) -> bool:
    perm = np.asarray(perm)
    if perm.shape != (G.order,) or len(np.unique(perm)) != H.order:
        return False
    return bool(np.array_equal(perm[G.mul], H.mul[perm[:, None], perm[None, :]]))


# ----------------------------------------------------- odd-order automorphisms

@dataclass
class AutReport:
    fingerprint: str
    odd_orders: frozenset[int]
    witnesses: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    undecided: dict[int, int] = field(default_factory=dict)  # prime -> node budget hit
    aut_order: int | None = None
    transitive_on_maximals: bool | None = None
    generator_rank: int = 0
    primes_searched: tuple[int, ...] = ()

    @property
    def decided(self) -> bool:
        return not self.undecided

    def as_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint,
            "odd_orders": sorted(self.odd_orders),
            "witnesses": {str(q): [list(p) for p in w] for q, w in sorted(self.witnesses.items())},
            "undecided": {str(q): b for q, b in sorted(self.undecided.items())},
            "aut_order": self.aut_order,
            "transitive_on_maximals": self.transitive_on_maximals,
            "generator_rank": self.generator_rank,
            "primes_searched": list(self.primes_searched),
        }


def _cyclic_subgroup_reps(dim: int, q: int) -> list[int]:
    """Indices into the GL_dim(2) tables: one generator per cyclic subgroup of order q."""
    _, act = gl_action_tables(dim)
    orders = gl_orders(dim)
    idx = np.flatnonzero(orders == q)
    key_of = {act[i].tobytes(): int(i) for i in idx}
    seen: set[int] = set()
    reps = []
    for i in idx:
        i = int(i)
        if i in seen:
            continue
        reps.append(i)
        power = act[i]
        for _ in range(q - 1):
            seen.add(key_of[power.tobytes()])
            power = act[i][power]
    return reps


def _coset_profiles(G: Group, fd) -> list[bytes]:
    """For each coset code of G/Phi, a canonical summary of its element signatures."""
    sig = element_signatures(G)
    out = []
    for code in range(fd.p**fd.d):
        vals = np.sort(sig[fd.coords == code])
        out.append(vals.tobytes())
    return out


def find_odd_automorphism(G: Group, budget: int | None = None, primes: Iterable[int] = ODD_PRIME_MENU) -> AutReport:
    """Decide, for each odd prime q in the menu, whether G has an automorphism of order q.

    The action of an order-q automorphism on G/Phi(G) = F_2^d has order q
    (automorphisms acting trivially on G/Phi have 2-power order), so each
    cyclic subgroup of order q in GL_d(2) is tried as the induced action and
    lifted to G by backtracking.  Generators of every subgroup are tried, so a
    negative answer is exhaustive.
    """
    from .invariants import fingerprint

    budget = get_caps().budget if budget is None else budget
    fp = fingerprint(G).to_line()
    if G.order == 1:
        return AutReport(fp, frozenset())
    if G.prime() != 2:
        raise ValueError("find_odd_automorphism expects a 2-group")
    fd = frattini_data(G)
    d = fd.d
    report = AutReport(fp, frozenset(), generator_rank=d)
    if d > 4:
        # outside the GL_4(2) menu: fall back to the full automorphism group when small enough
        order, autos = automorphism_group(G)
        odd = {q for q in range(3, order + 1, 2) if order % q == 0 and all(q % r for r in range(3, q, 2))}
        report.odd_orders = frozenset(odd)
        report.aut_order = order
        report.primes_searched = tuple(sorted(odd))
        return report

    gens = minimal_generators(G)
    basis_codes = [int(fd.coords[g]) for g in gens]  # unit vectors in coordinate space
    profiles = _coset_profiles(G, fd)
    _, act = gl_action_tables(d)
    sig = element_signatures(G)
    searched = []
    odd: set[int] = set()
    for q in primes:
        if gl_order(d) % q:
            continue
        searched.append(q)
        search = _HomSearch(G, G, gens, budget=budget)
        try:
            witness = _lift_prime(G, q, search, act, basis_codes, fd, profiles, sig)
        except CapExceeded:
            report.undecided[q] = budget
            continue
        if witness is not None:
            odd.add(q)
            report.witnesses[q] = witness.images(gens)
    report.odd_orders = frozenset(odd)
    report.primes_searched = tuple(searched)
    return report


def _lift_prime(G, q, search, act, basis_codes, fd, profiles, sig) -> Automorphism | None:
    d = fd.d
    # express coordinate codes in the basis of generator images: code(sum e_i g_i) = xor of basis codes
    to_code = np.zeros(1 << d, dtype=np.int64)
    for v in range(1 << d):
        c = 0
        for i in range(d):
            if v >> i & 1:
                c ^= basis_codes[i]
        to_code[v] = c
    for m in _cyclic_subgroup_reps(d, q):
        row = act[m]
        # the matrix permutes cosets; signature profiles must match
        if any(profiles[to_code[v]] != profiles[to_code[row[v]]] for v in range(1 << d)):
            continue
        allowed = []
        for i, g in enumerate(search.gens):
            target = to_code[row[1 << i]]
            allowed.append(np.flatnonzero((fd.coords == target) & (sig == sig[g])))
        hit = next(search.search(allowed=allowed), None)
        if hit is None:
            continue
        alpha = Automorphism(G, hit)
        k = alpha.order
        while k % q == 0:
            k //= q
        beta = alpha.power(k)
        assert beta.order == q and beta.is_valid()
        return beta
    return None


def odd_order_subgroup_classes(G: Group, q: int = 3) -> int:
    """Number of Aut(G)-conjugacy classes of subgroups of order q in Aut(G)."""
    from .perms import PermGroup

    order, autos = automorphism_group(G)
    A = PermGroup([a.perm for a in autos] or [np.arange(G.order)], G.order, limit=max(order, 1))
    gen_idx = [A.find(g) for g in A.gens]
    subgroups: dict[frozenset, int] = {}
    for x in np.flatnonzero(A.orders == q):
        subgroups.setdefault(frozenset(A.generator_powers(int(x))), int(x))
    seen: set[frozenset] = set()
    classes = 0
    for key in subgroups:
        if key in seen:
            continue
        classes += 1
        seen.add(key)
        frontier = [key]
        while frontier:
            nxt = []
            for S in frontier:
                for g in gen_idx:
                    T = frozenset(A.conj(x, g) for x in S)
                    if T not in seen:
                        seen.add(T)
                        nxt.append(T)
            frontier = nxt
    return classes


# ------------------------------------------------------------------ utilities

def is_transitive_on_maximals(G: Group) -> bool:
    maxs = maximal_subgroups(G)
    if len(maxs) <= 1:
        return True
    _, autos = automorphism_group(G)
    keys = {M.key for M in maxs}
    orbit = {maxs[0].key}
    frontier = [maxs[0]]
    while frontier:
        nxt = []
        for M in frontier:
            for a in autos:
                N = M.image(a.perm)
                if N.key not in orbit:
                    orbit.add(N.key)
                    nxt.append(N)
        frontier = nxt
    return orbit == keys


def commutator_subgroup_with(G: Group, phi: Automorphism) -> Subgroup:
    """[G, phi] = < x^-1 phi(x) >."""
    x = np.arange(G.order)
    return Subgroup.generated(G, np.unique(G.mul[G.inv[x], phi.perm[x]]))


def fixed_points(phi: Automorphism) -> Subgroup:
    """C_G(phi)."""
    G = phi.group
    return Subgroup(G, phi.perm == np.arange(G.order))


def automorphism_from_images(G: Group, images: Sequence[tuple[int, int]]) -> Automorphism | None:
    """Rebuild an automorphism from a witness list of (generator, image) pairs."""
    gens = [g for g, _ in images]
    if not closure_mask(G, gens).all():
        return None
    search = _HomSearch(G, G, gens)
    img = search.extend_ok([y for _, y in images])
    if img is None or (img < 0).any():
        return None
    a = Automorphism(G, img)
    return a if a.is_valid() else None


# ------------------------------------------------------------- GL_4(2) scan

@dataclass
class GL4ScanReport:
    total: int
    order3: int
    order3_fixed_free: int
    order3_fixing_three: int
    order5: int
    order5_fixed_free: int
    exceptions: list[tuple[int, ...]]

    @property
    def passed(self) -> bool:
        return not self.exceptions and self.total == 20160

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "order3": self.order3,
            "order3_fixed_free": self.order3_fixed_free,
            "order3_fixing_three_in_plane": self.order3_fixing_three,
            "order5": self.order5,
            "order5_fixed_free": self.order5_fixed_free,
            "exceptions": [list(e) for e in self.exceptions],
            "passed": self.passed,
        }


def gl4_fixed_point_scan() -> GL4ScanReport:
    """Fixed nonzero vectors of every order-3 and order-5 element of GL_4(2)."""
    rows, act = gl_action_tables(4)
    orders = gl_orders(4)
    fixed = act[:, 1:] == np.arange(1, 16)
    nfixed = fixed.sum(axis=1)
    exceptions: list[tuple[int, ...]] = []

    o3 = np.flatnonzero(orders == 3)
    free3 = int((nfixed[o3] == 0).sum())
    three = 0
    for i in o3[nfixed[o3] == 3]:
        vs = np.flatnonzero(fixed[i]) + 1
        if vs[0] ^ vs[1] == vs[2]:
            three += 1
        else:
            exceptions.append(tuple(int(r) for r in rows[i]))
    for i in o3[(nfixed[o3] != 0) & (nfixed[o3] != 3)]:
        exceptions.append(tuple(int(r) for r in rows[i]))

    o5 = np.flatnonzero(orders == 5)
    free5 = int((nfixed[o5] == 0).sum())
    for i in o5[nfixed[o5] != 0]:
        exceptions.append(tuple(int(r) for r in rows[i]))
    return GL4ScanReport(len(orders), len(o3), free3, three, len(o5), free5, exceptions)


__all__ = [
    "AutReport",
    "Automorphism",
    "GL4ScanReport",
    "aut_as_group",
    "aut_order",
    "automorphism_from_images",
    "automorphism_group",
    "commutator_subgroup_with",
    "element_signatures",
    "find_isomorphism",
    "find_odd_automorphism",
    "fixed_points",
    "gl4_fixed_point_scan",
    "inner_automorphisms",
    "is_isomorphic",
    "is_transitive_on_maximals",
    "minimal_generators",
    "odd_order_subgroup_classes",
    "verify_isomorphism",
]
