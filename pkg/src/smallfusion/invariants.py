"""Structural invariants of finite p-groups and the canonical fingerprint."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, fields
from math import log

import numpy as np

from .group import Group, quotient
from .subgroups import (
    Subgroup,
    agemo,
    center,
    closure_mask,
    derived,
    exponent,
    frattini,
    generator_rank,
    maximal_subgroups,
    nilpotency_class,
    omega,
)


def count_involutions(G: Group) -> int:
    return int((G.elt_order == 2).sum())


def _ilog(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def p_rank(G: Group, p: int = 2) -> int:
    """Largest r such that G contains an elementary abelian subgroup of order p^r.

    Depth-first search over commuting order-p elements; a branch is cut as
    soon as the remaining candidates cannot host a larger elementary abelian
    subgroup.
    """
    key = ("p_rank", p)
    if key in G._cache:
        return G._cache[key]
    elems = np.flatnonzero(G.elt_order == p)
    if elems.size == 0:
        G._cache[key] = 0
        return 0
    comm = G.mul[elems[:, None], elems[None, :]] == G.mul[elems[None, :], elems[:, None]]
    best = 1

    def search(basis: list[int], cands: np.ndarray):
        nonlocal best
        r = len(basis)
        best = max(best, r)
        # an elementary abelian group of rank r+s through E puts p^r (p^s - 1) elements in cands
        size = int(cands.sum())
        bound = r + (log(size / p**r + 1, p) if size else 0)
        if bound < best + 1 - 1e-9:
            return
        live = cands.copy()
        for i in np.flatnonzero(cands):
            if not live[i]:
                continue
            x = int(elems[i])
            new_basis = basis + [x]
            mask = closure_mask(G, new_basis)
            new_inside = mask[elems]
            new_cands = live & comm[i] & ~new_inside
            search(new_basis, new_cands)
            live &= ~new_inside
            size = int(live.sum())
            if r + 1 + (log(size / p ** (r + 1) + 1, p) if size else 0) < best + 1 - 1e-9:
                return

    search([], np.ones(len(elems), dtype=bool))
    G._cache[key] = best
    return best


def abelian_invariants(G: Group) -> tuple[int, ...]:
    """Invariant factors of G/G' as a decreasing tuple of prime powers."""
    D = derived(G)
    A = G if D.order == 1 else quotient(G, D.mask)[0]
    return _abelian_type(A)


def _abelian_type(A: Group) -> tuple[int, ...]:
    if A.order == 1:
        return ()
    out: list[int] = []
    primes = sorted({q for q in range(2, A.order + 1) if A.order % q == 0 and all(q % r for r in range(2, q))})
    for p in primes:
        # log_p |Omega_k| - log_p |Omega_{k-1}| counts cyclic factors of order >= p^k
        sizes = []
        k = 0
        while True:
            size = int(np.sum((p**k) % A.elt_order == 0))
            sizes.append(_ilog(size, p))
            if size == _p_part(A.order, p):
                break
            k += 1
        counts = [sizes[i] - sizes[i - 1] for i in range(1, len(sizes))]
        for k in range(len(counts)):
            exactly = counts[k] - (counts[k + 1] if k + 1 < len(counts) else 0)
            out.extend([p ** (k + 1)] * exactly)
    return tuple(sorted(out, reverse=True))


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def subgroup_type(S: Subgroup | Group) -> str:
    """Short isomorphism-type tag such as ``C4``, ``V4``, ``C4xC2``, ``Q8``, ``D8``."""
    H = S.as_group() if isinstance(S, Subgroup) else S
    return group_type(H)


def group_type(H: Group) -> str:
    n = H.order
    if n == 1:
        return "1"
    if H.is_abelian:
        inv = _abelian_type(H)
        if inv == (2, 2):
            return "V4"
        if len(set(inv)) == 1 and inv[0] == H.prime() and len(inv) > 1:
            return f"E{n}"
        return "x".join(f"C{k}" for k in inv)
    if n == 8:
        return "Q8" if count_involutions(H) == 1 else "D8"
    cyc_max = int(H.elt_order.max()) == n // 2
    if cyc_max and H.prime() == 2:
        invs = count_involutions(H)
        z = center(H).order
        if z == 2 and invs == 1:
            return f"Q{n}"
        if z == 2 and invs == n // 2 + 1:
            return f"D{n}"
        if z == 2 and invs == n // 4 + 1:
            return f"SD{n}"
        if z == n // 4:
            return f"Mod{n}"
    return f"[{n}:{'.'.join(str(k) for k in abelian_invariants(H))}]"


def is_cyclic(G: Group) -> bool:
    return int(G.elt_order.max()) == G.order


def is_elementary_abelian(G: Group) -> bool:
    p = G.prime()
    return G.order == 1 or (G.is_abelian and p is not None and bool((G.elt_order <= p).all()))


def is_homocyclic(G: Group) -> bool:
    if not G.is_abelian:
        return False
    inv = _abelian_type(G)
    return len(set(inv)) <= 1


def has_cyclic_maximal(G: Group) -> bool:
    return G.order > 1 and int(G.elt_order.max()) * G.prime() >= G.order


def is_metacyclic(G: Group) -> bool:
    """True if some cyclic normal subgroup has a cyclic quotient."""
    if G.order == 1 or is_cyclic(G):
        return True
    conj = G.conj_table()
    seen: set[bytes] = set()
    for x in np.argsort(-G.elt_order, kind="stable"):
        x = int(x)
        if x == 0:
            continue
        N = Subgroup.generated(G, [x])
        if N.key in seen:
            continue
        seen.add(N.key)
        if not N.mask[conj[:, x]].all():
            continue
        Q, _ = quotient(G, N.mask)
        if is_cyclic(Q):
            return True
    return False


def is_characteristic(G: Group, S: Subgroup) -> bool:
    """Stable under every automorphism (checked on generators of Aut(G))."""
    from .autos import automorphism_group

    _, gens = automorphism_group(G)
    return all(S.image(a.perm) == S for a in gens)


def higman_check(G: Group) -> bool:
    """Omega_1 = Z = Phi = G', exponent 4 and class 2."""
    if G.prime() != 2:
        return False
    Z, D, F, O = center(G), derived(G), frattini(G), omega(G, 1)
    return Z == D == F == O and exponent(G) == 4 and nilpotency_class(G) == 2


def special_check(G: Group) -> bool:
    """Z = G' = Phi and this common subgroup is elementary abelian."""
    if G.prime() is None:
        return False
    Z, D, F = center(G), derived(G), frattini(G)
    if not (Z == D == F) or Z.order == 1:
        return False
    return bool((G.elt_order[Z.elements] <= G.prime()).all())


@dataclass(frozen=True)
class InvariantFingerprint:
    """Isomorphism invariants in a fixed field order.

    ``to_line`` produces the canonical single-line form used in reports.
    """

    order: int
    exponent: int
    nilpotency_class: int | None
    num_involutions: int
    p_rank: int
    abelian_invariants: tuple[int, ...]
    center_order: int
    center_type: tuple[int, ...]
    frattini_order: int
    derived_order: int
    generator_rank: int
    order_histogram: tuple[tuple[int, int], ...]

    def to_line(self) -> str:
        parts = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ".".join("x".join(map(str, t)) if isinstance(t, tuple) else str(t) for t in v) or "-"
            parts.append(f"{f.name}={v}")
        return ";".join(parts)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["abelian_invariants"] = list(self.abelian_invariants)
        d["center_type"] = list(self.center_type)
        d["order_histogram"] = [list(t) for t in self.order_histogram]
        return d


FINGERPRINT_FIELDS = tuple(f.name for f in fields(InvariantFingerprint))


def fingerprint(G: Group) -> InvariantFingerprint:
    if "fingerprint" in G._cache:
        return G._cache["fingerprint"]
    p = G.prime() or 2
    Z = center(G)
    hist = Counter(int(k) for k in G.elt_order)
    fp = InvariantFingerprint(
        order=G.order,
        exponent=exponent(G),
        nilpotency_class=nilpotency_class(G),
        num_involutions=count_involutions(G),
        p_rank=p_rank(G, p),
        abelian_invariants=abelian_invariants(G),
        center_order=Z.order,
        center_type=_abelian_type(Z.as_group()) if Z.order > 1 else (),
        frattini_order=frattini(G).order if G.prime() or G.order == 1 else 0,
        derived_order=derived(G).order,
        generator_rank=generator_rank(G) if G.prime() or G.order == 1 else 0,
        order_histogram=tuple(sorted(hist.items())),
    )
    G._cache["fingerprint"] = fp
    return fp


def involution_bucket(n: int) -> str:
    """Involution count bucketed as ``1``, ``3`` or ``>3`` (other values verbatim)."""
    if n > 3:
        return ">3"
    return str(n)


def central_involutions(G: Group) -> np.ndarray:
    Z = center(G)
    return np.flatnonzero(Z.mask & (G.elt_order == 2))


def subgroup_involutions(S: Subgroup) -> np.ndarray:
    return S.elements[S.parent.elt_order[S.elements] == 2]


def has_self_centralizing_v4(G: Group) -> bool:
    """Some V4 subgroup V with C_G(V) = V."""
    from .subgroups import centralizer

    invs = np.flatnonzero(G.elt_order == 2)
    for i, x in enumerate(invs):
        for y in invs[i + 1:]:
            if G.mul[x, y] != G.mul[y, x]:
                continue
            V = Subgroup.generated(G, [int(x), int(y)])
            if centralizer(G, V).order == 4:
                return True
    return False


__all__ = [
    "InvariantFingerprint",
    "FINGERPRINT_FIELDS",
    "abelian_invariants",
    "agemo",
    "count_involutions",
    "fingerprint",
    "group_type",
    "has_cyclic_maximal",
    "has_self_centralizing_v4",
    "higman_check",
    "involution_bucket",
    "is_characteristic",
    "is_cyclic",
    "is_elementary_abelian",
    "is_homocyclic",
    "is_metacyclic",
    "maximal_subgroups",
    "p_rank",
    "special_check",
    "subgroup_type",
]
