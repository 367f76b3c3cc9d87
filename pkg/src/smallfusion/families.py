"""Named constructors for the 2-group families, with expected invariants.

Every family is parameterised so that the group has a predictable order:

============  =======================  ==============
text form     group                    order
============  =======================  ==============
``C:n``       C_{2^n}                  2^n
``Cnm:n,m``   C_{2^n} x C_{2^m}        2^{n+m}
``D:n``       dihedral                 2^n
``SD:n``      semidihedral             2^n
``Q:n``       generalized quaternion   2^n
``Mod:n``     modular                  2^n
``wr:n``      C_{2^n} wr C_2           2^{2n+1}
``Qnm:n,m``   Q_{2^n} x Q_{2^m}        2^{n+m}
``QC:n,m``    Q_{2^n} x C_{2^m}        2^{n+m}
``QD:n,m``    Q_{2^n} x D_{2^m}        2^{n+m}
``QCstar:3,m`` Q_8 * C_{2^m}           2^{m+2}
``QDstar:3,m`` Q_8 * D_{2^m}           2^{m+2}
``X:n``       X_n                      2^n
``Y:n``       Y_n                      2^n
``Q8wrC2``    Q_8 wr C_2               2^7
``suz``       Sylow 2 of PSU_3(4)      2^6
============  =======================  ==============
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConstructionInvalid, ParamOutOfRange, SemanticError
from .field import F16, f16_mul, f16_pow
from .group import Group, central_product, check_order_cap, direct_product, wreath_c2
from .presentation import PcPresentation, collect, pc


class Family(enum.Enum):
    Cyclic = "C"
    C_nm = "Cnm"
    Dihedral = "D"
    Semidihedral = "SD"
    Quaternion = "Q"
    Modular = "Mod"
    Wreathed = "wr"
    Q_nm = "Qnm"
    QC_nm = "QC"
    QD_nm = "QD"
    QCstar_nm = "QCstar"
    QDstar_nm = "QDstar"
    X_n = "X"
    Y_n = "Y"
    Q8wrC2 = "Q8wrC2"
    Suz = "suz"


_ARITY = {
    Family.Cyclic: 1, Family.C_nm: 2, Family.Dihedral: 1, Family.Semidihedral: 1,
    Family.Quaternion: 1, Family.Modular: 1, Family.Wreathed: 1, Family.Q_nm: 2,
    Family.QC_nm: 2, Family.QD_nm: 2, Family.QCstar_nm: 2, Family.QDstar_nm: 2,
    Family.X_n: 1, Family.Y_n: 1, Family.Q8wrC2: 0, Family.Suz: 0,
}

# smallest allowed value of each parameter
_MINIMA = {
    Family.Cyclic: (1,), Family.C_nm: (1, 1), Family.Dihedral: (2,), Family.Semidihedral: (4,),
    Family.Quaternion: (3,), Family.Modular: (4,), Family.Wreathed: (1,), Family.Q_nm: (3, 3),
    Family.QC_nm: (3, 1), Family.QD_nm: (3, 2), Family.QCstar_nm: (3, 2), Family.QDstar_nm: (3, 3),
    Family.X_n: (6,), Family.Y_n: (6,), Family.Q8wrC2: (), Family.Suz: (),
}

_ALIASES = {f.value.lower(): f for f in Family}
_ALIASES.update({"wreathed": Family.Wreathed, "cyclic": Family.Cyclic, "dihedral": Family.Dihedral,
                 "semidihedral": Family.Semidihedral, "quaternion": Family.Quaternion,
                 "modular": Family.Modular, "q8wrc2": Family.Q8wrC2, "suzuki": Family.Suz,
                 "qc*": Family.QCstar_nm, "qd*": Family.QDstar_nm})


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    params: tuple[int, ...] = ()

    def __post_init__(self):
        arity = _ARITY[self.family]
        if len(self.params) != arity:
            raise ParamOutOfRange(f"{self.family.value} takes {arity} parameter(s), got {len(self.params)}")
        for value, low in zip(self.params, _MINIMA[self.family]):
            if value < low:
                raise ParamOutOfRange(f"{self.text()} is outside the family's range (parameter >= {low})")
        if self.family in (Family.QCstar_nm, Family.QDstar_nm) and self.params[0] != 3:
            raise ParamOutOfRange(f"{self.text()}: starred products are defined with a Q_8 factor (first parameter 3)")

    @property
    def sort_key(self):
        return (self.order, list(Family).index(self.family), self.params)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def text(self) -> str:
        if not self.params:
            return self.family.value
        return f"{self.family.value}:{','.join(map(str, self.params))}"

    __str__ = text

    @property
    def order(self) -> int:
        f, p = self.family, self.params
        if f is Family.Wreathed:
            return 2 ** (2 * p[0] + 1)
        if f is Family.Q8wrC2:
            return 128
        if f is Family.Suz:
            return 64
        if f in (Family.QCstar_nm, Family.QDstar_nm):
            return 2 ** (p[0] + p[1] - 1)
        return 2 ** sum(p)

    @property
    def display_name(self) -> str:
        f, p = self.family, self.params
        names = {
            Family.Cyclic: "C_{2^%d}", Family.Dihedral: "D_{2^%d}", Family.Semidihedral: "SD_{2^%d}",
            Family.Quaternion: "Q_{2^%d}", Family.Modular: "Mod_%d", Family.Wreathed: "C_{2^%d}wrC_2",
            Family.X_n: "X_%d", Family.Y_n: "Y_%d",
        }
        if f in names:
            return names[f] % p
        if f is Family.C_nm:
            return f"C_{{{p[0]},{p[1]}}}"
        if f is Family.Q_nm:
            return f"Q_{{{p[0]},{p[1]}}}"
        if f is Family.QC_nm:
            return f"QC_{{{p[0]},{p[1]}}}"
        if f is Family.QD_nm:
            return f"QD_{{{p[0]},{p[1]}}}"
        if f is Family.QCstar_nm:
            return f"QC*_{{{p[0]},{p[1]}}}"
        if f is Family.QDstar_nm:
            return f"QD*_{{{p[0]},{p[1]}}}"
        return "Q_8wrC_2" if f is Family.Q8wrC2 else "Suz"


_SPEC_RE = re.compile(r"^\s*([A-Za-z0-9_*]+)\s*(?::\s*(-?\d+(?:\s*,\s*-?\d+)*))?\s*$")


def parse_spec(text: str) -> FamilySpec:
    """Parse the canonical text form (``X:7``, ``QCstar:3,5``, ``wr:4``, ``suz``)."""
    m = _SPEC_RE.match(text)
    if not m:
        raise SemanticError(f"cannot parse family spec {text!r}")
    fam = _ALIASES.get(m.group(1).lower())
    if fam is None:
        raise SemanticError(f"unknown family {m.group(1)!r}")
    params = tuple(int(x) for x in m.group(2).split(",")) if m.group(2) else ()
    return FamilySpec(fam, params)


def spec(family: Family | str, *params: int) -> FamilySpec:
    if isinstance(family, str):
        return parse_spec(family + (":" + ",".join(map(str, params)) if params else ""))
    return FamilySpec(family, tuple(params))


# ------------------------------------------------------------- presentations

def cyclic_pres(n: int, g: str = "c") -> PcPresentation:
    return pc(f"C{2**n}", f"{g}:{2**n}")


def dihedral_pres(n: int) -> PcPresentation:
    return pc(f"D{2**n}", f"t:2, r:{2**(n-1)}", conjs={"r^t": "r^-1"})


def semidihedral_pres(n: int) -> PcPresentation:
    return pc(f"SD{2**n}", f"t:2, r:{2**(n-1)}", conjs={"r^t": f"r^{2**(n-2) - 1}"})


def quaternion_pres(n: int, a: str = "a", b: str = "b") -> PcPresentation:
    return pc(f"Q{2**n}", f"{b}:2, {a}:{2**(n-1)}", pows={b: f"{a}^{2**(n-2)}"}, conjs={f"{a}^{b}": f"{a}^-1"})


def modular_pres(n: int) -> PcPresentation:
    return pc(f"Mod{2**n}", f"y:2, x:{2**(n-1)}", conjs={"x^y": f"x^{2**(n-2) + 1}"})


def wreathed_pres(n: int) -> PcPresentation:
    return pc(f"C{2**n}wrC2", f"t:2, a:{2**n}, b:{2**n}", conjs={"a^t": "b", "b^t": "a"})


def x_pres(n: int) -> PcPresentation:
    return pc(
        f"X{n}", f"d:2, b:2, a:4, c:{2**(n-4)}",
        pows={"d": f"c^{2**(n-5)}", "b": "a^2"},
        conjs={"a^b": "a^-1", "c^d": "c^-1 a^2"},
    )


def y_pres(n: int) -> PcPresentation:
    return pc(
        f"Y{n}", f"d:2, b:2, a:4, c:{2**(n-4)}",
        pows={"d": f"a^2 c^{2**(n-5)}", "b": "a^2"},
        conjs={"a^b": "a^-1", "c^d": "c^-1"},
    )


def product_pres(name: str, *factors: PcPresentation) -> PcPresentation:
    """Direct product of presentations with disjoint generator names."""
    gens: list[str] = []
    orders: list[int] = []
    pows: dict[int, tuple] = {}
    conjs: dict[tuple[int, int], tuple] = {}
    for P in factors:
        off = len(gens)
        if set(gens) & set(P.gens):
            raise SemanticError("factor presentations must use distinct generator names")
        gens.extend(P.gens)
        orders.extend(P.rel_orders)
        shift = lambda w, off=off: tuple((g + off, e) for g, e in w)
        pows.update({i + off: shift(w) for i, w in P.power_rels.items()})
        conjs.update({(i + off, j + off): shift(w) for (i, j), w in P.conj_rels.items()})
    return PcPresentation(tuple(gens), tuple(orders), pows, conjs, name=name)


def presentation(s: FamilySpec) -> PcPresentation | None:
    """The polycyclic presentation behind ``s`` (None for the constructed families)."""
    f, p = s.family, s.params
    name = s.text()
    if f is Family.Cyclic:
        return cyclic_pres(p[0])
    if f is Family.C_nm:
        return product_pres(name, cyclic_pres(p[0], "a"), cyclic_pres(p[1], "b"))
    if f is Family.Dihedral:
        return dihedral_pres(p[0])
    if f is Family.Semidihedral:
        return semidihedral_pres(p[0])
    if f is Family.Quaternion:
        return quaternion_pres(p[0])
    if f is Family.Modular:
        return modular_pres(p[0])
    if f is Family.Wreathed:
        return wreathed_pres(p[0])
    if f is Family.X_n:
        return x_pres(p[0])
    if f is Family.Y_n:
        return y_pres(p[0])
    if f is Family.Q_nm:
        return product_pres(name, quaternion_pres(p[0]), quaternion_pres(p[1], "u", "v"))
    if f is Family.QC_nm:
        return product_pres(name, quaternion_pres(p[0]), cyclic_pres(p[1], "c"))
    if f is Family.QD_nm:
        return product_pres(name, quaternion_pres(p[0]), dihedral_pres(p[1]))
    return None


# -------------------------------------------------------------- constructions

def build(s: FamilySpec | str) -> Group:
    if isinstance(s, str):
        s = parse_spec(s)
    # the cap applies to cached groups too
    check_order_cap(s.order)
    return _build(s)


@lru_cache(maxsize=None)
def _build(s: FamilySpec) -> Group:
    f, p = s.family, s.params
    name = s.text()
    pres = presentation(s)
    if pres is not None:
        return collect(pres, name=name)
    if f is Family.QCstar_nm:
        Q = collect(quaternion_pres(3))
        C = collect(cyclic_pres(p[1]))
        return central_product(Q, Q.power(Q.named["a"], 2), C,
                               C.power(C.named["c"], 2 ** (p[1] - 1)), name=name)
    if f is Family.QDstar_nm:
        Q = collect(quaternion_pres(3))
        D = collect(dihedral_pres(p[1]))
        return central_product(Q, Q.power(Q.named["a"], 2), D,
                               D.power(D.named["r"], 2 ** (p[1] - 2)), name=name)
    if f is Family.Q8wrC2:
        return wreath_c2(collect(quaternion_pres(3)), name=name)
    if f is Family.Suz:
        return suz()
    raise ParamOutOfRange(f"no construction for {name}")


def suz_carrier() -> list[tuple[int, int]]:
    """Pairs (alpha, beta) of F16 with beta + beta^4 = alpha^5, sorted."""
    return [(a, b) for a in range(16) for b in range(16) if b ^ f16_pow(b, 4) == f16_pow(a, 5)]


def suz() -> Group:
    """The Sylow 2-subgroup of PSU_3(4) on its unitary-group carrier.

    Product: (alpha, beta)(gamma, delta) = (alpha+gamma, beta+delta+alpha^4 gamma).
    """
    carrier = suz_carrier()
    if len(carrier) != 64:
        raise ConstructionInvalid(f"carrier has {len(carrier)} elements, expected 64")
    index = {e: i for i, e in enumerate(carrier)}
    n = len(carrier)
    mul = np.empty((n, n), dtype=np.int64)
    for i, (a, b) in enumerate(carrier):
        a4 = f16_pow(a, 4)
        for j, (c, d) in enumerate(carrier):
            prod = (a ^ c, b ^ d ^ f16_mul(a4, c))
            k = index.get(prod)
            if k is None:
                raise ConstructionInvalid(f"product of {carrier[i]} and {carrier[j]} leaves the carrier")
            mul[i, j] = k
    labels = [f"({a},{b})" for a, b in carrier]
    return Group(mul, source="construction", name="suz", labels=labels)


# --------------------------------------------------------- expected invariants

@dataclass(frozen=True)
class ExpectedFingerprint:
    """The invariants a family member is known to have.

    ``involutions`` is bucketed as ``"1"``, ``"3"`` or ``">3"``.
    ``odd_orders`` is None when no claim is made.
    """

    order: int
    involutions: str
    p_rank: int
    odd_orders: frozenset[int] | None

    def mismatches(self, order: int, involutions: int, p_rank: int, odd_orders=None) -> list[str]:
        from .invariants import involution_bucket

        out = []
        if order != self.order:
            out.append(f"order {order} != {self.order}")
        if involution_bucket(involutions) != self.involutions:
            out.append(f"involutions {involutions} not in bucket {self.involutions}")
        if p_rank != self.p_rank:
            out.append(f"2-rank {p_rank} != {self.p_rank}")
        if odd_orders is not None and self.odd_orders is not None and frozenset(odd_orders) != self.odd_orders:
            out.append(f"odd automorphism orders {sorted(odd_orders)} != {sorted(self.odd_orders)}")
        return out


def expected_fingerprint(s: FamilySpec | str) -> ExpectedFingerprint:
    if isinstance(s, str):
        s = parse_spec(s)
    f, p = s.family, s.params
    three = frozenset({3})
    none: frozenset[int] = frozenset()
    if f is Family.Cyclic:
        return ExpectedFingerprint(s.order, "1", 1, none)
    if f is Family.C_nm:
        return ExpectedFingerprint(s.order, "3", 2, three if p[0] == p[1] else none)
    if f is Family.Dihedral:
        if p[0] == 2:
            return ExpectedFingerprint(4, "3", 2, three)
        return ExpectedFingerprint(s.order, ">3", 2, none)
    if f in (Family.Semidihedral, Family.Wreathed):
        return ExpectedFingerprint(s.order, ">3", 2, none)
    if f is Family.Quaternion:
        return ExpectedFingerprint(s.order, "1", 1, three if p[0] == 3 else none)
    if f is Family.Modular:
        return ExpectedFingerprint(s.order, "3", 2, none)
    if f is Family.Q_nm:
        return ExpectedFingerprint(s.order, "3", 2, three if 3 in p else none)
    if f is Family.QC_nm:
        return ExpectedFingerprint(s.order, "3", 2, three if p[0] == 3 else none)
    if f is Family.QD_nm:
        # 2-rank 3: outside the classified range, so no claim about odd automorphisms
        return ExpectedFingerprint(s.order, ">3", 3, None)
    if f is Family.QCstar_nm:
        return ExpectedFingerprint(s.order, ">3", 2, three)
    if f is Family.QDstar_nm:
        return ExpectedFingerprint(s.order, ">3", 2, frozenset({3, 5}) if p[1] == 3 else three)
    if f in (Family.X_n, Family.Y_n):
        return ExpectedFingerprint(s.order, "3", 2, three)
    if f is Family.Q8wrC2:
        return ExpectedFingerprint(128, ">3", 2, three)
    return ExpectedFingerprint(64, "3", 2, frozenset({3, 5}))


# ----------------------------------------------------------------- catalogues

def catalogue(max_order: int = 2**7) -> list[FamilySpec]:
    """One spec per isomorphism type from every family with order <= max_order.

    Coincidences between families are removed: D_4 = C_{1,1}, C_2 wr C_2 = D_8,
    X_6 = Y_6 (Y_6 kept), C_{n,m} = C_{m,n} and Q_{n,m} = Q_{m,n}.
    """
    top = max_order.bit_length() - 1
    out: list[FamilySpec] = []
    for n in range(1, top + 1):
        out.append(FamilySpec(Family.Cyclic, (n,)))
        for m in range(n, top - n + 1):
            out.append(FamilySpec(Family.C_nm, (n, m)))
    for n in range(3, top + 1):
        out.append(FamilySpec(Family.Dihedral, (n,)))
        out.append(FamilySpec(Family.Quaternion, (n,)))
    for n in range(4, top + 1):
        out.append(FamilySpec(Family.Semidihedral, (n,)))
        out.append(FamilySpec(Family.Modular, (n,)))
    for n in range(2, (top - 1) // 2 + 1):
        out.append(FamilySpec(Family.Wreathed, (n,)))
    for n in range(3, top + 1):
        for m in range(n, top - n + 1):
            out.append(FamilySpec(Family.Q_nm, (n, m)))
        for m in range(1, top - n + 1):
            out.append(FamilySpec(Family.QC_nm, (n, m)))
        for m in range(3, top - n + 1):
            out.append(FamilySpec(Family.QD_nm, (n, m)))
    for m in range(2, top - 1):
        out.append(FamilySpec(Family.QCstar_nm, (3, m)))
    for m in range(3, top - 1):
        out.append(FamilySpec(Family.QDstar_nm, (3, m)))
    for n in range(6, top + 1):
        if n > 6:
            out.append(FamilySpec(Family.X_n, (n,)))
        out.append(FamilySpec(Family.Y_n, (n,)))
    if max_order >= 128:
        out.append(FamilySpec(Family.Q8wrC2, ()))
    if max_order >= 64:
        out.append(FamilySpec(Family.Suz, ()))
    return sorted(out)


def rank2_catalogue(max_order: int = 2**7) -> list[FamilySpec]:
    """Catalogue members of 2-rank 2 (the classified range)."""
    return [s for s in catalogue(max_order) if expected_fingerprint(s).p_rank == 2]


def metacyclic_presentations(max_order: int = 2**6, p: int = 2) -> list[PcPresentation]:
    """Consistent presentations <b, a | a^{p^m}, b^{p^n} = a^s, a^b = a^r> up to the order bound.

    The list contains duplicates up to isomorphism; see :func:`metacyclic_groups`.
    """
    out = []
    top = 0
    while p ** (top + 1) <= max_order:
        top += 1
    for total in range(2, top + 1):
        for n in range(1, total):
            m = total - n
            A, B = p**m, p**n
            for r in range(1, A):
                if r % p == 0:
                    continue
                for s_exp in range(0, A, 1):
                    # a^r must have the order of a, b^B must centralize a (r^B = 1 mod A),
                    # and a^s must be fixed by conjugation (s r = s mod A)
                    if pow(r, B, A) != 1 or (s_exp * r - s_exp) % A:
                        continue
                    pows = {0: ((1, s_exp),)} if s_exp else {}
                    out.append(PcPresentation(("b", "a"), (B, A), pows, {(0, 1): ((1, r),)},
                                              name=f"M({p}^{n},{p}^{m};r={r},s={s_exp})"))
    return out


def metacyclic_groups(max_order: int = 2**6, p: int = 2, include_cyclic: bool = False) -> list[Group]:
    """Metacyclic p-groups of order <= max_order, one per isomorphism type."""
    from .autos import is_isomorphic
    from .errors import InconsistentPresentation
    from .invariants import fingerprint, is_cyclic

    groups: list[Group] = []
    for pres in metacyclic_presentations(max_order, p):
        try:
            G = collect(pres)
        except InconsistentPresentation:
            continue
        if is_cyclic(G) and not include_cyclic:
            continue
        fp = fingerprint(G)
        if any(fingerprint(H) == fp and is_isomorphic(G, H) for H in groups):
            continue
        groups.append(G)
    groups.sort(key=lambda G: (G.order, fingerprint(G).to_line()))
    return groups


def family_of(G: Group) -> FamilySpec | None:
    """The catalogue spec isomorphic to G, if any."""
    from .autos import is_isomorphic
    from .invariants import fingerprint

    fp = fingerprint(G)
    for s in catalogue(max(G.order, 2)):
        if s.order != G.order:
            continue
        H = build(s)
        if fingerprint(H) == fp and is_isomorphic(G, H):
            return s
    return None


__all__ = [
    "ExpectedFingerprint",
    "F16",
    "Family",
    "FamilySpec",
    "build",
    "catalogue",
    "expected_fingerprint",
    "family_of",
    "metacyclic_groups",
    "metacyclic_presentations",
    "parse_spec",
    "presentation",
    "rank2_catalogue",
    "spec",
    "suz",
    "suz_carrier",
]
