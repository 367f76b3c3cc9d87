"""Saturation check: every F-class of subgroups has a fully normalized member
that is fully automized and receptive."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..subgroups import Subgroup, centralizer, normalizer
from .system import FusionSystem, _p_part, aut_p_maps


@dataclass(frozen=True)
class ClassWitness:
    """Result for one F-class of subgroups, checked at ``rep``."""

    class_index: int
    rep: Subgroup
    class_size: int
    fully_automized: bool
    receptive: bool

    @property
    def ok(self) -> bool:
        return self.fully_automized and self.receptive


@dataclass
class Failure:
    class_index: int
    axiom: str
    detail: str
    morphism: np.ndarray | None = None


@dataclass
class SaturationVerdict:
    saturated: bool
    witnesses: list[ClassWitness] = field(default_factory=list)
    first_failure: Failure | None = None

    def __bool__(self) -> bool:
        return self.saturated


def fully_normalized_rep(F: FusionSystem, members: list[Subgroup]) -> Subgroup:
    """Member with the largest P-normalizer (first such in lattice order)."""
    best = max(normalizer(F.P, S).order for S in members)
    return next(S for S in members if normalizer(F.P, S).order == best)


def is_fully_automized(F: FusionSystem, Q: Subgroup) -> bool:
    """Aut_P(Q) is a Sylow p-subgroup of Aut_F(Q)."""
    P = F.P
    autp = normalizer(P, Q).order // centralizer(P, Q).order
    return _p_part(F.automizer_order(Q), F.prime) == autp


def _extension_subgroup(F: FusionSystem, phi_full: np.ndarray, phi_inv_full: np.ndarray,
                        R: Subgroup, Q: Subgroup, autp_q: set[bytes]) -> Subgroup:
    """N_phi = {g in N_P(R) : phi^-1 c_g phi lies in Aut_P(Q)} for phi: R -> Q."""
    P = F.P
    conj = P.conj_table()
    NR = normalizer(P, R).elements
    pre = phi_inv_full[Q.elements]
    rows = phi_full[conj[NR][:, pre]]
    mask = np.zeros(P.order, dtype=bool)
    for g, row in zip(NR, rows):
        if row.astype(np.int64).tobytes() in autp_q:
            mask[g] = True
    return Subgroup(P, mask)


def is_receptive(F: FusionSystem, Q: Subgroup, members: list[Subgroup]) -> tuple[bool, Failure | None]:
    """Every F-isomorphism R -> Q extends to some F-morphism on N_phi."""
    P = F.P
    n = P.order
    autos = F.automizer(Q)
    autp_q = set(aut_p_maps(P, Q).keys())
    q_el = np.asarray(Q.elements, dtype=np.int64)
    a_full = []
    for a in autos:
        f = np.full(n, -1, dtype=np.int64)
        f[q_el] = a
        a_full.append(f)
    homs_q = F.homs(Q)
    for R in members:
        psi = next(v for v in homs_q.values() if R.mask[v].all())
        # phi0 = psi^-1 : R -> Q; every isomorphism R -> Q is a o phi0
        phi0 = np.full(n, -1, dtype=np.int64)
        phi0[psi] = q_el
        for a in a_full:
            phi = np.full(n, -1, dtype=np.int64)
            r_el = np.asarray(R.elements)
            phi[r_el] = a[phi0[r_el]]
            phi_inv = np.full(n, -1, dtype=np.int64)
            phi_inv[phi[r_el]] = r_el
            N = _extension_subgroup(F, phi, phi_inv, R, Q, autp_q)
            if N.order == R.order:
                continue
            pos = np.searchsorted(N.elements, r_el)
            want = phi[r_el]
            if not any(np.array_equal(v[pos], want) for v in F.homs(N).values()):
                return False, Failure(-1, "receptive",
                                      f"isomorphism from a subgroup of order {R.order} does not extend "
                                      f"to its extension subgroup of order {N.order}", phi)
    return True, None


def is_saturated(F: FusionSystem, stop_at_first: bool = True) -> SaturationVerdict:
    """Check the saturation axioms class by class.

    A fully normalized member of each class is tested; in a saturated system
    every fully normalized subgroup is fully automized and receptive, and
    conversely one such member per class suffices.
    """
    witnesses: list[ClassWitness] = []
    first: Failure | None = None
    classes = F.subgroup_classes
    order = sorted(range(len(classes)), key=lambda i: -classes[i][0].order)
    for ci in order:
        members = classes[ci]
        Q = fully_normalized_rep(F, members)
        fa = is_fully_automized(F, Q)
        rec, fail = is_receptive(F, Q, members) if fa else (False, None)
        witnesses.append(ClassWitness(ci, Q, len(members), fa, rec))
        if first is None and not (fa and rec):
            if not fa:
                fail = Failure(ci, "fully automized",
                               f"Aut_P(Q) is not Sylow in Aut_F(Q) for |Q| = {Q.order}")
            fail.class_index = ci
            first = fail
            if stop_at_first:
                break
    witnesses.sort(key=lambda w: w.class_index)
    return SaturationVerdict(first is None, witnesses, first)
