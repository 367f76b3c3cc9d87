"""Summaries of fusion systems and matching against known realizing groups."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..families import Family, family_of
from ..invariants import fingerprint, subgroup_type
from .closed import fusion_center
from .essentials import essential_classes
from .system import FusionSystem


@dataclass(frozen=True)
class EssentialDescriptor:
    order: int
    type: str
    automizer_order: int
    class_size: int


@dataclass
class FusionRecord:
    base: str
    fingerprint: str
    aut_P_order: int
    essential_rank: int
    essentials: list[EssentialDescriptor]
    center_order: int
    involution_classes: int
    element_classes: int
    label: str | None
    equivalence: str = "conjugation of defining data by Aut(P)"

    def as_dict(self) -> dict:
        d = asdict(self)
        d["essentials"] = [asdict(e) for e in self.essentials]
        return d


def _odd_part(n: int) -> int:
    while n % 2 == 0:
        n //= 2
    return n


def realizing_label(F: FusionSystem, family: Family | None = None,
                    essentials: list[EssentialDescriptor] | None = None) -> str | None:
    """Name of the group type realizing F for the rank-2 families, when recognised."""
    if essentials is None:
        essentials = describe_essentials(F)
    if family is None:
        s = family_of(F.P)
        family = s.family if s is not None else None
    rank = len(essentials)
    types = sorted(e.type for e in essentials)
    odd = _odd_part(F.aut_P_order)
    if rank == 0:
        return "F_P(P)" if odd == 1 else f"P:C{odd}"
    if family is Family.Dihedral:
        return {1: "PGL2-type", 2: "PSL2-type"}.get(rank)
    if family is Family.Semidihedral:
        if rank == 2:
            return "PSL3-type"
        return "GL2-type" if types == ["Q8"] else "PSL2(q^2).2-type"
    if family is Family.Quaternion:
        return {1: "SL2.2-type", 2: "SL2-type"}.get(rank)
    if family is Family.Wreathed:
        if rank == 2:
            return "PSL3-type"
        return "wreathed-S3-type" if essentials[0].type.startswith("C") else "GL2-type"
    return None


def describe_essentials(F: FusionSystem) -> list[EssentialDescriptor]:
    out = []
    for Q in essential_classes(F):
        out.append(EssentialDescriptor(Q.order, subgroup_type(Q), F.automizer_order(Q), len(F.f_class(Q))))
    return sorted(out, key=lambda e: (e.order, e.type))


def fusion_record(F: FusionSystem, base: str | None = None) -> FusionRecord:
    P = F.P
    ess = describe_essentials(F)
    spec = family_of(P) if P.order <= 128 else None
    invs = sum(1 for c in F.element_classes if P.elt_order[c[0]] == 2)
    return FusionRecord(
        base=base or (spec.text() if spec is not None else P.name),
        fingerprint=fingerprint(P).to_line(),
        aut_P_order=F.aut_P_order,
        essential_rank=len(ess),
        essentials=ess,
        center_order=fusion_center(F).order,
        involution_classes=invs,
        element_classes=len(F.element_classes),
        label=realizing_label(F, spec.family if spec is not None else None, ess),
    )


def element_class_sizes(F: FusionSystem) -> list[int]:
    return sorted(int(np.size(c)) for c in F.element_classes)
