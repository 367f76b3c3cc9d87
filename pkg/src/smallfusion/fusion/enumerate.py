"""Enumeration of all saturated fusion systems on a small p-group."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..autos import automorphism_group
from ..group import Group
from ..perms import PermGroup, invert, p_prime_overgroups
from .essentials import EssentialCandidate, essential_candidates
from .saturation import is_saturated
from .system import Essential, FusionSystem, _p_part, validate


def aut_group_perms(P: Group) -> PermGroup:
    """Aut(P) as an explicit permutation group on the elements of P (cached)."""
    if "aut_perms" not in P._cache:
        order, autos = automorphism_group(P)
        conj = P.conj_table()
        gens = [a.perm for a in autos] + [conj[g] for g in P.generators()]
        P._cache["aut_perms"] = PermGroup(gens, P.order, limit=order)
    return P._cache["aut_perms"]


def aut_p_choices(P: Group) -> list[tuple[np.ndarray, ...]]:
    """Candidates for Aut_F(P): overgroups of Inn(P) in which Inn(P) is Sylow,
    one per Aut(P)-conjugacy class, each given by generators."""
    p = P.prime() or 2
    order, _ = automorphism_group(P)
    if _p_part(order, p) == order:
        return [()]
    A = aut_group_perms(P)
    conj = P.conj_table()
    base = [A.find(conj[g]) for g in P.generators()] or [0]
    inn = A.closure(base)
    out = []
    for _, gens in p_prime_overgroups(A, base, p, up_to_conjugacy=True):
        extra = tuple(A.elements[g] for g in gens if not inn[g])
        out.append(extra)
    out.sort(key=len)
    return out


@dataclass
class EnumerationResult:
    systems: list[FusionSystem]
    candidates: list[EssentialCandidate]
    aut_p_choices: int
    tried: int
    saturated_before_dedupe: int


def _signature(F: FusionSystem) -> tuple:
    sizes = tuple(sorted(len(c) for c in F.element_classes))
    subs = tuple(sorted((c[0].order, len(c)) for c in F.subgroup_classes))
    return (F.aut_P_order, sizes, subs)


def conjugate_map(m: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """beta^-1 m beta: the map beta(x) -> beta(m(x)) on beta(domain)."""
    out = np.full(len(m), -1, dtype=np.int64)
    dom = np.flatnonzero(m >= 0)
    out[beta[dom]] = beta[m[dom]]
    return out


def _contained(F1: FusionSystem, F2: FusionSystem, beta: np.ndarray) -> bool:
    """F1 transported along beta lies inside F2."""
    return all(F2.contains_map(conjugate_map(m, beta)) for m in F1.generating_maps)


def isomorphism_between(F1: FusionSystem, F2: FusionSystem) -> np.ndarray | None:
    """An automorphism beta of P carrying F1 onto F2, or None."""
    if F1.P is not F2.P:
        raise ValueError("systems live on different groups")
    if _signature(F1) != _signature(F2):
        return None
    A = aut_group_perms(F1.P)
    for beta in A.elements:
        if _contained(F1, F2, beta) and _contained(F2, F1, invert(beta)):
            return beta
    return None


def are_isomorphic(F1: FusionSystem, F2: FusionSystem) -> bool:
    return isomorphism_between(F1, F2) is not None


def enumerate_saturated(P: Group, details: bool = False):
    """Every saturated fusion system on P, one per Aut(P)-conjugacy class.

    Alperin's fusion theorem reduces a saturated system to Aut_F(P) plus the
    automizers of one fully normalized member of each essential class.  The
    search runs over Aut(P)-classes of choices for Aut_F(P), subsets of the
    essential candidate classes and their admissible automizers; each choice
    is generated, validated and checked for saturation, then duplicates are
    removed up to Aut(P)-conjugation.
    """
    cands = essential_candidates(P)
    autp = aut_p_choices(P)
    options = [[None] + list(c.automizers) for c in cands]
    kept: list[FusionSystem] = []
    tried = 0
    saturated = 0
    for extra in autp:
        for choice in itertools.product(*options):
            tried += 1
            ess = [Essential(c.U, a) for c, a in zip(cands, choice) if a is not None]
            F = FusionSystem(P, extra, ess)
            if not validate(F).ok:
                continue
            if not is_saturated(F):
                continue
            saturated += 1
            if any(are_isomorphic(F, G) for G in kept):
                continue
            kept.append(F)
    kept.sort(key=lambda F: (F.aut_P_order, len(F.essentials), _signature(F)))
    if details:
        return EnumerationResult(kept, cands, len(autp), tried, saturated)
    return kept
