"""Essential subgroups: strongly p-embedded subgroups, outer automizers,
and the candidate list used by the enumeration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..autos import automorphism_group
from ..group import Group, group_from_permutations, quotient
from ..perms import PermGroup, p_prime_overgroups
from ..subgroups import Subgroup, centralizer, normalizer, subgroup_lattice
from .saturation import fully_normalized_rep
from .system import FusionSystem, _p_part, aut_p_maps


def sylow_subgroup(G: Group, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown one normalizing p-element at a time."""
    target = _p_part(G.order, p)
    S = Subgroup.trivial(G)
    ppow = np.array([_p_part(int(o), p) == int(o) for o in G.elt_order])
    while S.order < target:
        N = normalizer(G, S)
        x = next(int(x) for x in np.flatnonzero(N.mask & ~S.mask & ppow))
        S = S.join([x])
    return S


def has_strongly_p_embedded(G: Group, p: int) -> bool:
    """G has a proper subgroup M with p | |M| and p not dividing |M ∩ M^g| for g outside M.

    Equivalently p divides |G| and the subgroup generated by the normalizers
    of the nontrivial subgroups of a Sylow p-subgroup T is proper.
    """
    if G.order % p:
        return False
    T = sylow_subgroup(G, p)
    H = T.as_group()
    emb = T.embedding
    M = Subgroup.trivial(G)
    for S in subgroup_lattice(H, cap=max(H.order, 1)).subgroups[1:]:
        N = normalizer(G, Subgroup.generated(G, emb[list(S.gens)]))
        if not (N <= M):
            M = M.join(N)
            if M.order == G.order:
                return False
    return True


def _table_of(perms: list[np.ndarray]) -> tuple[Group, dict[bytes, int]]:
    """Table group of the permutation group with the given element list."""
    degree = len(perms[0])
    PG = PermGroup([], degree)
    gens: list[np.ndarray] = []
    for x in perms:
        if x.tobytes() not in PG.index:
            gens.append(x)
            PG = PermGroup(gens, degree)
    grp, elems = group_from_permutations(gens or [np.arange(degree)], limit=len(perms) + 1)
    return grp, {e.tobytes(): i for i, e in enumerate(elems)}


def out_group(P: Group, Q: Subgroup, automizer: list[np.ndarray]) -> Group:
    """Automizer (images aligned with Q.elements) modulo Inn(Q)."""
    pos = np.full(P.order, -1, dtype=np.int64)
    pos[Q.elements] = np.arange(Q.order)
    local = [pos[a] for a in automizer]
    A, index = _table_of(local)
    conj = P.conj_table()
    inn = np.zeros(A.order, dtype=bool)
    for q in Q.elements:
        inn[index[pos[conj[q, Q.elements]].astype(np.int64).tobytes()]] = True
    return quotient(A, inn)[0] if inn.sum() > 1 else A


def is_centric(F: FusionSystem, Q: Subgroup) -> bool:
    """C_P(R) <= R for every R F-conjugate to Q."""
    return all(centralizer(F.P, R) <= R for R in F.f_class(Q))


def is_essential(F: FusionSystem, Q: Subgroup) -> bool:
    P = F.P
    if Q.order == P.order:
        return False
    aut = F.automizer(Q)
    if _p_part(len(aut), F.prime) == len(aut):
        return False
    if not is_centric(F, Q):
        return False
    return has_strongly_p_embedded(out_group(P, Q, aut), F.prime)


def essential_classes(F: FusionSystem) -> list[Subgroup]:
    """Fully normalized representatives of the F-classes of F-essential subgroups."""
    out = []
    for members in F.subgroup_classes:
        Q = fully_normalized_rep(F, members)
        if is_essential(F, Q):
            out.append(Q)
    return out


def essential_rank(F: FusionSystem) -> int:
    """Number of F-classes of F-essential subgroups."""
    return len(essential_classes(F))


def _extendable_restrictions(P: Group, U: Subgroup) -> set[bytes]:
    """Automorphisms of U (as permutations of U's positions) that extend to N_P(U)."""
    N = normalizer(P, U)
    _, autos = automorphism_group(N.as_group())
    emb = N.embedding
    pos = np.full(P.order, -1, dtype=np.int64)
    pos[U.elements] = np.arange(U.order)
    u_in_n = np.searchsorted(emb, U.elements)
    AN = PermGroup([a.perm for a in autos], N.order)
    imgs = pos[emb[AN.elements[:, u_in_n]]]
    keep = (imgs >= 0).all(axis=1)
    return {row.tobytes() for row in imgs[keep]}


def _normalizer_extends(A: PermGroup, mask: np.ndarray, bmask: np.ndarray, extendable: set[bytes]) -> bool:
    """Every element of the candidate automizer normalizing Aut_P(U) extends to N_P(U).

    This is forced by the extension axiom at a fully normalized U, where such
    automorphisms have N_P(U) as extension subgroup.
    """
    for a in np.flatnonzero(mask & ~bmask):
        if A.elements[a].tobytes() in extendable:
            continue
        if np.array_equal(A.conjugate_mask(bmask, int(a)), bmask):
            return False
    return True


@dataclass(frozen=True)
class EssentialCandidate:
    """A P-class of subgroups that can be essential, with its admissible automizers.

    Each automizer is a tuple of generators given as partial maps on ``U``.
    """

    U: Subgroup
    class_size: int
    aut_order: int
    automizers: tuple[tuple[np.ndarray, ...], ...]
    automizer_orders: tuple[int, ...]


def essential_candidates(P: Group) -> list[EssentialCandidate]:
    """Proper P-centric subgroup classes with an automizer A <= Aut(U) such that
    Aut_P(U) is Sylow in A and A/Inn(U) has a strongly p-embedded subgroup."""
    p = P.prime() or 2
    lat = subgroup_lattice(P)
    out = []
    for cls in lat.classes:
        U = lat.subgroups[cls[0]]
        if U.order == P.order or not (centralizer(P, U) <= U):
            continue
        H = U.as_group()
        aut_order, autos = automorphism_group(H)
        if _p_part(aut_order, p) == aut_order:
            continue
        pos = np.full(P.order, -1, dtype=np.int64)
        pos[U.elements] = np.arange(U.order)
        A = PermGroup([a.perm for a in autos], U.order, limit=aut_order)
        base = [A.find(pos[row]) for row in aut_p_maps(P, U).values()]
        inn_local = {A.find(pos[P.conj_table()[q, U.elements]]) for q in U.elements}
        extendable = _extendable_restrictions(P, U)
        bmask = A.closure(base)
        choices, orders = [], []
        for mask, gens in p_prime_overgroups(A, base, p):
            if not _normalizer_extends(A, mask, bmask, extendable):
                continue
            members = [A.elements[i] for i in np.flatnonzero(mask)]
            grp, index = _table_of(members)
            inn = np.zeros(grp.order, dtype=bool)
            for i in inn_local:
                inn[index[A.elements[i].tobytes()]] = True
            out_grp = quotient(grp, inn)[0] if inn.sum() > 1 else grp
            if not has_strongly_p_embedded(out_grp, p):
                continue
            maps = []
            for g in gens:
                m = np.full(P.order, -1, dtype=np.int64)
                m[U.elements] = U.elements[A.elements[g]]
                maps.append(m)
            choices.append(tuple(maps))
            orders.append(int(mask.sum()))
        if choices:
            out.append(EssentialCandidate(U, len(cls), aut_order, tuple(choices), tuple(orders)))
    return out
