"""Center, strongly closed subgroups, resistance and quotients of fusion systems."""

from __future__ import annotations

import numpy as np

from ..errors import NotCentralInF
from ..group import quotient
from ..subgroups import Subgroup, center, commutator_subgroup
from .system import Essential, FusionSystem


def fusion_center(F: FusionSystem) -> Subgroup:
    """Z(F): central elements of P whose F-conjugacy class is a singleton.

    Such an element lies in every F-centric subgroup and is fixed by all of
    its F-automorphisms, which generate F; the converse is immediate.
    """
    P = F.P
    Z = center(P)
    sizes = np.array([len(c) for c in F.element_classes])
    single = sizes[F.element_class_of] == 1
    return Subgroup(P, Z.mask & single)


def is_strongly_closed(F: FusionSystem, S: Subgroup) -> bool:
    """No F-morphism moves an element of S outside S."""
    cls = F.element_class_of
    inside = np.zeros(len(F.element_classes), dtype=bool)
    inside[cls[S.elements]] = True
    return bool((S.mask | ~inside[cls]).all())


def strongly_closed_subgroups(F: FusionSystem, within: Subgroup | None = None) -> list[Subgroup]:
    """All strongly F-closed subgroups (contained in ``within`` if given), by order."""
    out = []
    for S in F.lattice.subgroups:
        if within is not None and not (S <= within):
            continue
        if S.is_normal() and is_strongly_closed(F, S):
            out.append(S)
    return out


def central_series_of_closed(F: FusionSystem, Q: Subgroup) -> list[Subgroup] | None:
    """A chain 1 = Q_0 < ... < Q_n = Q of strongly closed subgroups with
    [Q, Q_i] <= Q_{i-1}, or None if there is none."""
    P = F.P
    closed = strongly_closed_subgroups(F, Q)
    if not closed or closed[-1] != Q:
        return None
    n = len(closed)
    prev: list[int | None] = [None] * n
    reached = [False] * n
    reached[0] = True  # the trivial subgroup comes first
    for j in range(1, n):
        T = closed[j]
        comm = commutator_subgroup(P, T, Q)
        for i in range(j):
            if reached[i] and closed[i] < T and comm <= closed[i]:
                reached[j] = True
                prev[j] = i
                break
    if not reached[-1]:
        return None
    chain = []
    j: int | None = n - 1
    while j is not None:
        chain.append(closed[j])
        j = prev[j]
    return chain[::-1]


def resistance_check(F: FusionSystem, Q: Subgroup | None = None) -> bool:
    """True if Q (default P) has a central series of strongly F-closed subgroups.

    When it does, F is the normalizer system N_F(Q).
    """
    Q = Subgroup.whole(F.P) if Q is None else Q
    if not is_strongly_closed(F, Q):
        raise ValueError("subgroup is not strongly closed")
    return central_series_of_closed(F, Q) is not None


def is_controlled_by_aut_p(F: FusionSystem) -> bool:
    """F equals the system generated by Aut_F(P) alone (F = N_F(P))."""
    N = FusionSystem(F.P, F.extra_aut_P)
    return all(N.contains_map(m) for m in F.generating_maps)


def quotient_fusion(F: FusionSystem, Z: Subgroup) -> FusionSystem:
    """F/Z on P/Z, for Z contained in Z(F); generating data is pushed through the projection."""
    if not (Z <= fusion_center(F)):
        raise NotCentralInF("subgroup is not contained in the center of the fusion system")
    P = F.P
    if Z.order == 1:
        return F
    Q, proj = quotient(P, Z.mask)
    proj = np.asarray(proj, dtype=np.int64)

    def push(m: np.ndarray) -> np.ndarray:
        out = np.full(Q.order, -1, dtype=np.int64)
        dom = np.flatnonzero(m >= 0)
        out[proj[dom]] = proj[m[dom]]
        return out

    auts = [push(a) for a in F.extra_aut_P]
    ess = []
    for E in F.essentials:
        mask = np.zeros(Q.order, dtype=bool)
        mask[proj[E.U.elements]] = True
        ess.append(Essential(Subgroup(Q, mask), tuple(push(a) for a in E.gens)))
    label = f"{F.label}/Z" if F.label else None
    return FusionSystem(Q, auts, ess, label=label)
