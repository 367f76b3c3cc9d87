"""Structural facts about 2-groups and their automorphisms, phrased as checks.

Each ``*_violations`` function inspects one group and returns a list of
human-readable violations; an empty list means the property holds.
"""

from __future__ import annotations

import numpy as np

from .autos import (
    Automorphism,
    automorphism_from_images,
    automorphism_group,
    find_odd_automorphism,
    is_isomorphic,
    is_transitive_on_maximals,
)
from .families import Family, build, family_of
from .group import Group
from .invariants import (
    count_involutions,
    fingerprint,
    has_cyclic_maximal,
    has_self_centralizing_v4,
    is_homocyclic,
    is_metacyclic,
    subgroup_involutions,
    subgroup_type,
)
from .perms import PermGroup
from .subgroups import Subgroup, center, centralizer, frattini_data, maximal_subgroups, omega


def _is_2_power(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def frattini_action(G: Group, phi: Automorphism | np.ndarray) -> np.ndarray:
    """The permutation induced by an automorphism on the cosets of Phi(G), by coset code."""
    perm = phi.perm if isinstance(phi, Automorphism) else np.asarray(phi)
    fd = frattini_data(G)
    reps = np.zeros(fd.p**fd.d, dtype=np.int64)
    reps[fd.coords[::-1]] = np.arange(G.order)[::-1]
    return fd.coords[perm[reps]]


def burnside_kernel_order(G: Group) -> int:
    """Order of the kernel of Aut(G) -> Aut(G/Phi(G))."""
    order, autos = automorphism_group(G)
    fd = frattini_data(G)
    image = PermGroup([frattini_action(G, a) for a in autos], fd.p**fd.d)
    return order // image.order


def burnside_violations(G: Group) -> list[str]:
    k = burnside_kernel_order(G)
    return [] if _is_2_power(k) else [f"kernel on G/Phi has order {k}"]


def maximal_transitivity_violations(G: Group, odd_orders=None) -> list[str]:
    """A 2-generator group with an odd-order automorphism permutes its three maximals transitively."""
    if fingerprint(G).generator_rank != 2:
        return []
    if odd_orders is None:
        odd_orders = find_odd_automorphism(G).odd_orders
    if odd_orders and not is_transitive_on_maximals(G):
        return ["odd automorphism but Aut(G) is not transitive on maximal subgroups"]
    return []


def _is_dihedral_or_semidihedral(G: Group) -> bool:
    s = family_of(G)
    if s is None:
        return False
    return s.family in (Family.Dihedral, Family.Semidihedral) or s.text() == "Cnm:1,1"


def self_centralizing_v4_violations(G: Group) -> list[str]:
    """A self-centralizing V4 forces G dihedral (V4 included) or semidihedral."""
    if has_self_centralizing_v4(G) and not _is_dihedral_or_semidihedral(G):
        return ["self-centralizing V4 in a group that is neither dihedral nor semidihedral"]
    return []


def _three_central_involutions(H: Group | Subgroup) -> bool:
    if isinstance(H, Group):
        H = Subgroup.whole(H)
    invs = subgroup_involutions(H)
    if len(invs) != 3:
        return False
    G = H.parent
    Z = center(G) if H.order == G.order else centralizer(G, H) & H
    return bool(Z.mask[invs].all())


def index_two_violations(G: Group) -> list[str]:
    """2-rank 2: some subgroup of index <= 2 has exactly three involutions, all central in it,
    or G is dihedral/semidihedral with a cyclic maximal subgroup."""
    if fingerprint(G).p_rank != 2:
        return []
    if _three_central_involutions(G):
        return []
    if any(_three_central_involutions(M) for M in maximal_subgroups(G)):
        return []
    if _is_dihedral_or_semidihedral(G) and has_cyclic_maximal(G):
        return []
    return ["no subgroup of index <= 2 with three central involutions, and not D/SD"]


def _parity(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    out = np.zeros_like(x)
    while x.any():
        out ^= x & 1
        x >>= 1
    return out


def v4_quotient_kernels(G: Group) -> list[tuple[Subgroup, list[Subgroup]]]:
    """Normal Q with G/Q = V4, each with the three maximal subgroups above it."""
    fd = frattini_data(G)
    if fd.p != 2 or fd.d < 2:
        return []
    d = fd.d
    kernels = {f: _parity(fd.coords & f) == 0 for f in range(1, 1 << d)}
    out = []
    seen = set()
    for f1 in range(1, 1 << d):
        for f2 in range(f1 + 1, 1 << d):
            plane = frozenset({f1, f2, f1 ^ f2})
            if plane in seen:
                continue
            seen.add(plane)
            Q = Subgroup(G, kernels[f1] & kernels[f2])
            out.append((Q, [Subgroup(G, kernels[f]) for f in sorted(plane)]))
    return out


def three_or_seven_violations(G: Group) -> list[str]:
    """If G/Q = V4 and all three maximals above Q have three involutions, then G has
    seven involutions when Q has one, and three when Q has three."""
    out = []
    total = count_involutions(G)
    for Q, maxs in v4_quotient_kernels(G):
        if any(len(subgroup_involutions(M)) != 3 for M in maxs):
            continue
        q = len(subgroup_involutions(Q))
        want = {1: 7, 3: 3}.get(q)
        if want != total:
            out.append(f"Q of order {Q.order} has {q} involutions but G has {total}")
    return out


def commutator_with(S: Subgroup, phi: Automorphism) -> Subgroup:
    """[S, phi] = < x^-1 phi(x) : x in S >."""
    G = S.parent
    x = S.elements
    return Subgroup.generated(G, np.unique(G.mul[G.inv[x], phi.perm[x]]))


def invariant_maximals(G: Group, phi: Automorphism) -> list[Subgroup]:
    return [M for M in maximal_subgroups(G) if M.image(phi.perm) == M]


def odd_commutator_violations(G: Group, phi: Automorphism) -> list[str]:
    """For each phi-invariant maximal Q: [G,phi] = [Q,phi] and G = [Q,phi] C_G([Q,phi]);
    moreover [G,phi] is Q8 once |G| >= 2^8."""
    out = []
    PG = commutator_with(Subgroup.whole(G), phi)
    for Q in invariant_maximals(G, phi):
        R = commutator_with(Q, phi)
        if R != PG:
            out.append(f"[G,phi] has order {PG.order} but [Q,phi] has order {R.order}")
            continue
        C = centralizer(G, R)
        prod = np.unique(G.mul[R.elements[:, None], C.elements[None, :]])
        if len(prod) != G.order:
            out.append("G is not [Q,phi] C_G([Q,phi])")
        if G.order >= 2**8 and subgroup_type(R) != "Q8":
            out.append(f"[G,phi] is {subgroup_type(R)}, not Q8")
    return out


def odd_automorphisms(G: Group) -> list[Automorphism]:
    """One automorphism per odd order found by the lift search."""
    report = find_odd_automorphism(G)
    out = []
    for q in sorted(report.witnesses):
        phi = automorphism_from_images(G, report.witnesses[q])
        if phi is None or phi.order != q:
            raise AssertionError(f"witness for order {q} does not verify")
        out.append(phi)
    return out


def normal_c4xc4_subgroups(G: Group) -> list[Subgroup]:
    o4 = np.flatnonzero(G.elt_order == 4)
    found: dict[bytes, Subgroup] = {}
    for i, x in enumerate(o4):
        for y in o4[i + 1:]:
            if G.mul[x, y] != G.mul[y, x]:
                continue
            W = Subgroup.generated(G, [int(x), int(y)])
            if W.order == 16 and W.key not in found and subgroup_type(W) == "C4xC4" and W.is_normal():
                found[W.key] = W
    return list(found.values())


def janko_violations(G: Group, W: Subgroup | None = None) -> list[str]:
    """Three involutions and a normal W = C4 x C4: C_G(W) is metacyclic with Omega_2 equal to W."""
    if count_involutions(G) != 3:
        return []
    out = []
    for W in ([W] if W is not None else normal_c4xc4_subgroups(G)):
        C = centralizer(G, W)
        H = C.as_group()
        if not is_metacyclic(H):
            out.append("C_G(W) is not metacyclic")
        emb = C.embedding
        if Subgroup(G, np.isin(np.arange(G.order), emb[omega(H, 2).elements])) != W:
            out.append("Omega_2(C_G(W)) differs from W")
    return out


def maximal_class_violations(G: Group, odd_orders) -> list[str]:
    """Among dihedral, semidihedral and quaternion groups only Q8 has an odd-order automorphism."""
    if odd_orders and not (G.order == 8 and is_isomorphic(G, build("Q:3"))):
        return ["maximal-class group other than Q8 with an odd automorphism"]
    return []


def metacyclic_odd_violations(G: Group, odd_orders) -> list[str]:
    """A metacyclic 2-group with an odd-order automorphism is homocyclic or Q8."""
    if not odd_orders or not is_metacyclic(G):
        return []
    if is_homocyclic(G) or (G.order == 8 and is_isomorphic(G, build("Q:3"))):
        return []
    return ["metacyclic group with an odd automorphism that is neither homocyclic nor Q8"]


__all__ = [
    "burnside_kernel_order",
    "burnside_violations",
    "commutator_with",
    "frattini_action",
    "index_two_violations",
    "invariant_maximals",
    "janko_violations",
    "maximal_class_violations",
    "maximal_transitivity_violations",
    "metacyclic_odd_violations",
    "normal_c4xc4_subgroups",
    "odd_automorphisms",
    "odd_commutator_violations",
    "self_centralizing_v4_violations",
    "three_or_seven_violations",
    "v4_quotient_kernels",
]
