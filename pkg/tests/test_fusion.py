from collections import Counter
from functools import lru_cache

import numpy as np
import pytest

from smallfusion.autos import automorphism_group, find_isomorphism
from smallfusion.config import using_caps
from smallfusion.errors import CapExceeded, NotCentralInF
from smallfusion.families import Family, build, catalogue, family_of, metacyclic_groups
from smallfusion.fusion import (
    FusionSystem,
    are_isomorphic,
    essential_candidates,
    essential_classes,
    essential_rank,
    fusion_center,
    fusion_record,
    generate,
    is_saturated,
    is_strongly_closed,
    quotient_fusion,
    realizing_label,
    resistance_check,
    trivial_system,
    validate,
)
from smallfusion.fusion.enumerate import conjugate_map
from smallfusion.fusion.report import element_class_sizes
from smallfusion.fusion.system import Essential
from smallfusion.group import direct_product, quotient
from smallfusion.invariants import count_involutions, is_homocyclic, subgroup_type
from smallfusion.subgroups import Subgroup, center, omega

from oracles import cycles_to_perm, element_orbits, fusion_class_sizes, perm_closure


@lru_cache(maxsize=None)
def systems(spec):
    from smallfusion.fusion import enumerate_saturated

    return tuple(enumerate_saturated(build(spec)))


def by_rank(spec, rank):
    return [F for F in systems(spec) if essential_rank(F) == rank]


def involution_classes(F):
    return sum(1 for c in F.element_classes if F.P.elt_order[c[0]] == 2)


def conjugacy_class_sizes(G):
    seen, sizes = set(), []
    for x in range(G.order):
        if x in seen:
            continue
        cls = {int(G.mul[G.mul[G.inv[g], x], g]) for g in range(G.order)}
        seen |= cls
        sizes.append(len(cls))
    return sorted(sizes)


# ----------------------------------------------------------- trivial systems

@pytest.mark.parametrize("spec,want", [("C:1", 1), ("D:4", 3), ("SD:4", 2)])
def test_trivial_system_involution_classes(spec, want):
    assert involution_classes(generate(trivial_system(build(spec)))) == want


@pytest.mark.parametrize("spec", ["D:4", "Q:4", "wr:2", "suz", "Mod:5"])
def test_trivial_system_is_conjugation(spec):
    P = build(spec)
    F = generate(trivial_system(P))
    assert element_class_sizes(F) == conjugacy_class_sizes(P)
    assert generate(F) is F
    assert bool(is_saturated(F))
    assert essential_rank(F) == 0
    assert fusion_center(F) == center(P)


# ------------------------------------------ comparison with ambient groups

def test_d8_systems_match_s4_and_a6():
    S4 = perm_closure([cycles_to_perm(4, (0, 1, 2, 3)), cycles_to_perm(4, (0, 1))])
    D8 = perm_closure([cycles_to_perm(4, (0, 1, 2, 3)), cycles_to_perm(4, (0, 2))])
    A6 = perm_closure([cycles_to_perm(6, (0, 1, 2)), cycles_to_perm(6, (1, 2, 3, 4, 5))])
    D8b = perm_closure([cycles_to_perm(6, (0, 1, 2, 3), (4, 5)), cycles_to_perm(6, (0, 2), (4, 5))])
    assert (len(S4), len(D8), len(A6), len(D8b)) == (24, 8, 360, 8)
    ambient = [sorted([1, 1, 2, 2, 2]), fusion_class_sizes(S4, D8), fusion_class_sizes(A6, D8b)]
    found = [element_class_sizes(F) for F in systems("D:3")]
    assert sorted(found) == sorted(ambient)


def _gl23():
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]

    def perm(m):
        return tuple(vecs.index(((m[0][0] * a + m[1][0] * b) % 3, (m[0][1] * a + m[1][1] * b) % 3))
                     for a, b in vecs)

    gens = [perm(((1, 1), (0, 1))), perm(((2, 0), (0, 1))), perm(((0, 1), (1, 0)))]
    return vecs, perm_closure(gens)


def _two_subgroup(G, order):
    elems = sorted(G)
    two = [g for g in elems if len(perm_closure([g])) in (1, 2, 4, 8, 16)]
    for x in two:
        for y in two:
            H = perm_closure([x, y])
            if len(H) == order:
                return H
    raise AssertionError("no subgroup found")


def test_sd16_gl2_3_system_is_enumerated():
    _, GL = _gl23()
    assert len(GL) == 48
    SD = _two_subgroup(GL, 16)
    want = fusion_class_sizes(GL, SD)
    assert want in [element_class_sizes(F) for F in systems("SD:4")]


def test_q8_systems_match_trivial_and_sl2_3():
    vecs, GL = _gl23()
    # determinant one: the permutation preserves the orientation of a fixed basis pair
    SL = {g for g in GL if _det_one(vecs, g)}
    assert len(SL) == 24
    Q8 = {g for g in SL if len(perm_closure([g])) in (1, 2, 4)}
    assert len(Q8) == 8
    found = sorted(element_class_sizes(F) for F in systems("Q:3"))
    assert found == sorted([[1, 1, 2, 2, 2], fusion_class_sizes(SL, Q8)])


def _det_one(vecs, g):
    (a, b), (c, d) = vecs[g[vecs.index((1, 0))]], vecs[g[vecs.index((0, 1))]]
    return (a * d - b * c) % 3 == 1


def test_c4xc4_systems_match_order_three_action():
    found = sorted(element_class_sizes(F) for F in systems("Cnm:2,2"))
    # the order-3 automorphism (x, y) -> (-y, x - y) of Z4^2 has five orbits of size 3
    orbits = element_orbits(16, [np.array([((-y) % 4) * 4 + (x - y) % 4 for x in range(4) for y in range(4)])])
    assert sorted(len(o) for o in orbits) == [1, 3, 3, 3, 3, 3]
    assert found == sorted([[1] * 16, sorted(len(o) for o in orbits)])


@pytest.mark.parametrize("spec", ["D:3", "Q:3", "D:4", "SD:4", "Q:4", "Cnm:2,2", "wr:2", "Mod:5"])
def test_element_classes_equal_orbit_closure(spec):
    for F in systems(spec):
        want = element_orbits(F.P.order, F.generating_maps)
        assert sorted(sorted(c.tolist()) for c in F.element_classes) == want


# ------------------------------------------------------------- generation

def test_d16_with_both_klein_classes_has_one_involution_class():
    (F,) = by_rank("D:4", 2)
    assert involution_classes(F) == 1
    assert all(subgroup_type(U) == "V4" and F.automizer_order(U) == 6 for U in essential_classes(F))


def test_wreathed_system_with_r_essential_matches_orbit_oracle():
    F = next(F for F in by_rank("wr:2", 1) if subgroup_type(essential_classes(F)[0]) != "C4xC4")
    orbits = element_orbits(F.P.order, F.generating_maps)
    invs = [o for o in orbits if F.P.elt_order[o[0]] == 2]
    assert involution_classes(F) == len(invs) == 2


# ------------------------------------------------------------- saturation

@pytest.mark.parametrize("spec", ["C:3", "D:4", "Q:3", "Cnm:2,2", "wr:2", "Mod:4", "QCstar:3,3"])
def test_trivial_system_is_saturated(spec):
    assert bool(is_saturated(trivial_system(build(spec))))


def test_d16_with_one_klein_class_essential_is_saturated():
    P = build("D:4")
    cand = next(c for c in essential_candidates(P))
    F = FusionSystem(P, (), [Essential(cand.U, cand.automizers[0])])
    assert validate(F).ok
    verdict = is_saturated(F)
    assert verdict.saturated and verdict.first_failure is None
    assert realizing_label(F) == "PGL2-type"


def test_extra_two_automorphism_of_p_fails_full_automization():
    G = build("C:3")
    cube = np.array([G.power(e, 3) for e in range(8)])
    F = FusionSystem(G, [cube])
    assert not validate(F).ok
    verdict = is_saturated(F)
    assert not verdict.saturated
    assert verdict.first_failure.axiom == "fully automized"


def test_odd_automizer_of_non_centric_subgroup_fails_receptivity():
    # P = C4 x C2, U = Omega_1(P); an order-3 map on U fuses a square with a non-square
    P = direct_product(build("C:2"), build("C:1"))
    U = omega(P, 1)
    z, b, zb = [int(x) for x in U.elements[1:]]
    if P.elt_order[z] != 2 or z not in {int(P.power(x, 2)) for x in range(P.order)}:
        z, b, zb = [x for x in (z, b, zb) if x in {int(P.power(y, 2)) for y in range(P.order)}] + \
                   [x for x in (z, b, zb) if x not in {int(P.power(y, 2)) for y in range(P.order)}]
    m = np.full(P.order, -1)
    m[0], m[z], m[b], m[zb] = 0, b, zb, z
    F = FusionSystem(P, (), [Essential(U, (m,))])
    assert validate(F).ok
    verdict = is_saturated(F)
    assert not verdict.saturated
    assert verdict.first_failure.axiom == "receptive"


def test_odd_automorphism_choice_on_c4xc4_needs_sylow_inner_part():
    P = build("Cnm:2,2")
    F = FusionSystem(P, [P.inv.copy()])  # inversion: Aut_P(P) = 1 is not Sylow
    assert not validate(F).ok
    assert not is_saturated(F)


# ------------------------------------------------------------- candidates

def test_sd16_candidates_are_klein_and_quaternion():
    types = sorted(subgroup_type(c.U) for c in essential_candidates(build("SD:4")))
    assert types == ["Q8", "V4"]


def test_wreathed_candidates_are_base_and_central_product():
    P = build("wr:2")
    cands = essential_candidates(P)
    assert len(cands) == 2
    base = Subgroup.generated(P, [P.named["a"], P.named["b"]])
    kinds = {}
    for c in cands:
        U = c.U
        if U == base:
            kinds["Q"] = U
        else:
            kinds["R"] = U
    assert set(kinds) == {"Q", "R"}
    R = kinds["R"]
    ab = P.mul[P.named["a"], P.named["b"]]
    assert R.order == 16 and ab in R.elements and P.named["t"] in R.elements
    # R = Z(P) * Q8: center of R is Z(P), cyclic of order 4, and R' has order 2
    assert center(R.as_group()).order == 4
    assert {P.named["a"], P.named["b"]}.isdisjoint(R.elements.tolist())


def test_mod5_has_no_essential_candidates():
    assert essential_candidates(build("Mod:5")) == []


# ------------------------------------------------------------ enumeration

@pytest.mark.parametrize("spec,want", [("D:4", 3), ("SD:4", 4), ("Q:4", 3), ("Cnm:2,2", 2),
                                       ("wr:2", 4), ("Mod:4", 1), ("Mod:5", 1)])
def test_enumeration_counts(spec, want):
    assert len(systems(spec)) == want


def test_q8_count_is_two():
    # Aut_F(Q8) is V4 or A4 (V4 must be Sylow) and Q8 has no essential candidates
    assert len(systems("Q:3")) == 2
    assert essential_candidates(build("Q:3")) == []


def test_enumeration_respects_fusion_cap():
    with using_caps(fusion=32):
        with pytest.raises(CapExceeded):
            FusionSystem(build("suz"))


def test_enumerated_systems_are_pairwise_non_isomorphic():
    for spec in ("D:4", "SD:4", "wr:2"):
        S = systems(spec)
        for i in range(len(S)):
            for j in range(i + 1, len(S)):
                assert not are_isomorphic(S[i], S[j])


@pytest.mark.parametrize("spec", ["D:4", "SD:4", "Q:4", "wr:2"])
def test_saturation_invariant_under_automorphisms(spec):
    P = build(spec)
    _, autos = automorphism_group(P)
    for F in systems(spec):
        for beta in autos[:3]:
            b = beta.perm
            moved = FusionSystem(
                P,
                [conjugate_map(a, b) for a in F.extra_aut_P],
                [Essential(E.U.image(b), tuple(conjugate_map(g, b) for g in E.gens)) for E in F.essentials],
            )
            assert bool(is_saturated(moved))
            assert are_isomorphic(F, moved)


@pytest.mark.parametrize("spec", ["D:4", "SD:4", "Q:4", "wr:2", "D:5", "SD:5", "Q:5"])
def test_essential_rank_at_most_two(spec):
    assert all(essential_rank(F) <= 2 for F in systems(spec))


def test_sd16_rank_two_is_psl3_type():
    (F,) = by_rank("SD:4", 2)
    assert realizing_label(F) == "PSL3-type"


def test_q16_one_quaternion_class_is_sl2_2_type():
    (F,) = by_rank("Q:4", 1)
    assert [subgroup_type(U) for U in essential_classes(F)] == ["Q8"]
    assert realizing_label(F) == "SL2.2-type"


# ---------------------------------------------------- center and closure

def test_q16_systems_have_central_involution_in_center():
    P = build("Q:4")
    for F in systems("Q:4"):
        Z = fusion_center(F)
        assert Z.order == 2 and Z == omega(P, 1)


def test_d16_rank_two_system_has_trivial_center():
    (F,) = by_rank("D:4", 2)
    assert fusion_center(F).order == 1


@pytest.mark.parametrize("spec", ["D:4", "SD:4", "Q:4", "wr:2", "Cnm:2,2", "suz"])
def test_fusion_center_is_strongly_closed(spec):
    for F in systems(spec):
        assert is_strongly_closed(F, fusion_center(F))


def test_suz_omega1_is_strongly_closed_and_resistant():
    P = build("suz")
    for F in systems("suz"):
        assert is_strongly_closed(F, omega(P, 1))
        assert resistance_check(F)


def test_non_central_involution_is_not_strongly_closed_in_psl2_type():
    (F,) = by_rank("D:4", 2)
    P = F.P
    t = P.named["t"]
    assert not is_strongly_closed(F, Subgroup.generated(P, [t]))


def test_resistance_of_trivial_system():
    assert resistance_check(trivial_system(build("SD:5")))


def test_psl2_type_system_is_not_resistant():
    (F,) = by_rank("D:4", 2)
    assert not resistance_check(F)


def test_resistance_requires_strong_closure():
    (F,) = by_rank("D:4", 2)
    with pytest.raises(ValueError):
        resistance_check(F, Subgroup.generated(F.P, [F.P.named["t"]]))


# -------------------------------------------------------------- quotients

def test_quotient_by_trivial_subgroup_is_same_system():
    F = systems("SD:4")[2]
    assert quotient_fusion(F, Subgroup.trivial(F.P)) is F


def test_q16_rank_two_quotient_is_d8_system_with_klein_essentials():
    (F,) = by_rank("Q:4", 2)
    Fq = quotient_fusion(F, fusion_center(F))
    assert find_isomorphism(Fq.P, build("D:3")) is not None
    assert bool(is_saturated(Fq))
    assert essential_rank(Fq) == 2
    assert all(subgroup_type(U) == "V4" for U in essential_classes(Fq))


def test_quotient_of_trivial_system_by_center():
    P = build("wr:2")
    F = trivial_system(P)
    Fq = quotient_fusion(F, center(P))
    H, _ = quotient(P, center(P).mask)
    assert element_class_sizes(Fq) == conjugacy_class_sizes(H)


def test_quotient_requires_subgroup_of_center_of_f():
    (F,) = by_rank("D:4", 2)
    with pytest.raises(NotCentralInF):
        quotient_fusion(F, center(F.P))


# ------------------------------------------------------------- properties

def test_centre_free_systems_live_on_the_listed_families():
    allowed = {Family.Dihedral, Family.Semidihedral, Family.Wreathed, Family.C_nm, Family.Suz}
    specs = ["D:4", "SD:4", "Q:4", "Cnm:2,2", "wr:2", "Mod:4", "Mod:5", "suz"]
    specs += [s.text() for s in catalogue(32) if s.order >= 4]
    for spec in dict.fromkeys(specs):
        for F in systems(spec):
            if fusion_center(F).order == 1:
                s = family_of(F.P)
                homocyclic = s.family is Family.C_nm and is_homocyclic(F.P)
                assert s.family in allowed and (s.family is not Family.C_nm or homocyclic), spec


@pytest.mark.parametrize("p,max_order", [(3, 81), (5, 125)])
def test_odd_metacyclic_systems_are_resistant(p, max_order):
    from smallfusion.fusion import enumerate_saturated

    with using_caps(fusion=max_order, subgroups=max_order, aut=max_order):
        groups = [G for G in metacyclic_groups(max_order, p=p) if not G.is_abelian]
        assert groups
        for G in groups:
            for F in enumerate_saturated(G):
                assert resistance_check(F)


def test_fusion_record_fields():
    (F,) = by_rank("D:4", 2)
    rec = fusion_record(F).as_dict()
    assert rec["base"] == "D:4"
    assert rec["essential_rank"] == 2
    assert rec["center_order"] == 1
    assert rec["involution_classes"] == 1
    assert rec["label"] == "PSL2-type"
    assert Counter(e["type"] for e in rec["essentials"]) == {"V4": 2}


def test_suz_system_labels():
    labels = sorted(realizing_label(F) for F in systems("suz"))
    assert labels == ["F_P(P)", "P:C15", "P:C3", "P:C5"]
    assert all(count_involutions(F.P) == 3 for F in systems("suz"))
