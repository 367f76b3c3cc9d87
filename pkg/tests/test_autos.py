import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smallfusion.autos import (
    Automorphism,
    automorphism_from_images,
    automorphism_group,
    commutator_subgroup_with,
    find_isomorphism,
    find_odd_automorphism,
    gl4_fixed_point_scan,
    is_isomorphic,
    is_transitive_on_maximals,
    odd_order_subgroup_classes,
    verify_isomorphism,
)
from smallfusion.config import using_caps
from smallfusion.errors import CapExceeded
from smallfusion.families import build, catalogue
from smallfusion.field import F2Matrix, f2_matrix_order
from smallfusion.invariants import subgroup_type
from smallfusion.properties import maximal_class_violations, maximal_transitivity_violations

from oracles import brute_aut_order, closure


def odd_automorphism(spec, q):
    G = build(spec)
    report = find_odd_automorphism(G)
    return G, automorphism_from_images(G, report.witnesses[q])


# ------------------------------------------------------------ Aut(G) orders

@pytest.mark.parametrize("spec,want", [("Cnm:1,1", 6), ("Q:3", 24), ("D:3", 8), ("Cnm:2,2", 96),
                                       ("Cnm:1,2", 8), ("Mod:4", 16)])
def test_aut_order_against_brute_force(spec, want):
    G = build(spec)
    assert brute_aut_order(G) == want
    assert automorphism_group(G)[0] == want


@pytest.mark.parametrize("n", [4, 5, 6])
def test_modular_aut_is_a_2_group(n):
    order = automorphism_group(build(f"Mod:{n}"))[0]
    assert order & (order - 1) == 0


@pytest.mark.parametrize("spec", ["Q:3", "SD:4", "suz", "wr:2", "QDstar:3,3"])
def test_returned_automorphisms_are_multiplicative(spec):
    G = build(spec)
    for a in automorphism_group(G)[1]:
        p = a.perm
        assert np.array_equal(p[G.mul], G.mul[p[:, None], p[None, :]])
        assert p[0] == 0
        assert a.order >= 1


def test_automorphism_group_respects_cap():
    with using_caps(aut=64):
        with pytest.raises(CapExceeded):
            automorphism_group(build("QC:3,4"))


def test_automorphism_algebra():
    G = build("Q:3")
    a = Automorphism.inner(G, G.named["a"])
    assert a.then(a.inverse()).perm.tolist() == list(range(8))
    assert a.power(a.order).perm.tolist() == list(range(8))


# ------------------------------------------------------- odd automorphisms

def test_d16_has_no_odd_automorphism():
    assert find_odd_automorphism(build("D:4")).odd_orders == frozenset()


def test_suz_has_odd_orders_three_and_five():
    assert {3, 5} <= find_odd_automorphism(build("suz")).odd_orders


def test_q8_central_d8_has_order_five():
    assert 5 in find_odd_automorphism(build("QDstar:3,3")).odd_orders


@pytest.mark.parametrize("spec", ["suz", "QDstar:3,3", "Cnm:3,3", "Y:6", "QC:3,4"])
def test_witnesses_verify_with_stated_order(spec):
    G = build(spec)
    report = find_odd_automorphism(G)
    assert report.witnesses
    for q, images in report.witnesses.items():
        phi = automorphism_from_images(G, images)
        assert phi is not None and phi.is_valid()
        assert phi.order == q


def test_odd_orders_stay_inside_the_gl4_menu():
    for s in catalogue(2**7):
        report = find_odd_automorphism(build(s))
        if report.generator_rank <= 4:
            assert report.odd_orders <= {3, 5, 7}


def test_tiny_budget_is_reported_undecided_not_absent():
    report = find_odd_automorphism(build("suz"), budget=1)
    assert report.odd_orders == frozenset()
    assert report.undecided and not report.decided
    assert set(report.undecided.values()) == {1}


def test_report_serializes_to_json():
    d = find_odd_automorphism(build("Cnm:2,2")).as_dict()
    assert json.loads(json.dumps(d))["odd_orders"] == [3]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([s.text() for s in catalogue(64)]))
def test_odd_orders_agree_with_full_aut_order(spec):
    G = build(spec)
    order = automorphism_group(G)[0]
    found = find_odd_automorphism(G).odd_orders
    for q in (3, 5, 7):
        assert (q in found) == (order % q == 0)


def test_only_q8_has_odd_automorphism_in_maximal_class():
    for s in catalogue(2**7):
        if s.family.name in ("Dihedral", "Semidihedral", "Quaternion"):
            G = build(s)
            assert maximal_class_violations(G, find_odd_automorphism(G).odd_orders) == []
    assert find_odd_automorphism(build("Q:3")).odd_orders == {3}


def test_q33_has_two_classes_of_order_three_subgroups():
    # S4 x S4 extended by the swap: (c,1) ~ (1,c), and the diagonal (c,c') is a second class
    assert odd_order_subgroup_classes(build("Qnm:3,3"), 3) == 2
    assert odd_order_subgroup_classes(build("QC:3,3"), 3) == 1


# --------------------------------------------------- maximal transitivity

def test_c4xc4_is_transitive_on_maximals():
    assert is_transitive_on_maximals(build("Cnm:2,2"))


def test_mod4_is_not_transitive_on_maximals():
    assert not is_transitive_on_maximals(build("Mod:4"))


def test_c2_is_transitive_vacuously():
    assert is_transitive_on_maximals(build("C:1"))


@pytest.mark.parametrize("spec", [s.text() for s in catalogue(2**7)])
def test_two_generator_groups_with_odd_automorphism_are_transitive(spec):
    assert maximal_transitivity_violations(build(spec)) == []


# ----------------------------------------------------------- isomorphism

def test_x6_isomorphic_to_y6_with_verified_witness():
    X, Y = build("X:6"), build("Y:6")
    perm = find_isomorphism(X, Y)
    assert perm is not None and verify_isomorphism(X, Y, perm)


def test_x7_not_isomorphic_to_y7():
    assert not is_isomorphic(build("X:7"), build("Y:7"))


def test_self_isomorphism_is_identity():
    G = build("SD:5")
    assert np.array_equal(find_isomorphism(G, G), np.arange(G.order))


def test_isomorphism_rejects_different_fingerprints_quickly():
    assert find_isomorphism(build("D:3"), build("Q:3")) is None


def test_isomorphism_requires_equal_orders():
    assert not is_isomorphic(build("D:3"), build("D:4"))


# ---------------------------------------------------------------- GL_4(2)

def _fixed(m: F2Matrix):
    out = []
    for v in range(1, 16):
        img = 0
        for i in range(4):
            if v >> i & 1:
                img ^= m.rows[i]
        if img == v:
            out.append(v)
    return out


def test_companion_block_fixes_a_plane():
    m = F2Matrix(4, (0b0010, 0b0011, 0b0100, 0b1000))
    assert f2_matrix_order(m) == 3
    fixed = _fixed(m)
    assert len(fixed) == 3
    assert fixed[0] ^ fixed[1] == fixed[2]


def test_order_five_companion_is_fixed_point_free():
    m = F2Matrix(4, (0b0010, 0b0100, 0b1000, 0b1111))
    assert f2_matrix_order(m) == 5
    assert _fixed(m) == []


def test_identity_fixes_everything():
    assert len(_fixed(F2Matrix.identity(4))) == 15


def test_gl4_scan_passes():
    r = gl4_fixed_point_scan()
    assert r.passed
    assert r.total == 20160
    assert r.order3 == r.order3_fixed_free + r.order3_fixing_three
    assert r.order5 == r.order5_fixed_free
    # A8 has 112 + 1120 elements of order 3 and 1344 of order 5
    assert (r.order3, r.order5) == (1232, 1344)


# ------------------------------------------------------- [G, phi] subgroups

def test_commutator_with_identity_is_trivial():
    G = build("D:4")
    assert commutator_subgroup_with(G, Automorphism.identity(G)).order == 1


def test_commutator_with_order_three_on_qc35_is_q8():
    G, phi = odd_automorphism("QC:3,5", 3)
    R = commutator_subgroup_with(G, phi)
    assert subgroup_type(R) == "Q8"


def test_commutator_with_order_three_on_c4xc4_is_everything():
    G, phi = odd_automorphism("Cnm:2,2", 3)
    gens = {int(G.mul[G.inv[x], phi.perm[x]]) for x in range(16)}
    assert len(closure(G, gens)) == 16
    assert commutator_subgroup_with(G, phi).order == 16

