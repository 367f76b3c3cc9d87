import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smallfusion.config import using_caps
from smallfusion.errors import CapExceeded
from smallfusion.families import build, catalogue
from smallfusion.group import direct_product
from smallfusion.invariants import (
    FINGERPRINT_FIELDS,
    count_involutions,
    fingerprint,
    higman_check,
    is_characteristic,
    is_metacyclic,
    p_rank,
    special_check,
    subgroup_type,
)
from smallfusion.subgroups import (
    Subgroup,
    agemo,
    all_subgroups,
    center,
    centralizer,
    derived,
    frattini,
    generator_rank,
    maximal_subgroups,
    normalizer,
    omega,
)

from oracles import brute_p_rank, involutions


def test_frattini_of_elementary_abelian_is_trivial():
    E = direct_product(direct_product(build("C:1"), build("C:1")), build("C:1"))
    assert frattini(E).order == 1


def test_derived_subgroup_of_suz_is_its_center():
    P = build("suz")
    assert derived(P).order == 4
    assert derived(P) == center(P)


def test_omega_and_agemo_of_c8xc2():
    G = build("Cnm:1,3")
    assert omega(G, 1).order == 4
    assert omega(G, 2).order == 8
    assert agemo(G, 1).order == 4
    assert agemo(G, 2).order == 2


@pytest.mark.parametrize("spec,want", [("Q:3", 1), ("QC:3,3", 3), ("D:3", 5), ("suz", 3), ("QDstar:3,3", 11)])
def test_count_involutions_against_scan(spec, want):
    G = build(spec)
    assert count_involutions(G) == len(involutions(G)) == want


@pytest.mark.parametrize("spec,want", [("Cnm:2,2", 2), ("QDstar:3,3", 2), ("QD:3,3", 3), ("Q:3", 1),
                                       ("D:4", 2), ("Qnm:3,3", 2)])
def test_p_rank_against_exhaustive_search(spec, want):
    G = build(spec)
    assert p_rank(G) == want
    if G.order <= 32:
        assert brute_p_rank(G) == want


def test_mod4_maximal_subgroups():
    M = maximal_subgroups(build("Mod:4"))
    assert len(M) == 3
    types = sorted(subgroup_type(S) for S in M)
    assert types == ["C4xC2", "C8", "C8"]


def test_klein_four_maximal_subgroups():
    V = build("Cnm:1,1")
    M = maximal_subgroups(V)
    assert len(M) == 3 and all(S.order == 2 for S in M)


def test_q8xc2_has_seven_maximal_subgroups():
    assert len(maximal_subgroups(build("QC:3,1"))) == 7


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([s.text() for s in catalogue(2**7)]))
def test_maximal_count_is_two_to_d_minus_one(spec):
    G = build(spec)
    assert len(maximal_subgroups(G)) == 2 ** generator_rank(G) - 1


def test_all_subgroups_of_klein_four():
    classes = all_subgroups(build("Cnm:1,1"))
    assert sorted((c.order, c.size) for c in classes) == [(1, 1), (2, 1), (2, 1), (2, 1), (4, 1)]


def _classes_of_type(spec, type_name):
    return [c for c in all_subgroups(build(spec)) if subgroup_type(c.rep) == type_name]


def test_d16_has_two_classes_of_klein_fours():
    assert len(_classes_of_type("D:4", "V4")) == 2


def test_sd16_has_one_klein_four_class_and_one_q8_class():
    assert len(_classes_of_type("SD:4", "V4")) == 1
    assert len(_classes_of_type("SD:4", "Q8")) == 1


def test_subgroup_enumeration_is_capped():
    with using_caps(subgroups=32):
        with pytest.raises(CapExceeded):
            all_subgroups(build("suz"))


def test_subgroup_classes_partition_all_subgroups():
    G = build("D:4")
    total = sum(c.size for c in all_subgroups(G))
    # D16 has 19 subgroups: 1, nine of order 2, five of order 4 (one cyclic), three of order 8, 1
    assert total == 19


def test_centralizer_of_center_is_everything():
    G = build("SD:5")
    assert centralizer(G, center(G)).order == G.order


def test_janko_subgroup_in_q8xc8():
    G = build("QC:3,3")
    W = Subgroup.generated(G, [G.named["a"], G.power(G.named["c"], 2)])
    C = centralizer(G, W)
    H = C.as_group()
    assert subgroup_type(W) == "C4xC4"
    assert is_metacyclic(H)
    emb = C.embedding
    assert set(emb[omega(H, 2).elements].tolist()) == set(W.elements.tolist())


def test_wreathed_base_is_self_normalizing_characteristic():
    P = build("wr:2")
    Q = Subgroup.generated(P, [P.named["a"], P.named["b"]])
    assert Q.order == 16
    assert normalizer(P, Q).order == P.order
    assert is_characteristic(P, Q)


def test_fingerprint_x6_equals_y6():
    assert fingerprint(build("X:6")) == fingerprint(build("Y:6"))


def test_fingerprint_separates_d8_and_q8():
    a, b = fingerprint(build("D:3")), fingerprint(build("Q:3"))
    assert a != b
    assert (a.num_involutions, b.num_involutions) == (5, 1)


def test_fingerprint_of_c4xc4():
    fp = fingerprint(build("Cnm:2,2"))
    assert (fp.exponent, fp.nilpotency_class, fp.num_involutions, fp.p_rank) == (4, 1, 3, 2)
    assert fp.abelian_invariants == (4, 4)


def test_fingerprint_line_is_stable_and_ordered():
    line = fingerprint(build("Mod:4")).to_line()
    keys = [item.split("=")[0] for item in line.split(";")]
    assert tuple(keys) == FINGERPRINT_FIELDS
    assert line == fingerprint(build("Mod:4")).to_line()


def test_generator_rank_bounded_by_four_in_rank_two():
    for s in catalogue(2**7):
        fp = fingerprint(build(s))
        assert fp.p_rank <= np.log2(fp.order)
        if fp.p_rank <= 2:
            assert fp.generator_rank <= 4


@pytest.mark.parametrize("spec,want", [("suz", True), ("D:3", False), ("Cnm:2,2", False)])
def test_higman_check(spec, want):
    assert higman_check(build(spec)) is want


@pytest.mark.parametrize("spec,want", [("suz", True), ("C:2", False), ("Q:3", True)])
def test_special_check(spec, want):
    assert special_check(build(spec)) is want


def test_subgroup_type_names():
    assert subgroup_type(build("Q:3")) == "Q8"
    assert subgroup_type(build("D:4")) == "D16"
    assert subgroup_type(build("Cnm:1,1")) == "V4"
