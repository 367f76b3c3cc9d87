"""A tour of Suz, the Sylow 2-subgroup of PSU3(4), built over F16.

Shows the Higman coincidence Omega1 = Z = Phi = P', the odd-order
automorphisms, and the four saturated fusion systems, each of which
is controlled by Aut_F(P) through the central series 1 <= Omega1 <= P.
"""

from smallfusion.autos import find_odd_automorphism
from smallfusion.families import build, suz_carrier
from smallfusion.fusion import enumerate_saturated, is_strongly_closed, realizing_label, resistance_check
from smallfusion.invariants import count_involutions, higman_check
from smallfusion.subgroups import center, derived, frattini, omega


def main():
    P = build("suz")
    print(f"Suz: order {P.order}, carrier pairs (a, b) with b + b^4 = a^5: {len(suz_carrier())}")
    print(f"involutions: {count_involutions(P)}")
    sizes = [S.order for S in (omega(P, 1), center(P), frattini(P), derived(P))]
    print(f"|Omega1|, |Z|, |Phi|, |P'| = {sizes}; all equal: {higman_check(P)}")

    report = find_odd_automorphism(P)
    print(f"odd automorphism orders: {sorted(report.odd_orders)}")

    O = omega(P, 1)
    for F in enumerate_saturated(P):
        print(f"  {realizing_label(F):<8} |Aut_F(P)| = {F.aut_P_order:<4} "
              f"Omega1 strongly closed: {is_strongly_closed(F, O)}  resistant: {resistance_check(F)}")


if __name__ == "__main__":
    main()
