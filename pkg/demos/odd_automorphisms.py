"""Which 2-groups of 2-rank 2 admit an automorphism of odd order?

Runs the lift search over the bundled family catalogue and prints, per
order, the groups with an odd-order automorphism and the orders found.
Then lists the order-64 groups with exactly three involutions.

    python3 demos/odd_automorphisms.py --max-order 128
"""

import argparse
from collections import defaultdict

from smallfusion.autos import find_odd_automorphism
from smallfusion.families import build, rank2_catalogue
from smallfusion.invariants import count_involutions


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=128)
    args = ap.parse_args()

    by_order = defaultdict(list)
    for s in rank2_catalogue(args.max_order):
        G = build(s)
        orders = find_odd_automorphism(G).odd_orders
        by_order[G.order].append((s.text(), sorted(orders), count_involutions(G)))

    for order in sorted(by_order):
        rows = by_order[order]
        hits = [f"{t} {o}" for t, o, _ in rows if o]
        misses = [t for t, o, _ in rows if not o]
        print(f"order {order}: odd automorphisms on {', '.join(hits) or 'none'}")
        if misses:
            print(f"           none on {', '.join(misses)}")

    row = [t for t, o, inv in by_order.get(64, []) if o and inv == 3]
    print(f"order 64, three involutions, odd automorphism: {', '.join(row)}")


if __name__ == "__main__":
    main()
