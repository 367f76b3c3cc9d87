"""Print the saturated fusion systems on the small 2-groups of 2-rank 2.

For each group: one row per system with its essential subgroups,
automizer orders, essential rank, center and a realizing-group label.

    python3 demos/fusion_tables.py D:4 SD:4 Q:4 wr:2
"""

import argparse

from smallfusion.families import build
from smallfusion.fusion import enumerate_saturated, fusion_record

DEFAULT = ["D:4", "SD:4", "Q:4", "Cnm:2,2", "wr:2", "Mod:4", "Mod:5"]


def show(spec: str) -> None:
    P = build(spec)
    systems = enumerate_saturated(P)
    print(f"{spec} (order {P.order}): {len(systems)} saturated systems")
    for F in systems:
        rec = fusion_record(F, base=spec).as_dict()
        ess = ", ".join(f"{e['type']}[{e['class_size']}] Aut={e['automizer_order']}"
                        for e in rec["essentials"]) or "none"
        print(f"  rk_e={rec['essential_rank']}  |Aut_F(P)|={rec['aut_P_order']:<4} "
              f"Z(F)={rec['center_order']:<3} involution classes={rec['involution_classes']}  "
              f"{rec['label']:<22} essentials: {ess}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("specs", nargs="*", default=DEFAULT)
    args = ap.parse_args()
    for spec in args.specs:
        show(spec)


if __name__ == "__main__":
    main()
