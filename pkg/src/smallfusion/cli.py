"""Command-line interface: ``smallfusion <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import get_caps, set_caps
from .errors import ParseError, SmallFusionError


def _load(source: str):
    """A family spec (``QC:3,3``), a corpus entry, or a path to a one-entry file."""
    from pathlib import Path

    from .corpus.grammar import CorpusEntry, parse
    from .families import parse_spec

    try:
        return CorpusEntry(parse_spec(source))
    except (ParseError, ValueError):
        pass
    path = Path(source)
    if path.is_file():
        source = path.read_text()
    return parse(source)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_build(args) -> int:
    entry = _load(args.source)
    G = entry.to_group()
    _emit({"entry": entry.text(), "order": G.order, "generators": {k: int(v) for k, v in sorted(G.named.items())}})
    return 0


def cmd_invariants(args) -> int:
    from .invariants import fingerprint

    G = _load(args.source).to_group()
    fp = fingerprint(G)
    _emit({"line": fp.to_line(), **fp.as_dict()})
    return 0


def cmd_aut(args) -> int:
    from .autos import automorphism_group, find_odd_automorphism
    from .errors import CapExceeded

    G = _load(args.source).to_group()
    report = find_odd_automorphism(G, budget=args.budget)
    try:
        report.aut_order = automorphism_group(G)[0]
    except CapExceeded:
        pass
    _emit(report.as_dict())
    return 0


def cmd_classify(args) -> int:
    from .corpus.records import classify_entry

    record = classify_entry(_load(args.source), budget=args.budget, fusion=args.fusion)
    print(record.to_json())
    return 0


def cmd_fusion_enumerate(args) -> int:
    from .fusion import enumerate_saturated, fusion_record

    entry = _load(args.source)
    for F in enumerate_saturated(entry.to_group()):
        _emit(fusion_record(F, base=entry.name).as_dict())
    return 0


def cmd_fusion_check(args) -> int:
    from .fusion import (
        enumerate_saturated,
        fusion_center,
        is_controlled_by_aut_p,
        is_saturated,
        realizing_label,
        resistance_check,
        validate,
    )

    entry = _load(args.source)
    ok = True
    for i, F in enumerate(enumerate_saturated(entry.to_group())):
        rep = validate(F)
        sat = is_saturated(F)
        row = {
            "system": i,
            "label": realizing_label(F),
            "valid": rep.ok,
            "saturated": bool(sat),
            "resistant": resistance_check(F),
            "controlled_by_aut_P": is_controlled_by_aut_p(F),
            "center_order": fusion_center(F).order,
        }
        if sat.first_failure is not None:
            row["failure"] = sat.first_failure.detail
        ok &= rep.ok and bool(sat)
        _emit(row)
    return 0 if ok else 1


def cmd_gl4scan(args) -> int:
    from .autos import gl4_fixed_point_scan

    report = gl4_fixed_point_scan()
    _emit(report.as_dict())
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    from .corpus.harness import verify_paper

    status, _ = verify_paper(only=args.only, report=args.report, export=args.export)
    return status


def cmd_corpus_run(args) -> int:
    from .corpus.runner import run_corpus, write_report

    records = run_corpus(args.path, jobs=args.jobs, budget=args.budget, fusion=args.fusion)
    if args.report:
        records = write_report(records, args.report)
        print(f"{len(records)} records written to {args.report}")
    else:
        for r in records:
            print(r.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smallfusion", description=__doc__.splitlines()[0])
    p.add_argument("--caps", help="comma-separated cap overrides, e.g. order=512,fusion=128")
    sub = p.add_subparsers(dest="command", required=True)

    def source_cmd(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("source", help="family spec (e.g. QC:3,3), corpus entry text, or file")
        sp.set_defaults(func=fn)
        return sp

    source_cmd("build", cmd_build, "build a group and print its generators")
    source_cmd("invariants", cmd_invariants, "print the invariant fingerprint")
    sp = source_cmd("aut", cmd_aut, "search for odd-order automorphisms")
    sp.add_argument("--budget", type=int, help="node budget per prime")
    sp = source_cmd("classify", cmd_classify, "classify against the 2-rank-2 lists")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--fusion", action="store_true", help="also enumerate saturated fusion systems")

    fp = sub.add_parser("fusion", help="saturated fusion systems")
    fsub = fp.add_subparsers(dest="fusion_command", required=True)
    sp = fsub.add_parser("enumerate", help="list saturated fusion systems up to isomorphism")
    sp.add_argument("source")
    sp.set_defaults(func=cmd_fusion_enumerate)
    sp = fsub.add_parser("check", help="re-validate each enumerated system")
    sp.add_argument("source")
    sp.set_defaults(func=cmd_fusion_check)

    sp = sub.add_parser("gl4scan", help="fixed vectors of order-3 and order-5 elements of GL4(2)")
    sp.set_defaults(func=cmd_gl4scan)

    sp = sub.add_parser("verify-paper", help="run every reproduction check")
    sp.add_argument("--only", nargs="+", metavar="TAG", help="check ids or tags to run")
    sp.add_argument("--report", help="write JSON-lines results here")
    sp.add_argument("--export", help="corpus file exported from a group database, for completeness")
    sp.set_defaults(func=cmd_verify)

    cp = sub.add_parser("corpus", help="corpus files")
    csub = cp.add_subparsers(dest="corpus_command", required=True)
    sp = csub.add_parser("run", help="classify every entry of a corpus file")
    sp.add_argument("path")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--fusion", action="store_true")
    sp.add_argument("--report", help="write records here (timing goes to <report>.timing.jsonl)")
    sp.set_defaults(func=cmd_corpus_run)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.caps:
        try:
            set_caps(get_caps().with_overrides(args.caps))
        except ValueError as exc:
            parser.error(str(exc))
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SmallFusionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
