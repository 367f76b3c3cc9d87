"""End-to-end verification harness: every published claim the package reproduces, as tagged checks."""

from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable

from ..autos import find_isomorphism, find_odd_automorphism, gl4_fixed_point_scan, verify_isomorphism
from ..config import get_caps
from ..errors import CapExceeded, UnsupportedOrder
from ..families import Family, build, catalogue, expected_fingerprint, metacyclic_groups
from ..invariants import count_involutions, higman_check, is_homocyclic
from ..subgroups import Subgroup, commutator_subgroup, omega

PASS, FAIL, SKIPPED, ERROR = "PASS", "FAIL", "SKIPPED", "ERROR"


@dataclass(frozen=True)
class Check:
    id: str
    tags: tuple[str, ...]
    claim: str
    run: Callable[[], tuple[bool, str]]
    max_order: int = 0     # largest group the check builds
    fusion_order: int = 0  # largest group it enumerates fusion systems on
    aut_order: int = 0     # largest group whose full Aut(G) it computes


@dataclass
class CheckResult:
    id: str
    tags: tuple[str, ...]
    claim: str
    status: str
    detail: str
    seconds: float = field(default=0.0, compare=False)

    def as_dict(self) -> dict:
        return {"id": self.id, "tags": list(self.tags), "claim": self.claim,
                "status": self.status, "detail": self.detail}


# ------------------------------------------------------------ shared results

@lru_cache(maxsize=None)
def saturated_systems(text: str):
    from ..fusion import enumerate_saturated

    return tuple(enumerate_saturated(build(text)))


@lru_cache(maxsize=None)
def odd_orders(text: str) -> frozenset[int]:
    return find_odd_automorphism(build(text)).odd_orders


def _essential_ranks(text: str) -> list[int]:
    from ..fusion import essential_rank

    return sorted(essential_rank(F) for F in saturated_systems(text))


# ------------------------------------------------------------------- checks

FUSION_COUNTS = [
    ("D:4", 3, "dihedral D16"),
    ("SD:4", 4, "semidihedral SD16"),
    ("Q:4", 3, "generalized quaternion Q16"),
    ("Cnm:2,2", 2, "homocyclic C4 x C4"),
    ("wr:2", 4, "wreathed C4 wr C2"),
    ("suz", 4, "Sylow 2-subgroup of PSU3(4)"),
    ("Mod:4", 1, "modular Mod4 of order 16"),
    ("Mod:5", 1, "modular Mod5 of order 32"),
]


def _fusion_count(text: str, want: int) -> Callable[[], tuple[bool, str]]:
    def run():
        n = len(saturated_systems(text))
        return n == want, f"{n} saturated systems (expected {want})"
    return run


def _rank_bound():
    ranks = {t: _essential_ranks(t) for t, _, _ in FUSION_COUNTS}
    bad = {t: r for t, r in ranks.items() if max(r) > 2}
    return not bad, "all essential ranks in {0,1,2}" if not bad else f"ranks above 2: {bad}"


def _sd16_ranks():
    r = _essential_ranks("SD:4")
    return r == [0, 1, 1, 2], f"essential ranks {r}"


def _d16_ranks():
    from ..fusion import essential_rank

    rows = sorted((essential_rank(F), sum(1 for c in F.element_classes if F.P.elt_order[c[0]] == 2))
                  for F in saturated_systems("D:4"))
    return rows == [(0, 3), (1, 2), (2, 1)], f"(rank, involution classes) {rows}"


def _catalogue_odd_orders():
    bad = []
    for s in catalogue(2**7):
        exp = expected_fingerprint(s).odd_orders
        got = odd_orders(s.text())
        if exp is not None and got != exp:
            bad.append(f"{s.text()}: {sorted(got)} != {sorted(exp)}")
    return not bad, "; ".join(bad) or "every family instance of order <= 128 matches its listed orders"


def negative_control_specs() -> list[str]:
    out = []
    for s in catalogue(2**7):
        f, p = s.family, s.params
        if f in (Family.Dihedral, Family.Semidihedral, Family.Quaternion) and p[0] >= 4:
            out.append(s.text())
        elif f is Family.Modular:
            out.append(s.text())
    return out


def _negative_controls():
    hits = {t: sorted(odd_orders(t)) for t in negative_control_specs() if odd_orders(t)}
    return not hits, f"odd orders found: {hits}" if hits else "no odd automorphism on D, SD, Q (n >= 4) or Mod"


def _q8xd8_control():
    got = sorted(odd_orders("QD:3,3"))
    return not got, f"Q8 x D8 odd automorphism orders {got} (control expects none)"


def _q8dstar_five():
    got = odd_orders("QDstar:3,3")
    return 5 in got, f"Q8 * D8 odd automorphism orders {sorted(got)}"


def _three_involution_row():
    want = {"Cnm:3,3", "QC:3,3", "Y:6", "Qnm:3,3", "suz"}
    got = {s.text() for s in catalogue(64)
           if s.order == 64 and count_involutions(build(s)) == 3 and odd_orders(s.text())}
    pairs_ok = all(find_isomorphism(build(a), build(b)) is None
                   for a in sorted(got) for b in sorted(got) if a < b)
    x6 = find_isomorphism(build("X:6"), build("Y:6")) is not None
    ok = got == want and pairs_ok and x6
    return ok, f"{sorted(got)}; pairwise non-isomorphic: {pairs_ok}; X6 = Y6: {x6}"


def _higman():
    return higman_check(build("suz")), "Omega1 = Z = Phi = P' on Suz"


def _suz_resistance():
    from ..fusion import central_series_of_closed, is_strongly_closed, resistance_check

    P = build("suz")
    O = omega(P, 1)
    whole = Subgroup.whole(P)
    trivial = Subgroup.trivial(P)
    details = []
    ok = True
    for F in saturated_systems("suz"):
        series_ok = (is_strongly_closed(F, O) and commutator_subgroup(P, whole, O) <= trivial
                     and commutator_subgroup(P, whole, whole) <= O)
        chain = central_series_of_closed(F, whole)
        ok &= series_ok and resistance_check(F) and chain is not None
        details.append(f"|Aut_F(P)|={F.aut_P_order}: series {'ok' if series_ok else 'broken'}")
    return ok, "; ".join(details)


def _gl4():
    r = gl4_fixed_point_scan()
    return r.passed, (f"{r.total} matrices; order 3: {r.order3} ({r.order3_fixed_free} fixed-point free, "
                      f"{r.order3_fixing_three} fixing a plane's three vectors); order 5: {r.order5} "
                      f"({r.order5_fixed_free} fixed-point free); exceptions {len(r.exceptions)}")


def _x_y(n: int, iso: bool):
    def run():
        X, Y = build(f"X:{n}"), build(f"Y:{n}")
        perm = find_isomorphism(X, Y)
        if iso:
            ok = perm is not None and verify_isomorphism(X, Y, perm)
            witness = [[int(g), int(perm[g])] for g in X.generators()] if perm is not None else None
            return ok, f"witness {json.dumps(witness)}"
        return perm is None, "no isomorphism" if perm is None else "unexpected isomorphism"
    return run


def _metacyclic():
    bad, count = [], 0
    for G in metacyclic_groups(2**6):
        if is_homocyclic(G) or _maximal_class(G):
            continue
        count += 1
        systems = enumerate_or_none(G)
        if systems is None or len(systems) != 1 or systems[0].aut_P_order != _inner_order(G):
            bad.append(G.name)
    return not bad, f"{count} groups, exceptions {bad}" if bad else f"{count} groups, each with only F_P(P)"


def _maximal_class(G) -> bool:
    from ..invariants import group_type

    return group_type(G).startswith(("D", "SD", "Q"))


def _inner_order(G) -> int:
    from ..subgroups import center

    return G.order // center(G).order


def enumerate_or_none(G):
    from ..fusion import enumerate_saturated

    try:
        return enumerate_saturated(G)
    except CapExceeded:
        return None


def _sweep(fn, specs: Iterable[str], with_odd=False):
    bad = []
    for t in specs:
        G = build(t)
        v = fn(G, odd_orders(t)) if with_odd else fn(G)
        bad.extend(f"{t}: {x}" for x in v)
    return bad


def _property(fn, specs_fn, with_odd=False, what=""):
    def run():
        specs = list(specs_fn())
        bad = _sweep(fn, specs, with_odd)
        return not bad, "; ".join(bad) if bad else f"{len(specs)} groups, {what}no violations"
    return run


def _cat(max_order=2**7, aut=False):
    def specs():
        cap = get_caps().aut
        return [s.text() for s in catalogue(max_order) if not aut or s.order <= cap]
    return specs


def _lemma_qc35():
    from ..properties import invariant_maximals, odd_automorphisms, odd_commutator_violations

    G = build("QC:3,5")
    bad, n = [], 0
    for phi in odd_automorphisms(G):
        n += len(invariant_maximals(G, phi))
        bad += odd_commutator_violations(G, phi)
    return not bad and n > 0, "; ".join(bad) or f"{n} invariant maximal subgroups, [P,phi] = Q8"


def _janko_qc33():
    from ..properties import janko_violations

    G = build("QC:3,3")
    a, c = G.named["a"], G.named["c"]
    W = Subgroup.generated(G, [a, G.power(c, 2)])
    bad = janko_violations(G, W) + janko_violations(G)
    return bad == [] and W.is_normal(), "; ".join(bad) or "C_P(W) metacyclic with Omega_2 = W"


def _q16_quotient():
    from ..fusion import essential_rank, fusion_center, is_saturated, quotient_fusion

    F = next(F for F in saturated_systems("Q:4") if essential_rank(F) == 2)
    Fq = quotient_fusion(F, fusion_center(F))
    iso = find_isomorphism(Fq.P, build("D:3")) is not None
    sat = bool(is_saturated(Fq))
    rk = essential_rank(Fq)
    return iso and sat and rk == 2, f"quotient on D8: {iso}; saturated: {sat}; essential rank {rk}"


def _bundled_corpus():
    from .records import CONTRADICTION, ERROR, MATCHED
    from .runner import bundled_corpus_path, run_corpus

    records = list(run_corpus(bundled_corpus_path()))
    counts = Counter(r.status for r in records)
    bad = [r.entry for r in records if r.status in (CONTRADICTION, ERROR)
           or (r.expected is not None and not r.expected["ok"])]
    return not bad and counts[MATCHED] > 0, f"{dict(sorted(counts.items()))}; problems {bad}"


def _export_completeness(path: str):
    from .records import CONTRADICTION, ERROR, UNDECIDED
    from .runner import run_corpus

    def run():
        records = list(run_corpus(path))
        bad = [r.entry for r in records if r.status in (CONTRADICTION, ERROR, UNDECIDED)]
        return not bad, f"{len(records)} exported groups; unresolved {bad}"
    return run


def all_checks(export: str | None = None) -> list[Check]:
    from .. import properties as pr

    checks = []
    for text, want, what in FUSION_COUNTS:
        tags = ("fusion-counts",) + (("suz",) if text == "suz" else ())
        order = build_order(text)
        checks.append(Check(f"fusion-count-{text}", tags,
                            f"{what} carries exactly {want} saturated fusion systems",
                            _fusion_count(text, want), order, order))
    checks += [
        Check("essential-rank-at-most-two", ("essential-rank", "suz"),
              "every enumerated system has essential rank 0, 1 or 2", _rank_bound, 64, 64),
        Check("essential-ranks-sd16", ("essential-rank",),
              "the four systems on SD16 have essential ranks 0, 1, 1, 2", _sd16_ranks, 16, 16),
        Check("essential-ranks-d16", ("essential-rank",),
              "D16: rank 1 fuses two involution classes, rank 2 fuses all three", _d16_ranks, 16, 16),
        Check("odd-orders-catalogue", ("odd-automorphisms", "suz"),
              "odd automorphism orders match the classification lists on every family instance of order <= 128",
              _catalogue_odd_orders, 128),
        Check("odd-orders-negative-controls", ("odd-automorphisms",),
              "D, SD, Q (n >= 4) and Mod have no odd-order automorphism", _negative_controls, 128),
        Check("odd-orders-negative-control-q8xd8", ("odd-automorphisms",),
              "the direct product Q8 x D8 has no odd-order automorphism", _q8xd8_control, 32),
        Check("odd-orders-q8-central-d8", ("odd-automorphisms",),
              "Q8 * D8 has an automorphism of order 5", _q8dstar_five, 32),
        Check("three-involution-row-64", ("small-group-table", "suz"),
              "order 64, three involutions, odd automorphism: C8xC8, Q8xC8, Y6, Q8xQ8, Suz",
              _three_involution_row, 64),
        Check("higman-suz", ("suzuki", "suz"), "Suz satisfies Omega1 = Z = Phi = P'", _higman, 64),
        Check("resistance-suz", ("suzuki", "suz"),
              "every saturated system on Suz is N_F(P) via the series 1 <= Omega1 <= P",
              _suz_resistance, 64, 64),
        Check("gl4-fixed-points", ("gl4",),
              "order-3 elements of GL4(2) fix 0 or 3 nonzero vectors, order-5 elements fix none", _gl4),
        Check("x6-isomorphic-y6", ("x-y",), "X6 and Y6 are isomorphic", _x_y(6, True), 64),
        Check("x7-not-isomorphic-y7", ("x-y",), "X7 and Y7 are not isomorphic", _x_y(7, False), 128),
        Check("x8-not-isomorphic-y8", ("x-y",), "X8 and Y8 are not isomorphic", _x_y(8, False), 256),
        Check("metacyclic-only-trivial-fusion", ("metacyclic",),
              "metacyclic 2-groups of order <= 64 other than homocyclic, D, SD, Q carry only F_P(P)",
              _metacyclic, 64, 64),
        Check("burnside-kernel", ("properties",),
              "the kernel of Aut(G) -> Aut(G/Phi(G)) is a 2-group",
              _property(pr.burnside_violations, _cat(aut=True)), 128, 0, 128),
        Check("maximal-transitivity", ("properties",),
              "2-generator groups with an odd automorphism permute their maximals transitively",
              _property(pr.maximal_transitivity_violations, _cat(), with_odd=True), 128, 0, 128),
        Check("self-centralizing-v4", ("properties",),
              "a self-centralizing V4 forces a dihedral or semidihedral group",
              _property(pr.self_centralizing_v4_violations, _cat()), 128),
        Check("index-two-three-involutions", ("properties",),
              "2-rank 2: an index <= 2 subgroup has three central involutions, or D/SD with cyclic maximal",
              _property(pr.index_two_violations, _cat()), 128),
        Check("three-or-seven-involutions", ("properties",),
              "V4 quotients with three-involution maximals: one involution gives seven, three give three",
              _property(pr.three_or_seven_violations, _cat()), 128),
        Check("odd-commutator-qc35", ("properties",),
              "on Q8 x C32: [P,phi] = [Q,phi] = Q8 and P = [Q,phi] C_P([Q,phi])", _lemma_qc35, 256),
        Check("janko-qc33", ("properties",),
              "on Q8 x C8 with W = <a, c^2>: C_P(W) metacyclic and Omega_2(C_P(W)) = W", _janko_qc33, 64),
        Check("q16-quotient-d8", ("properties",),
              "the rank-2 system on Q16 modulo its center is the PSL2-type system on D8", _q16_quotient, 16, 16),
        Check("bundled-corpus", ("corpus", "suz"),
              "every entry of the bundled corpus classifies without contradiction", _bundled_corpus, 128),
    ]
    if export is not None:
        checks.append(Check("export-completeness", ("corpus",),
                            "every group in the supplied export is resolved by the classification",
                            _export_completeness(export), get_caps().order))
    return checks


def build_order(text: str) -> int:
    from ..families import parse_spec

    return parse_spec(text).order


def _skip_reason(check: Check) -> str | None:
    caps = get_caps()
    if check.max_order > caps.order:
        return f"needs groups of order {check.max_order}; cap order={caps.order}"
    if check.fusion_order > caps.fusion:
        return f"needs fusion systems on order {check.fusion_order}; cap fusion={caps.fusion}"
    if check.aut_order > caps.aut:
        return f"needs Aut(G) for order {check.aut_order}; cap aut={caps.aut}"
    return None


def select(checks: list[Check], only: Iterable[str] | None) -> list[Check]:
    if not only:
        return checks
    wanted = set(only)
    return [c for c in checks if c.id in wanted or wanted & set(c.tags)]


def run_checks(checks: list[Check], echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for c in checks:
        start = time.perf_counter()
        reason = _skip_reason(c)
        if reason is not None:
            res = CheckResult(c.id, c.tags, c.claim, SKIPPED, reason)
        else:
            try:
                ok, detail = c.run()
                res = CheckResult(c.id, c.tags, c.claim, PASS if ok else FAIL, detail)
            except (CapExceeded, UnsupportedOrder) as exc:
                res = CheckResult(c.id, c.tags, c.claim, SKIPPED, f"cap reached: {exc}")
            except Exception as exc:  # a crashing check is a failed check, not a crashed harness
                res = CheckResult(c.id, c.tags, c.claim, ERROR, f"{type(exc).__name__}: {exc}")
        res.seconds = round(time.perf_counter() - start, 3)
        results.append(res)
        if echo is not None:
            echo(f"{res.status:<8}{res.id}  {res.detail}")
    return results


SCOPE = ("bundled family catalogue and corpus; exhaustive completeness over all groups of an order "
         "is verified only when a database export is supplied")


def verify_paper(only: Iterable[str] | None = None, report: str | Path | None = None,
                 export: str | None = None, echo: Callable[[str], None] | None = print) -> tuple[int, list[CheckResult]]:
    """Run the selected checks; exit status 0 iff every executed check passed."""
    checks = select(all_checks(export), only)
    scope = SCOPE if export is None else f"bundled catalogue plus export {export}"
    if echo is not None:
        echo(f"scope: {scope}")
        echo(f"caps: {get_caps().describe()}")
    results = run_checks(checks, echo)
    failed = [r for r in results if r.status in (FAIL, ERROR)]
    status = 1 if failed else 0
    if report is not None:
        report = Path(report)
        with report.open("w") as fh:
            fh.write(json.dumps({"scope": scope, "caps": get_caps().describe()}, sort_keys=True) + "\n")
            for r in results:
                fh.write(json.dumps(r.as_dict(), sort_keys=True) + "\n")
        with report.with_name(report.name + ".timing.jsonl").open("w") as fh:
            for r in results:
                fh.write(json.dumps({"id": r.id, "seconds": r.seconds}, sort_keys=True) + "\n")
    if echo is not None:
        counts = Counter(r.status for r in results)
        echo("summary: " + ", ".join(f"{k} {counts[k]}" for k in (PASS, FAIL, ERROR, SKIPPED)))
    return status, results


__all__ = [
    "Check",
    "CheckResult",
    "ERROR",
    "FAIL",
    "PASS",
    "SKIPPED",
    "all_checks",
    "negative_control_specs",
    "odd_orders",
    "run_checks",
    "saturated_systems",
    "select",
    "verify_paper",
]
