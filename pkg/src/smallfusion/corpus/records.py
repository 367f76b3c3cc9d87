"""Classification of corpus entries into persistent, line-delimited records."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

from .. import __version__
from ..autos import find_isomorphism, find_odd_automorphism, minimal_generators
from ..config import get_caps
from ..errors import CapExceeded, SmallFusionError, UnsupportedOrder
from ..families import build, catalogue, expected_fingerprint
from ..group import Group
from ..invariants import fingerprint
from .grammar import CorpusEntry

# verdict statuses
MATCHED = "matched"
NO_ODD = "no-odd-automorphism"
NOT_APPLICABLE = "not-applicable"
UNDECIDED = "UNDECIDED"
CONTRADICTION = "CONTRADICTION"
ERROR = "error"


@dataclass
class ResultRecord:
    """One classified corpus entry.

    ``seconds`` is kept out of :meth:`to_json` so that identical runs write
    byte-identical reports; it goes to the timing sidecar instead.
    """

    index: int
    label: str | None
    entry: str
    verdict: dict[str, Any]
    fingerprint: str | None = None
    aut: dict[str, Any] | None = None
    expected: dict[str, Any] | None = None
    fusion: list[dict[str, Any]] | None = None
    engine: str = __version__
    caps: str = field(default_factory=lambda: get_caps().describe())
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return self.verdict["status"]

    def as_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "label": self.label,
            "entry": self.entry,
            "verdict": self.verdict,
            "fingerprint": self.fingerprint,
            "aut": self.aut,
            "expected": self.expected,
            "fusion": self.fusion,
            "engine": self.engine,
            "caps": self.caps,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        return cls(**json.loads(line))


def error_record(index: int, entry_text: str, exc: BaseException, label: str | None = None) -> ResultRecord:
    return ResultRecord(index, label, entry_text, {
        "status": ERROR,
        "error": type(exc).__name__,
        "reason": str(exc),
    })


def _check_expected(entry: CorpusEntry, G: Group) -> dict[str, Any] | None:
    if not entry.expected:
        return None
    have = dict(item.split("=", 1) for item in fingerprint(G).to_line().split(";"))
    mismatches = [f"{k}: expected {v}, found {have[k]}" for k, v in entry.expected if have[k] != v]
    return {"ok": not mismatches, "mismatches": mismatches}


def _listed_specs(order: int):
    """Catalogue members of the given order that the classification lists (2-rank 2, odd automorphism)."""
    out = []
    for s in catalogue(order):
        if s.order != order:
            continue
        exp = expected_fingerprint(s)
        if exp.p_rank == 2 and exp.odd_orders:
            out.append(s)
    return out


def _isomorphic_spec(G: Group, specs) -> tuple[Any, list[list[int]]] | None:
    fp = fingerprint(G)
    for s in specs:
        H = build(s)
        if fingerprint(H) != fp:
            continue
        perm = find_isomorphism(G, H)
        if perm is not None:
            return s, [[int(g), int(perm[g])] for g in minimal_generators(G)]
    return None


def classify_group(G: Group, budget: int | None = None) -> tuple[dict[str, Any], dict[str, Any] | None]:
    """Run the 2-rank-2 classification on G; returns (verdict, aut summary)."""
    fp = fingerprint(G)
    if G.prime() != 2:
        return {"status": NOT_APPLICABLE, "reason": "not a 2-group"}, None
    if fp.p_rank != 2:
        return {"status": NOT_APPLICABLE, "reason": f"2-rank {fp.p_rank}"}, None
    budget = get_caps().budget if budget is None else budget
    report = find_odd_automorphism(G, budget=budget)
    aut = report.as_dict()
    if not report.odd_orders:
        if report.undecided:
            return {"status": UNDECIDED, "reason": "lift search exhausted its budget",
                    "budget": budget, "primes": sorted(report.undecided)}, aut
        listed = _listed_specs(G.order)
        hit = _isomorphic_spec(G, listed)
        verdict = {
            "status": NO_ODD,
            "reason": "no odd automorphism (consistent: group must not be on the lists)",
            "checked_against": [s.text() for s in listed],
            "on_lists": hit is not None,
        }
        if hit is not None:
            # a listed group without an odd automorphism contradicts the lists
            verdict["status"] = CONTRADICTION
            verdict["family"] = hit[0].text()
            verdict["witness"] = hit[1]
        return verdict, aut
    listed = _listed_specs(G.order)
    hit = _isomorphic_spec(G, listed)
    if hit is None:
        return {"status": CONTRADICTION,
                "reason": "odd automorphism on a group missing from the lists",
                "odd_orders": sorted(report.odd_orders),
                "checked_against": [s.text() for s in listed]}, aut
    s, witness = hit
    expected = expected_fingerprint(s).odd_orders
    verdict = {
        "status": MATCHED,
        "family": s.text(),
        "witness": witness,
        "odd_orders": sorted(report.odd_orders),
        "odd_orders_agree": expected is None or set(expected) == set(report.odd_orders),
    }
    if report.undecided:
        verdict["undecided_primes"] = sorted(report.undecided)
        verdict["budget"] = budget
    return verdict, aut


def _fusion_summary(G: Group) -> list[dict[str, Any]]:
    from ..fusion import enumerate_saturated, fusion_record

    return [fusion_record(F).as_dict() for F in enumerate_saturated(G)]


def classify_entry(entry: CorpusEntry, index: int = 0, budget: int | None = None,
                   fusion: bool = False) -> ResultRecord:
    """Build the entry's group, fingerprint it and classify it.

    Cap violations give an UNDECIDED record; any other failure an error record.
    """
    start = time.perf_counter()
    text = entry.text()
    try:
        G = entry.to_group()
        fp = fingerprint(G).to_line()
        verdict, aut = classify_group(G, budget)
        record = ResultRecord(index, entry.label, text, verdict, fp, aut, _check_expected(entry, G))
        if fusion:
            try:
                record.fusion = _fusion_summary(G)
            except CapExceeded as exc:
                record.fusion = [{"status": UNDECIDED, "reason": str(exc)}]
    except (CapExceeded, UnsupportedOrder) as exc:
        record = ResultRecord(index, entry.label, text,
                              {"status": UNDECIDED, "reason": str(exc), "caps": get_caps().describe()})
    except SmallFusionError as exc:
        record = error_record(index, text, exc, entry.label)
    record.seconds = round(time.perf_counter() - start, 6)
    return record


__all__ = [
    "CONTRADICTION",
    "ERROR",
    "MATCHED",
    "NOT_APPLICABLE",
    "NO_ODD",
    "ResultRecord",
    "UNDECIDED",
    "classify_entry",
    "classify_group",
    "error_record",
]
