"""Corpus runs: parse entry by entry, classify in a worker pool, keep input order."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Iterator

from ..config import Caps, get_caps, set_caps
from ..errors import ParseError
from .grammar import parse_chunk, split_entries
from .records import ResultRecord, classify_entry, error_record


def _work(args: tuple[int, str, int, int, str, int | None, bool]) -> ResultRecord:
    index, text, line, col, caps_text, budget, fusion = args
    set_caps(Caps().with_overrides(caps_text))
    from .grammar import _Fragment

    try:
        entry = parse_chunk(_Fragment(text, line, col))
    except ParseError as exc:
        return error_record(index, text.strip(), exc)
    return classify_entry(entry, index=index, budget=budget, fusion=fusion)


def run_corpus_text(text: str, jobs: int = 1, budget: int | None = None,
                    fusion: bool = False) -> Iterator[ResultRecord]:
    """One record per entry, in input order; a malformed entry yields an error record."""
    caps = get_caps().describe()
    tasks = [(i, f.text, f.line, f.col, caps, budget, fusion) for i, f in enumerate(split_entries(text))]
    if not tasks:
        return
    if jobs <= 1 or len(tasks) == 1:
        for t in tasks:
            yield _work(t)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map yields results in submission order whatever the completion order
        yield from pool.map(_work, tasks)


def run_corpus(path: str | Path, jobs: int = 1, budget: int | None = None,
               fusion: bool = False) -> Iterator[ResultRecord]:
    text = Path(path).read_text()
    return run_corpus_text(text, jobs=jobs, budget=budget, fusion=fusion)


def timing_path(report: str | Path) -> Path:
    report = Path(report)
    return report.with_name(report.name + ".timing.jsonl")


def write_report(records, report: str | Path) -> list[ResultRecord]:
    """Write records as JSON lines plus a timing sidecar; returns the records."""
    out = []
    report = Path(report)
    with report.open("w") as fh, timing_path(report).open("w") as th:
        for r in records:
            fh.write(r.to_json() + "\n")
            th.write(json.dumps({"index": r.index, "seconds": r.seconds}, sort_keys=True) + "\n")
            out.append(r)
    return out


def read_report(report: str | Path) -> list[ResultRecord]:
    return [ResultRecord.from_json(line) for line in Path(report).read_text().splitlines() if line.strip()]


def bundled_corpus_path() -> Path:
    return Path(__file__).with_name("data") / "families.corpus"


__all__ = [
    "bundled_corpus_path",
    "read_report",
    "run_corpus",
    "run_corpus_text",
    "timing_path",
    "write_report",
]
