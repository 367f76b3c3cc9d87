"""Classify the bundled corpus and write a deterministic JSON-lines report.

Runs the pipeline twice (serial and with a worker pool) and confirms the
two reports are byte-identical.

    python3 demos/corpus_run.py --jobs 4 --out /tmp/corpus
"""

import argparse
from collections import Counter
from pathlib import Path

from smallfusion.corpus.runner import bundled_corpus_path, run_corpus, write_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--out", default="corpus_reports")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    serial = write_report(run_corpus(bundled_corpus_path()), out / "serial.jsonl")
    write_report(run_corpus(bundled_corpus_path(), jobs=args.jobs), out / "parallel.jsonl")

    for r in serial:
        extra = r.verdict.get("family") or r.verdict.get("reason", "")
        print(f"{r.index:>3} {r.status:<20} {r.entry[:60]:<60} {extra}")
    print(dict(Counter(r.status for r in serial)))
    same = (out / "serial.jsonl").read_bytes() == (out / "parallel.jsonl").read_bytes()
    print(f"serial and parallel reports identical: {same}")


if __name__ == "__main__":
    main()
