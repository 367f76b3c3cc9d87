"""Corpus text format, classification records, corpus runs and the verification harness."""

from .grammar import (
    Conj,
    CorpusEntry,
    GroupSource,
    Pow,
    Rel,
    format_corpus,
    format_entry,
    parse,
    parse_corpus,
    split_entries,
    to_presentation,
)
from .harness import CheckResult, all_checks, verify_paper
from .records import ResultRecord, classify_entry, classify_group
from .runner import bundled_corpus_path, read_report, run_corpus, run_corpus_text, write_report

__all__ = [
    "CheckResult",
    "Conj",
    "CorpusEntry",
    "GroupSource",
    "Pow",
    "Rel",
    "ResultRecord",
    "all_checks",
    "bundled_corpus_path",
    "classify_entry",
    "classify_group",
    "format_corpus",
    "format_entry",
    "parse",
    "parse_corpus",
    "read_report",
    "run_corpus",
    "run_corpus_text",
    "split_entries",
    "to_presentation",
    "verify_paper",
    "write_report",
]
