import json

import pytest

from smallfusion.config import using_caps
from smallfusion.corpus.grammar import parse
from smallfusion.corpus.records import (
    ERROR,
    MATCHED,
    NO_ODD,
    NOT_APPLICABLE,
    UNDECIDED,
    ResultRecord,
    classify_entry,
)
from smallfusion.corpus.runner import read_report, run_corpus, run_corpus_text, timing_path, write_report
from smallfusion.families import build

from oracles import _map_from_images

SMALL_TABLE_ROWS = """\
group C4xC4 { gens a:4, b:4; label "SmallGroup(16,2)" }
group Q8xC2 { gens b:2, a:4, c:2; pow b: a^2; conj a^b = a^-1; label "SmallGroup(16,12)" }
family QC:3,2 label "SmallGroup(32,26)"
family QCstar:3,2 label "SmallGroup(16,13)"
family QDstar:3,3 label "SmallGroup(32,50)"
"""


def _witness_is_isomorphism(entry_text, record):
    G = parse(entry_text).to_group()
    H = build(record.verdict["family"])
    gens, images = zip(*record.verdict["witness"])
    f = _map_from_images(G, H, list(gens), list(images))
    return f is not None and len(set(f.tolist())) == H.order == G.order


def test_small_table_rows_all_match_with_witnesses():
    records = list(run_corpus_text(SMALL_TABLE_ROWS))
    assert [r.status for r in records] == [MATCHED] * 5
    assert [r.verdict["family"] for r in records] == ["Cnm:2,2", "QC:3,1", "QC:3,2", "QCstar:3,2", "QDstar:3,3"]
    assert records[0].label == "SmallGroup(16,2)"
    for line, r in zip(SMALL_TABLE_ROWS.splitlines(), records):
        assert _witness_is_isomorphism(line, r)
        assert r.verdict["odd_orders_agree"]


def test_empty_corpus_gives_empty_stream(tmp_path):
    path = tmp_path / "empty.corpus"
    path.write_text("")
    assert list(run_corpus(path)) == []
    assert list(run_corpus_text("# only a comment\n")) == []


def test_malformed_entry_is_isolated():
    text = "family D:3\ngroup Bad { gens x:6 }\nfamily QC:3,1\n"
    records = list(run_corpus_text(text))
    assert [r.index for r in records] == [0, 1, 2]
    assert [r.status for r in records] == [NO_ODD, ERROR, MATCHED]
    assert records[1].verdict["error"] == "SemanticError"


def test_inconsistent_presentation_is_an_error_record():
    (r,) = run_corpus_text("group Mod4 { gens x:8, y:2; rel y^x = y; pow y: 1; conj x^y = x^5 }")
    assert r.status == ERROR and r.verdict["error"] == "InconsistentPresentation"


def test_parallel_run_keeps_input_order_and_bytes(tmp_path):
    text = SMALL_TABLE_ROWS + "family D:5\nfamily suz\nfamily QD:3,3\n"
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_report(run_corpus_text(text, jobs=1), a)
    write_report(run_corpus_text(text, jobs=3), b)
    assert a.read_bytes() == b.read_bytes()
    assert [r.index for r in read_report(a)] == list(range(8))
    timing = [json.loads(line) for line in timing_path(a).read_text().splitlines()]
    assert [t["index"] for t in timing] == list(range(8))
    assert "seconds" not in a.read_text()


def test_record_json_round_trip():
    r = classify_entry(parse("family QC:3,3"))
    back = ResultRecord.from_json(r.to_json())
    assert back.to_json() == r.to_json()


def test_q8xc8_matches_qc33():
    r = classify_entry(parse("group Q8xC8 { gens b:2, a:4, c:8; pow b: a^2; conj a^b = a^-1 }"))
    assert r.status == MATCHED
    assert r.verdict["family"] == "QC:3,3" and r.verdict["odd_orders"] == [3]


def test_d32_has_no_odd_automorphism_and_is_not_listed():
    r = classify_entry(parse("family D:5"))
    assert r.status == NO_ODD
    assert r.verdict["on_lists"] is False
    assert r.verdict["checked_against"]


def test_suz_matches_with_three_and_five():
    r = classify_entry(parse("family suz"))
    assert r.status == MATCHED
    assert r.verdict["family"] == "suz" and r.verdict["odd_orders"] == [3, 5]


def test_rank_three_is_not_applicable():
    r = classify_entry(parse("family QD:3,3"))
    assert r.status == NOT_APPLICABLE and "2-rank 3" in r.verdict["reason"]


def test_tiny_budget_gives_undecided_with_budget_info():
    r = classify_entry(parse("family Cnm:2,2"), budget=1)
    assert r.status == UNDECIDED
    assert r.verdict["budget"] == 1 and r.verdict["primes"]


def test_order_cap_gives_undecided():
    with using_caps(order=64):
        r = classify_entry(parse("family X:7"))
    assert r.status == UNDECIDED and "order=64" in r.verdict["caps"]


def test_expected_annotations_are_checked():
    r = classify_entry(parse("family QCstar:3,2 expect num_involutions=7"))
    assert r.expected == {"ok": True, "mismatches": []}
    bad = classify_entry(parse("family QCstar:3,2 expect num_involutions=3"))
    assert bad.expected and not bad.expected["ok"]


def test_fusion_summary_on_request():
    r = classify_entry(parse("family D:4"), fusion=True)
    assert len(r.fusion) == 3
    assert sorted(f["essential_rank"] for f in r.fusion) == [0, 1, 2]


def test_records_carry_engine_and_caps():
    r = classify_entry(parse("family Q:3"))
    d = r.as_dict()
    assert d["engine"] and "order=" in d["caps"]


@pytest.mark.parametrize("bad", ["family nope:3", "group { }"])
def test_bad_entries_never_abort_the_run(bad):
    records = list(run_corpus_text(f"family C:2\n{bad}\nfamily C:3\n"))
    assert len(records) == 3 and records[1].status == ERROR
