import json

from smallfusion.config import using_caps
from smallfusion.corpus.harness import (
    ERROR,
    FAIL,
    PASS,
    SKIPPED,
    Check,
    all_checks,
    negative_control_specs,
    run_checks,
    select,
    verify_paper,
)


def _ok():
    return True, "fine"


def _bad():
    return False, "broken"


def _crash():
    raise RuntimeError("boom")


def test_fusion_counts_tag_selects_exactly_eight_checks():
    chosen = select(all_checks(), ["fusion-counts"])
    assert len(chosen) == 8
    assert all(c.id.startswith("fusion-count-") for c in chosen)


def test_check_ids_are_unique():
    ids = [c.id for c in all_checks()]
    assert len(ids) == len(set(ids))


def test_default_scope_runs_every_check():
    checks = all_checks()
    assert select(checks, None) == checks
    assert len(checks) == 32


def test_export_adds_completeness_check(tmp_path):
    path = tmp_path / "export.corpus"
    path.write_text("family D:3\n")
    ids = [c.id for c in all_checks(str(path))]
    assert ids[-1] == "export-completeness"


def test_low_order_cap_skips_suz_checks():
    with using_caps(order=32):
        status, results = verify_paper(only=["suz"], echo=None)
    assert results and all(r.status == SKIPPED for r in results)
    assert status == 0


def test_fusion_counts_pass_under_default_caps(tmp_path):
    report = tmp_path / "report.jsonl"
    with using_caps(fusion=32):  # Suz needs fusion=64, so it is skipped here
        status, results = verify_paper(only=["fusion-counts"], report=report, echo=None)
    by_id = {r.id: r.status for r in results}
    assert by_id["fusion-count-suz"] == SKIPPED
    assert all(s == PASS for i, s in by_id.items() if i != "fusion-count-suz")
    assert status == 0
    lines = [json.loads(x) for x in report.read_text().splitlines()]
    assert "scope" in lines[0]
    assert [x["id"] for x in lines[1:]] == [r.id for r in results]


def test_exit_status_is_zero_only_without_failures():
    checks = [Check("a", ("t",), "ok", _ok), Check("b", ("t",), "skipped", _ok, max_order=10**9)]
    results = run_checks(checks)
    assert [r.status for r in results] == [PASS, SKIPPED]
    bad = run_checks([Check("c", (), "fails", _bad), Check("d", (), "crashes", _crash)])
    assert [r.status for r in bad] == [FAIL, ERROR]
    assert "RuntimeError: boom" in bad[1].detail


def test_negative_controls_cover_maximal_class_and_modular():
    specs = negative_control_specs()
    assert "D:4" in specs and "SD:7" in specs and "Q:4" in specs and "Mod:4" in specs
    assert "Q:3" not in specs and "D:3" not in specs


def test_echo_prints_one_line_per_check():
    lines = []
    verify_paper(only=["gl4-fixed-points", "x6-isomorphic-y6"], echo=lines.append)
    body = [x for x in lines if x.startswith((PASS, FAIL, SKIPPED, ERROR))]
    assert len(body) == 2
    assert lines[-1].startswith("summary: PASS 2")
