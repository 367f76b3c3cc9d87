import pytest

from smallfusion.config import get_caps, set_caps

# criterion number -> (title, [(test id, outcome, reason)])
_criteria: dict[int, tuple[str, list]] = {}


@pytest.fixture(autouse=True)
def _restore_caps():
    """The CLI's --caps flag changes process-wide caps; put them back after every test."""
    saved = get_caps()
    yield
    set_caps(saved)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when != "call" and not (rep.when == "setup" and not rep.passed):
        return
    number, title = mark.args
    _, rows = _criteria.setdefault(number, (title, []))
    if hasattr(rep, "wasxfail"):
        state = "xfail" if rep.skipped else "xpass"
        rows.append((item.name, state, rep.wasxfail))
    else:
        rows.append((item.name, rep.outcome, ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        title, rows = _criteria[number]
        ok = all(state == "passed" for _, state, _ in rows)
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
        for name, state, reason in rows:
            if state != "passed":
                note = f" ({reason})" if reason else ""
                tr.write_line(f"         {name}: {state}{note}")
