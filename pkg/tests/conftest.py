from __future__ import annotations

import re

_CRIT = re.compile(r"test_acceptance\.py::test_c(\d\d)_(\w+)")
_outcomes: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    m = _CRIT.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(int(m.group(1)), []).append((m.group(2), report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_outcomes):
        parts = _outcomes[crit]
        ok = all(o == "passed" for _, o in parts)
        line = f"criterion {crit:2d}: {'PASS' if ok else 'FAIL'}"
        if not ok:
            failed = [name for name, o in parts if o != "passed"]
            line += "  (failed: " + ", ".join(failed) + ")"
        tr.write_line(line)
