from __future__ import annotations

import re

from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

# outcome per acceptance criterion, filled while tests run
_criteria: dict = {}
_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num, name = int(m.group(1)), m.group(2).replace("_", " ")
    ok = report.passed if report.when == "call" else not report.failed
    prev = _criteria.get(num, (name, True))
    _criteria[num] = (name, prev[1] and ok and not report.skipped)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        name, ok = _criteria[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {name}")
