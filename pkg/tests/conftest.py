"""Per-criterion reporting for the acceptance suite.

Tests marked ``@pytest.mark.criterion(n, "title")`` are grouped, and a
PASS/FAIL line per criterion is printed at the end of the session.
"""

import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    entry = _RESULTS.setdefault(n, {"title": title, "passed": 0, "failed": 0, "skipped": 0})
    if report.when == "call":
        if report.passed:
            entry["passed"] += 1
        elif report.skipped:
            entry["skipped"] += 1
        else:
            entry["failed"] += 1
    elif report.failed or report.skipped:
        # setup or teardown problems count against the criterion
        entry["failed" if report.failed else "skipped"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        e = _RESULTS[n]
        ok = e["failed"] == 0 and e["skipped"] == 0 and e["passed"] > 0
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"criterion {n}: {status}  {e['title']}  ({e['passed']} passed, {e['failed']} failed)"
        )
