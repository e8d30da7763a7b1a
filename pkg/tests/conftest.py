"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

import pytest

_outcomes: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    detail = ""
    if report.failed:
        crash = getattr(report.longrepr, "reprcrash", None)
        detail = crash.message.splitlines()[0].split(": [")[0] if crash else ""
    _outcomes[number] = ("PASS" if report.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_outcomes):
        status, title, detail = _outcomes[number]
        line = f"criterion {number:2d} [{status}] {title}"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))
