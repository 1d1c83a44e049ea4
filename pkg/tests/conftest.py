"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

import pytest

_OUTCOMES: dict[str, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    label, title = marker.args
    _OUTCOMES[label] = (title, report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_OUTCOMES, key=lambda s: int(s.lstrip("AC"))):
        title, ok = _OUTCOMES[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {title}")
