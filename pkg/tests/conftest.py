"""Shared fixtures plus a terminal summary for the acceptance criteria."""

import pytest

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance):
        name = nodeid.split("::")[-1]
        outcome = "PASS" if _acceptance[nodeid] == "passed" else "FAIL"
        terminalreporter.write_line(f"{outcome} {name}")
