import os

import pytest

from fibeuler import PrecisionContext

_acceptance: list[tuple[str, str, str]] = []


@pytest.fixture
def ctx30():
    return PrecisionContext(target_digits=30)


@pytest.fixture
def ctx_fd():
    # finite-difference checks need ~3x the asserted digits
    return PrecisionContext(target_digits=20, work_digits=60)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(num): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if "test_acceptance.py" in report.nodeid:
            outcome = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
            detail = dict(report.user_properties).get("detail", "")
            _acceptance.append((report.nodeid.split("::")[-1], outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _acceptance:
        terminalreporter.write_line(f"{outcome:4s}  {name}" + (f"  [{detail}]" if detail else ""))


def full_run_enabled() -> bool:
    return os.environ.get("FIBEULER_FULL") == "1"
