"""Shared fixtures and the acceptance-summary reporter.

After a run that included tests from test_acceptance.py, the terminal
summary prints one PASS/FAIL line per acceptance criterion.
"""

import pytest

from sindhi_ner import build_engine
from sindhi_ner.pipeline import DATA_DIR


@pytest.fixture(scope="session")
def engine():
    return build_engine()


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


_acceptance_results = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance_results[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, (number, description) in CRITERIA.items():
        outcome = _acceptance_results.get(name)
        if outcome is None:
            continue
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status} - {description}")
