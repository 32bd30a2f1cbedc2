import functools

import pytest

from periodrh.fixtures import LABELS
from periodrh.suite import analyze


@functools.lru_cache(maxsize=None)
def cached_analysis(label):
    return analyze(label)


@pytest.fixture(scope="session")
def analysis():
    return cached_analysis


@pytest.fixture(params=LABELS)
def label(request):
    return request.param


# PASS/FAIL lines from test_acceptance.py, repeated in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
