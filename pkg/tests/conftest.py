import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from _acceptance_log import LINES  # noqa: E402

from stacksort import run_census  # noqa: E402

EXTENDED = os.environ.get("STACKSORT_EXTENDED") == "1"


@pytest.fixture(scope="session")
def census_cache():
    """Memoized censuses so expensive lengths are enumerated once per run."""
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = run_census(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def extended():
    return EXTENDED


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
        if not EXTENDED:
            terminalreporter.write_line(
                "(set STACKSORT_EXTENDED=1 to extend censuses to n=10/11)")
