import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scfo.boolfun import named_function
from scfo.search import SearchOptions, search_scfo


# (name, workers) -> result of a default exhaustive search, shared across modules
RESULTS = {}


def cached_search(name, workers=1):
    key = (name, workers)
    if key not in RESULTS:
        RESULTS[key] = search_scfo(named_function(name), SearchOptions(workers=workers), name)
    return RESULTS[key]


@pytest.fixture(scope="session")
def search_result():
    return cached_search


# acceptance criterion number -> (passed, summary); printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
