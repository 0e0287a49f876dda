import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# Acceptance tests append (criterion, status, detail) here; printed at the end of the run.
ACCEPTANCE_RESULTS: list = []


@pytest.fixture
def acceptance_log():
    def record(criterion: str, status: str, detail: str = "") -> None:
        ACCEPTANCE_RESULTS.append((criterion, status, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, status, detail in sorted(ACCEPTANCE_RESULTS):
        line = f"{criterion}: {status}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
