import numpy as np
import pytest

_ACCEPTANCE_LINES = []


class AcceptanceLog:
    """Collects one verdict line per acceptance criterion for the terminal summary."""

    def record(self, criterion: str, passed: bool, detail: str) -> bool:
        verdict = "PASS" if passed else "FAIL"
        _ACCEPTANCE_LINES.append(f"[{verdict}] criterion {criterion}: {detail}")
        print(_ACCEPTANCE_LINES[-1])
        return passed


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
