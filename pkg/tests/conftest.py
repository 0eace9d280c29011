import numpy as np
import pytest

from logmellin import make_log_grid


@pytest.fixture(scope="session")
def grid1():
    return make_log_grid(1, -8.0, 1 / 64, 1024)


@pytest.fixture(scope="session")
def grid2():
    return make_log_grid(2, -4.0, 1 / 16, 128)


@pytest.fixture(scope="session")
def small1():
    return make_log_grid(1, -4.0, 1 / 16, 128)


@pytest.fixture(scope="session")
def small2():
    return make_log_grid(2, -2.0, 1 / 8, 32)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
