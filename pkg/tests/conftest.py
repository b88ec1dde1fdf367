import numpy as np
import pytest

from randflight.rates import RateFunction


@pytest.fixture(scope="session")
def power_half():
    return RateFunction.power_law(0.5)


@pytest.fixture(scope="session")
def log_two():
    return RateFunction.log_power(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
