import math

import pytest

from escdyn import FATOU, EscapeConfig, exp_map, translate

TWO_PI_I = 2j * math.pi
PI_I = 1j * math.pi


@pytest.fixture
def fatou():
    return FATOU


@pytest.fixture
def fatou_g():
    return translate(FATOU, TWO_PI_I)


@pytest.fixture
def exp_quarter():
    return exp_map(0.25)


@pytest.fixture
def cfg():
    return EscapeConfig()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
