import math

import numpy as np
import pytest

from qslverify import Config, eig_hermitian


@pytest.fixture
def cfg():
    return Config()


@pytest.fixture
def qubit():
    """K = diag(-1, 1) with the equal superposition: overlap |cos theta|."""
    return eig_hermitian(np.diag([-1.0, 1.0])), np.array([1.0, 1.0]) / math.sqrt(2)


@pytest.fixture
def qutrit():
    """K = diag(0, 1, 2) with the uniform state."""
    return eig_hermitian(np.diag([0.0, 1.0, 2.0])), np.ones(3) / math.sqrt(3)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
