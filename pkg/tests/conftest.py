import numpy as np
import pytest

from qmask.core import PureState, RegisterShape


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def gaussian_state(dims, rng):
    """Normalized complex-Gaussian vector; independent of qmask.random_state."""
    n = int(np.prod(dims))
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return PureState(RegisterShape(tuple(dims)), z / np.linalg.norm(z))


def ket(dims, *idx):
    amp = np.zeros(dims, dtype=complex)
    amp[idx] = 1.0
    return amp.ravel()


# filled by test_acceptance; printed once at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
