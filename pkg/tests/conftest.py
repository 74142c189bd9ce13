import numpy as np
import pytest
from hypothesis import settings

from freedecay.packets import Interval, make_family_packet, make_superposition

settings.register_profile("default", deadline=None, max_examples=30)
settings.load_profile("default")

# closed-form normalizations, used only as oracles
N0 = np.pi ** -0.25
N1 = (2 / np.sqrt(np.pi)) ** 0.5
N2 = (4 / (3 * np.sqrt(np.pi))) ** 0.5


@pytest.fixture(scope="session")
def phi0():
    return make_family_packet(0, 1.0, 0.0, 0.0)


@pytest.fixture(scope="session")
def phi1():
    return make_family_packet(1, 1.0, 0.0, 0.0)


@pytest.fixture(scope="session")
def phi2():
    return make_family_packet(2, 1.0, 0.0, 0.0)


@pytest.fixture(scope="session")
def unit_interval():
    return Interval(-2.0, 2.0)


def random_superposition(rng, m_min=0, n_comp=3, k0_zero=True):
    comps, weights = [], []
    for _ in range(n_comp):
        m = int(rng.integers(m_min, m_min + 3))
        a0 = float(rng.uniform(0.7, 1.5))
        k0 = 0.0 if k0_zero else float(rng.uniform(-1, 1))
        x0 = float(rng.uniform(-1.5, 1.5))
        comps.append(make_family_packet(m, a0, k0, x0))
        weights.append(complex(rng.normal(), rng.normal()))
    return make_superposition(comps, weights)


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
