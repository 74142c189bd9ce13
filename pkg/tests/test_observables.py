import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import erf

from freedecay.errors import AliasingError, InvalidParameterError, NumericalFailure
from freedecay.packets import Interval, make_family_packet, sample_to_grid
from freedecay.propagator import EvolvedField, evolve, required_grid
from freedecay.observables import (
    interval_grid,
    nonescape,
    nonescape_probability,
    observable_series,
    survival,
    survival_position,
)

from conftest import random_superposition


def test_survival_examples(phi0, phi2):
    assert survival(phi0, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert survival(phi0, 100.0) == pytest.approx(0.0099995, abs=1e-7)
    assert survival(phi0, 100.0) == pytest.approx((1 + 1e4) ** -0.5, rel=1e-12)
    assert survival(phi2, 30.0) == pytest.approx((1 + 900.0) ** -2.5, rel=1e-10)


def test_survival_grid_route(phi1):
    g = sample_to_grid(phi1, n_points=required_grid(phi1, 10.0, 0.0))
    assert survival(g, 10.0) == pytest.approx(survival(phi1, 10.0), rel=1e-9)
    with pytest.raises(AliasingError):
        survival(sample_to_grid(phi1), 1000.0)


def test_survival_position_route(phi1):
    x = np.linspace(-60, 60, 12001)
    assert survival_position(phi1, 2.0, x) == pytest.approx(survival(phi1, 2.0), rel=1e-8)


def test_nonescape_examples(phi0, unit_interval):
    assert nonescape_probability(phi0, 0.0, unit_interval) == pytest.approx(erf(2), abs=1e-10)
    assert nonescape_probability(phi0, 1000.0, unit_interval) * 1000 == pytest.approx(2 / np.sqrt(np.pi), rel=1e-3)
    with pytest.raises(InvalidParameterError):
        Interval(1.0, 1.0)


def test_nonescape_outside_grid(phi0):
    f = evolve(phi0, 1.0, np.linspace(-1, 1, 101))
    with pytest.raises(InvalidParameterError):
        nonescape(f, Interval(-2, 2))


def test_nonescape_off_node_ends(phi0):
    f = evolve(phi0, 0.0, np.linspace(-3, 3, 1201))
    exact = (erf(1.234) - erf(-0.777)) / 2
    assert nonescape(f, Interval(-0.777, 1.234)) == pytest.approx(exact, abs=1e-9)


def test_underresolved_field_flagged():
    x = np.linspace(-2, 2, 41)
    f = EvolvedField(0.0, 0.0, x, np.exp(3j * x * x), 1.0)
    with pytest.raises(NumericalFailure):
        nonescape(f, Interval(-2, 2))


@given(seed=st.integers(0, 2**32 - 1), T=st.floats(0, 500))
def test_probabilities_bounded(seed, T):
    p = random_superposition(np.random.default_rng(seed), k0_zero=False)
    assert 0 <= survival(p, T) <= 1 + 1e-12
    assert 0 <= nonescape_probability(p, T, Interval(-2, 2)) <= 1 + 1e-9


@given(T=st.floats(0, 300), c=st.floats(-1.5, 1.5))
def test_nonescape_additive(phi1, T, c):
    x = np.linspace(-2, 2, 4001)
    f = evolve(phi1, T, x)
    whole = nonescape(f, Interval(-2, 2))
    parts = nonescape(f, Interval(-2, c)) + nonescape(f, Interval(c, 2))
    assert abs(whole - parts) < 1e-9


@pytest.mark.parametrize("m", [0, 1, 2])
def test_survival_independent_of_x0(m):
    T = np.geomspace(0.1, 1000, 40)
    a = observable_series(make_family_packet(m, 1.0, 0.2, 0.0), T, Interval(-2, 2)).survival
    b = observable_series(make_family_packet(m, 1.0, 0.2, 3.0), T, Interval(-2, 2)).survival
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_series_examples(phi0, phi2, unit_interval):
    T = np.geomspace(0.1, 1000, 80)
    s = observable_series(phi0, T, unit_interval)
    assert s.survival[0] == pytest.approx(1.01**-0.5, rel=1e-10)
    tail = T > 10
    assert np.all(np.diff(s.survival[tail]) < 0) and np.all(np.diff(s.nonescape[tail]) < 0)
    one = observable_series(phi0, [0.0], unit_interval)
    assert one.survival[0] == pytest.approx(1.0) and one.nonescape[0] == pytest.approx(erf(2), abs=1e-10)
    s2 = observable_series(phi2, T, unit_interval)
    late = T >= 100
    slope_S = np.polyfit(np.log10(T[late]), np.log10(s2.survival[late]), 1)[0]
    slope_P = np.polyfit(np.log10(T[late]), np.log10(s2.nonescape[late]), 1)[0]
    assert slope_S == pytest.approx(-5, abs=0.05) and slope_P == pytest.approx(-3, abs=0.05)


def test_series_validation(phi0, unit_interval):
    for bad in ([], [1.0, 0.5], [-1.0, 1.0]):
        with pytest.raises(InvalidParameterError):
            observable_series(phi0, bad, unit_interval)


def test_interval_grid_shape(phi0):
    x = interval_grid(phi0, Interval(-2, 2))
    assert len(x) % 2 == 1 and len(x) >= 1025 and x[0] == -2 and x[-1] == 2


def test_near_node_of_complex_field_not_flagged():
    # the phase winds quickly through near-zeros of a complex superposition while |psi|^2 stays smooth
    rng = np.random.default_rng(0)
    for _ in range(4):
        p = random_superposition(rng, m_min=int(rng.integers(0, 3)))
        s = observable_series(p, np.geomspace(0.1, 1e4, 100), Interval(-2, 2))
        assert np.all(s.nonescape > 0)
