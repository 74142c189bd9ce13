from math import gamma

import numpy as np
import pytest
from hypothesis import given, strategies as st

from freedecay.asymptotics import (
    asymptotic_profile,
    leading_field,
    leading_field_coefficient,
    leading_nonescape,
    leading_survival,
    series_amplitude,
    series_field,
    series_survival,
)
from freedecay.errors import DomainError, InvalidParameterError, PreconditionError
from freedecay.observables import nonescape_probability, survival, survival_amplitude
from freedecay.packets import Interval, make_family_packet
from freedecay.propagator import evolve_family

from conftest import N2

I = Interval(-2.0, 2.0)


def test_leading_survival_examples(phi0, phi1, phi2):
    assert asymptotic_profile(phi0, I).s_coefficient == pytest.approx(1.0, rel=1e-12)
    assert leading_survival(asymptotic_profile(phi0, I), 7.0) == pytest.approx(1 / 7.0, rel=1e-12)
    assert asymptotic_profile(phi1, I).s_coefficient == pytest.approx(1.0, rel=1e-12)
    assert asymptotic_profile(phi2, I).s_exponent == -5


def test_leading_nonescape_examples(phi0, phi1, phi2):
    p0 = asymptotic_profile(phi0, I)
    assert p0.p_coefficient == pytest.approx(2 / np.sqrt(np.pi), rel=1e-12)
    assert leading_nonescape(p0, 10.0) == pytest.approx(0.112838, rel=1e-5)
    assert asymptotic_profile(phi2, I).p_exponent == -3
    assert asymptotic_profile(phi1, I).p_exponent == asymptotic_profile(phi2, I).p_exponent
    assert asymptotic_profile(phi1, I).p_coefficient == pytest.approx(4 / (3 * np.sqrt(np.pi)), rel=1e-12)
    assert asymptotic_profile(phi2, I).p_coefficient == pytest.approx(N2**2 / 2, rel=1e-12)


def test_zero_time_is_domain_error(phi0):
    p = asymptotic_profile(phi0, I)
    for fn in (leading_survival, leading_nonescape):
        with pytest.raises(DomainError):
            fn(p, 0.0)
    with pytest.raises(DomainError):
        leading_field(p, 0.0, 0.0)


def test_wrong_order_rejected(phi0):
    with pytest.raises(PreconditionError):
        asymptotic_profile(phi0, I, m=1)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_exponent_consistency(m):
    p = asymptotic_profile(make_family_packet(m, 1.0, 0.0, 0.0), I)
    for T in (3.0, 50.0):
        assert np.log10(leading_survival(p, 10 * T) / leading_survival(p, T)) == pytest.approx(-(2 * m + 1), abs=1e-12)
        assert np.log10(leading_nonescape(p, 10 * T) / leading_nonescape(p, T)) == pytest.approx(
            -(2 * p.m_bar + 1), abs=1e-12
        )


@given(m=st.integers(0, 4), a0=st.floats(0.5, 2.0))
def test_s_coefficient_formula(m, a0):
    pk = make_family_packet(m, a0, 0.0, 0.0)
    p = asymptotic_profile(pk, I)
    d = abs(p.deriv_table[m])
    expected = gamma(m + 0.5) ** 2 * d**4 / gamma(m + 1) ** 4 / a0 ** (2 * (2 * m + 1))
    assert p.s_coefficient == pytest.approx(expected, rel=1e-12)
    assert p.s_coefficient > 0 and p.p_coefficient > 0


@pytest.mark.parametrize("m", [0, 1, 2])
def test_convergence_to_truth(m):
    pk = make_family_packet(m, 1.0, 0.0, 0.0)
    p = asymptotic_profile(pk, I)
    T = 1000.0
    assert abs(survival(pk, T) * T ** (2 * m + 1) / p.s_coefficient - 1) < 0.02
    assert abs(nonescape_probability(pk, T, I) * T ** (2 * p.m_bar + 1) / p.p_coefficient - 1) < 0.03


@pytest.mark.parametrize("a0", [0.6, 1.7])
def test_reduced_time_scaling(a0):
    pk = make_family_packet(1, a0, 0.0, 0.0)
    p = asymptotic_profile(pk, I)
    T = 2000.0
    t = T * a0**2
    assert survival(pk, t) / leading_survival(p, t) == pytest.approx(1, rel=0.02)


def test_leading_field_shapes(phi0, phi1):
    x = np.linspace(-3, 3, 13)
    f0 = np.abs(leading_field(asymptotic_profile(phi0, I), x, 50.0))
    assert np.ptp(f0) < 1e-15
    f1 = leading_field_coefficient(asymptotic_profile(phi1, I), x)
    np.testing.assert_allclose(f1, f1[-1] * np.abs(x) / 3, atol=1e-14)


def test_leading_field_matches_evolution(phi0):
    p = asymptotic_profile(phi0, I)
    exact = abs(evolve_family(phi0, 1000.0, np.array([0.0])).values[0])
    assert abs(leading_field(p, 0.0, 1000.0)) == pytest.approx(exact, rel=0.01)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_leading_field_phase(m):
    pk = make_family_packet(m, 1.0, 0.0, 0.3)
    p = asymptotic_profile(pk, I)
    x = np.array([1.1])
    exact = evolve_family(pk, 5000.0, x).values[0]
    lead = leading_field(p, x, 5000.0)[0]
    assert abs(exact - lead) < 0.02 * abs(lead)


@given(x0=st.floats(-2, 2), m=st.sampled_from([1, 3]))
def test_odd_leading_field_single_zero(x0, m):
    p = asymptotic_profile(make_family_packet(m, 1.0, 0.0, x0), I)
    assert p.xi0 == pytest.approx(x0, abs=1e-9)
    assert abs(leading_field(p, p.xi0, 10.0)) < 1e-12 * max(1.0, abs(leading_field(p, p.xi0 + 1, 10.0)))
    x = np.linspace(-4, 4, 41)
    x = x[np.abs(x - x0) > 1e-3]
    assert np.all(np.abs(leading_field(p, x, 10.0)) > 0)


def test_xi0_none_for_moving_packet():
    assert asymptotic_profile(make_family_packet(1, 1.0, 0.3, 0.0), I).xi0 is None


def test_series_examples(phi0, phi1):
    p = asymptotic_profile(phi0, I)
    for T in (5.0, 100.0):
        assert series_survival(phi0, T, 1) == pytest.approx(leading_survival(p, T), rel=1e-12)
    assert series_amplitude(phi1, 10.0, 1) == 0
    a2 = series_amplitude(phi1, 10.0, 2)
    assert abs(a2) ** 2 == pytest.approx(leading_survival(asymptotic_profile(phi1, I), 10.0), rel=1e-12)


def test_series_improves_amplitude_and_eventually_survival(phi0):
    T = 100.0
    exact_amp = survival_amplitude(phi0, T)
    errs = [abs(series_amplitude(phi0, T, j) - exact_amp) for j in (1, 2, 3, 4)]
    assert errs[0] > errs[1] > errs[2] > errs[3]
    exact = (1 + T * T) ** -0.5
    s_err = [abs(series_survival(phi0, T, j) - exact) for j in (1, 2, 3)]
    assert s_err[2] < 1e-3 * s_err[0]


def test_series_field_matches_leading(phi2):
    p = asymptotic_profile(phi2, I)
    x = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(series_field(phi2, x, 30.0, 2), leading_field(p, x, 30.0), rtol=1e-12)
    exact = evolve_family(phi2, 200.0, x).values
    e2 = np.abs(series_field(phi2, x, 200.0, 2) - exact).max()
    e3 = np.abs(series_field(phi2, x, 200.0, 3) - exact).max()
    assert e3 < e2


def test_series_cap(phi0):
    with pytest.raises(InvalidParameterError):
        series_survival(phi0, 10.0, 5)
    with pytest.raises(InvalidParameterError):
        series_field(phi0, 0.0, 10.0, 0)
