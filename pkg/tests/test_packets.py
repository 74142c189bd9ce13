import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from freedecay.errors import GridTooNarrowError, InvalidParameterError
from freedecay.packets import (
    Interval,
    UnitSystem,
    detect_small_k_order,
    load_grid_csv,
    make_family_packet,
    sample_to_grid,
)

from conftest import N0, N1


def test_normalization_constants_match_closed_forms():
    assert make_family_packet(0, 1, 0, 0).norm_const == pytest.approx(N0, rel=1e-12)
    assert make_family_packet(1, 1, 0, 0).norm_const == pytest.approx(N1, rel=1e-12)
    assert N0 == pytest.approx(0.75113, abs=5e-6)
    assert N1 == pytest.approx(1.06225, abs=5e-6)


def test_family_formula(phi2):
    k = np.array([-1.0, 0.3, 2.0])
    p = make_family_packet(2, 1.3, 0.4, -0.8)
    expected = p.norm_const * k**2 * np.exp(-1.3**2 * (k - 0.4) ** 2 / 2 - 1j * -0.8 * k)
    np.testing.assert_allclose(p.psi_hat(k), expected, rtol=1e-15)


@pytest.mark.parametrize("a0", [-1.0, 0.0])
def test_nonpositive_width_rejected(a0):
    with pytest.raises(InvalidParameterError):
        make_family_packet(0, a0, 0, 0)


def test_order_cap_and_warning():
    with pytest.raises(InvalidParameterError):
        make_family_packet(9, 1, 0, 0)
    with pytest.warns(UserWarning):
        make_family_packet(5, 1, 0, 0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        make_family_packet(4, 1, 0, 0)


def test_unit_system():
    u = UnitSystem(2.0)
    assert u.hbar == 1 and u.two_m == 1
    assert u.reduced_time(8.0) == pytest.approx(2.0)
    assert u.physical_time(u.reduced_time(3.7)) == pytest.approx(3.7)
    with pytest.raises(InvalidParameterError):
        UnitSystem(0.0)


def test_interval_invariants():
    assert Interval(-2, 2).length == 4
    for a, b in [(1, 1), (2, -2), (0, np.inf)]:
        with pytest.raises(InvalidParameterError):
            Interval(a, b)


def test_sample_phi0_norm(phi0):
    g = sample_to_grid(phi0, 8, 4096)
    assert abs(g.norm() - 1) < 1e-8
    assert g.n_points == 4096
    assert g.k[g.n_points // 2] == 0.0


def test_sample_too_narrow(phi0):
    with pytest.raises(GridTooNarrowError):
        sample_to_grid(phi0, 1, 64)


def test_sample_phi2_endpoints(phi2):
    g = sample_to_grid(phi2, 10, 8192)
    bound = phi2.norm_const * 100 * np.exp(-50)  # |psi_hat(10)|, about 2e-22
    assert abs(g.samples[0]) == pytest.approx(bound, rel=1e-9)
    assert bound < 1e-19
    assert max(abs(g.samples[0]), abs(g.samples[-1])) < 1e-12


def test_default_grid_satisfies_endpoint_rule_for_high_m():
    g = sample_to_grid(make_family_packet(4, 1, 0, 0))
    assert max(abs(g.samples[0]), abs(g.samples[-1])) < 1e-12


def test_grid_convergence(phi1):
    a = sample_to_grid(phi1, 8, 2048).norm()
    b = sample_to_grid(phi1, 8, 4096).norm()
    assert abs(a - b) < 1e-10


@pytest.mark.parametrize("m", range(5))
@pytest.mark.parametrize("a0", [0.5, 1.0, 2.0])
def test_detected_order_equals_constructed(m, a0):
    g = sample_to_grid(make_family_packet(m, a0, 0.0, 0.4))
    assert abs(g.norm() - 1) < 1e-8
    assert detect_small_k_order(g) == m


def test_detect_examples(phi0, phi2):
    assert detect_small_k_order(sample_to_grid(phi2)) == 2
    assert detect_small_k_order(sample_to_grid(phi0)) == 0
    assert detect_small_k_order(sample_to_grid(make_family_packet(1, 1, 1.0, 0.0))) == 1


@given(
    m=st.integers(0, 4),
    a0=st.floats(0.5, 2.0),
    k0=st.floats(-1.5, 1.5),
    x0=st.floats(-3, 3),
)
def test_sampled_norm_is_one(m, a0, k0, x0):
    g = sample_to_grid(make_family_packet(m, a0, k0, x0))
    assert abs(g.norm() - 1) < 1e-8


def test_grid_csv_roundtrip(tmp_path, phi1):
    g = sample_to_grid(phi1)
    path = tmp_path / "p.csv"
    np.savetxt(path, np.column_stack([g.k, g.samples.real, g.samples.imag]),
               delimiter=",", header="k,re,im", comments="")
    back = load_grid_csv(path)
    np.testing.assert_allclose(back.samples, g.samples, atol=1e-15)
    assert back.spacing == pytest.approx(g.spacing)
    assert detect_small_k_order(back) == 1


def test_grid_csv_missing_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("k,re\n0,1\n")
    with pytest.raises(InvalidParameterError):
        load_grid_csv(path)
