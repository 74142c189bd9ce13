"""Long-time predictions: leading S(t), P(t), psi(x, t) and truncated expansions.

With hbar = 1 and 2M = 1 the factor hbar t / 2M is just t.  Coefficients in
``AsymptoticProfile`` are quoted against the reduced time T = t / a0^2, so for
example S(T) ~ s_coefficient * T^-(2m+1).

The expansions are formal (asymptotic, not convergent); the series helpers only
truncate and are capped at four terms.  Adding terms pays off only beyond a
crossover time, and for S the j-th correction in |sum|^2 mixes with the
(j+1)-th term, so S itself typically improves only once three terms are kept.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial, gamma

import numpy as np
from scipy.integrate import simpson

from .derivatives import DerivativeTable, derivative_table, detect_order, m_bar, special_position
from .errors import DomainError, InvalidParameterError
from .goperators import (
    check_small_momentum_condition,
    g_field_closed_form,
    g_inner_products,
    leading_g_field,
)
from .packets import M_CAP, Interval

SERIES_CAP = 4


@dataclass(frozen=True, eq=False)
class AsymptoticProfile:
    m: int
    m_bar: int
    deriv_table: DerivativeTable
    s_coefficient: float
    p_coefficient: float
    xi0: float | None
    interval: Interval
    a0_ref: float = 1.0

    @property
    def s_exponent(self):
        return -(2 * self.m + 1)

    @property
    def p_exponent(self):
        return -(2 * self.m_bar + 1)


def _leading_amplitude(j: int, t: float) -> complex:
    """(-1)^(j-1) Gamma(j + 1/2) / (pi (i t)^(j + 1/2)), principal branch of i^(j+1/2)."""
    phase = np.exp(1j * np.pi * (j + 0.5) / 2)
    return (-1) ** (j - 1) * gamma(j + 0.5) / (np.pi * phase * t ** (j + 0.5))


def asymptotic_profile(packet, interval: Interval, m: int | None = None, n_x: int = 2001) -> AsymptoticProfile:
    """Collect m, m_bar, derivative coefficients and the leading S/P coefficients.

    If ``m`` is given it is validated against the small-momentum condition
    (PreconditionError otherwise); if omitted it is detected.
    """
    if m is None:
        m = detect_order(packet)
    if not 0 <= m <= M_CAP:
        raise InvalidParameterError(f"m must lie in [0, {M_CAP}], got {m}")
    depth = min(M_CAP, max(m + 1, 6))
    table = derivative_table(packet, depth)
    check_small_momentum_condition(table, m)
    mb = m_bar(m)
    a0 = packet.a0_ref
    d_m = abs(table.values[m])
    s_coef = gamma(m + 0.5) ** 2 * d_m**4 / (factorial(m) ** 4 * a0 ** (2 * (2 * m + 1)))
    x = np.linspace(interval.a, interval.b, n_x)
    g = leading_g_field(table, m, x).values
    p_int = simpson(np.abs(g) ** 2, x=x)
    p_coef = gamma(mb + 0.5) ** 2 / np.pi**2 * p_int / a0 ** (2 * (2 * mb + 1))
    xi0 = special_position(table, m) if m % 2 == 1 and m + 1 <= depth else None
    return AsymptoticProfile(m, mb, table, float(s_coef), float(p_coef), xi0, interval, float(a0))


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("asymptotes diverge at t <= 0")
    return t


def leading_survival(profile: AsymptoticProfile, t):
    t = _check_t(t)
    T = t / profile.a0_ref**2
    return profile.s_coefficient * T ** profile.s_exponent


def leading_nonescape(profile: AsymptoticProfile, t):
    t = _check_t(t)
    T = t / profile.a0_ref**2
    return profile.p_coefficient * T ** profile.p_exponent


def leading_field(profile: AsymptoticProfile, x, t):
    """Leading psi(x, t), decaying like t^-(m_bar + 1/2) at fixed x."""
    t = float(_check_t(t))
    g = leading_g_field(profile.deriv_table, profile.m, np.asarray(x, dtype=float)).values
    return _leading_amplitude(profile.m_bar, t) * g


def leading_field_coefficient(profile: AsymptoticProfile, x):
    """|leading psi(x, t)| * t^(m_bar + 1/2), independent of t."""
    return np.abs(leading_field(profile, x, 1.0))


def _series_table(packet, j_terms):
    if not 1 <= j_terms <= SERIES_CAP:
        raise InvalidParameterError(f"j_terms must lie in [1, {SERIES_CAP}], got {j_terms}")
    return derivative_table(packet, 2 * (j_terms - 1))


def series_amplitude(packet, t: float, j_terms: int) -> complex:
    """Partial sum of the long-time expansion of <psi, exp(-i t H0) psi>."""
    table = _series_table(packet, j_terms)
    t = float(_check_t(t))
    inner = g_inner_products(table, j_terms - 1).values
    return complex(sum(_leading_amplitude(j, t) * inner[j] for j in range(j_terms)))


def series_survival(packet, t: float, j_terms: int) -> float:
    return float(abs(series_amplitude(packet, t, j_terms)) ** 2)


def series_field(packet, x, t: float, j_terms: int):
    """Partial sum of the long-time expansion of psi(x, t)."""
    table = _series_table(packet, j_terms)
    t = float(_check_t(t))
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for j in range(j_terms):
        out = out + _leading_amplitude(j, t) * g_field_closed_form(table, j, x)
    return out
