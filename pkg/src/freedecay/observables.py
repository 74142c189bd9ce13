"""Survival probability S(t) and nonescape probability P(t)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import AliasingError, InvalidParameterError, NumericalFailure
from .gaussian import terms_overlap
from .packets import Interval, is_analytic
from .propagator import EvolvedField, evolve, momentum_step_limit, nyquist_points

REFINE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    times: np.ndarray  # reduced times T
    survival: np.ndarray
    nonescape: np.ndarray
    interval: Interval
    packet_descriptor: str


def survival_amplitude(packet, t: float) -> complex:
    """<psi, exp(-i t H0) psi> = integral |psi_hat(k)|^2 exp(-i t k^2) dk."""
    if t < 0:
        raise InvalidParameterError(f"time must be >= 0, got {t}")
    if is_analytic(packet):
        return terms_overlap(packet.terms(), t)
    k_max = packet.k_extent()
    if packet.spacing > momentum_step_limit(t, 0.0, k_max) * (1 + 1e-12):
        need = nyquist_points(k_max, t, 0.0)
        raise AliasingError(f"momentum grid too coarse for S at t = {t:g}: need >= {need} points", need)
    k = packet.k
    return complex(np.trapezoid(np.abs(packet.samples) ** 2 * np.exp(-1j * t * k * k), dx=packet.spacing))


def survival(packet, t: float) -> float:
    return float(abs(survival_amplitude(packet, t)) ** 2)


def survival_position(packet, t: float, x_grid) -> float:
    """S(t) via the position-space overlap; a cross-check of the momentum route."""
    psi0 = evolve(packet, 0.0, x_grid).values
    psit = evolve(packet, t, x_grid).values
    return float(abs(np.trapezoid(np.conj(psi0) * psit, x_grid)) ** 2)


def _check_resolution(x, psi):
    # a wave A exp(ikx) moves by a chord of 2 A sin(k dx / 2) per step; near-nodes
    # wind in phase quickly but at small amplitude, so scale by the peak
    peak = np.abs(psi).max()
    if peak == 0:
        return
    chord = np.abs(np.diff(psi)).max() / peak
    if chord > 2 * np.sin(np.pi / 16):
        raise NumericalFailure("field under-resolved on [a, b]: fewer than 16 points per oscillation")


def nonescape(field: EvolvedField, interval: Interval) -> float:
    """integral over [a, b] of |psi(x, t)|^2 from the field samples.

    Trapezoid when a and b are grid nodes (with one Richardson step against the
    every-other-node subgrid if the two disagree by more than 1e-9); otherwise
    the integral of a cubic spline through |psi|^2.
    """
    x = np.atleast_1d(field.x_grid)
    if len(x) < 4:
        raise InvalidParameterError("need at least 4 field samples")
    h = x[1] - x[0]
    if interval.a < x[0] - 1e-12 * abs(h) or interval.b > x[-1] + 1e-12 * abs(h):
        raise InvalidParameterError(
            f"interval [{interval.a:g}, {interval.b:g}] lies outside the field grid [{x[0]:g}, {x[-1]:g}]"
        )
    tol = 1e-9 * abs(h)
    ia = np.nonzero(np.abs(x - interval.a) <= tol)[0]
    ib = np.nonzero(np.abs(x - interval.b) <= tol)[0]
    psi = np.atleast_1d(field.values)
    dens = np.abs(psi) ** 2
    if ia.size and ib.size:
        sl = slice(ia[0], ib[0] + 1)
        xs, ds = x[sl], dens[sl]
        _check_resolution(xs, psi[sl])
        fine = np.trapezoid(ds, xs)
        if len(xs) % 2 == 1 and len(xs) >= 5:
            coarse = np.trapezoid(ds[::2], xs[::2])
            if abs(fine - coarse) > REFINE_TOL:
                fine = (4.0 * fine - coarse) / 3.0
        return float(fine)
    inside = (x >= interval.a) & (x <= interval.b)
    if inside.sum() >= 2:
        _check_resolution(x[inside], psi[inside])
    return float(CubicSpline(x, dens).integrate(interval.a, interval.b))


def interval_grid(packet, interval: Interval, n_min: int = 1025) -> np.ndarray:
    """Odd-count grid with nodes at a and b, >= 16 points per oscillation at k_max."""
    osc = interval.length * packet.k_extent() / (2 * np.pi)
    n = max(n_min, int(np.ceil(16 * osc)) + 1)
    n += 1 - n % 2
    return np.linspace(interval.a, interval.b, n)


def nonescape_probability(packet, t: float, interval: Interval, x_grid=None) -> float:
    x = interval_grid(packet, interval) if x_grid is None else np.asarray(x_grid, dtype=float)
    return nonescape(evolve(packet, t, x), interval)


def observable_series(packet, times, interval: Interval) -> ObservableSeries:
    """S and P at the given reduced times T (t = T a0^2)."""
    T = np.asarray(times, dtype=float)
    if T.ndim != 1 or T.size == 0:
        raise InvalidParameterError("times must be a nonempty 1-D sequence")
    if np.any(T < 0) or np.any(np.diff(T) <= 0):
        raise InvalidParameterError("times must be nonnegative and strictly increasing")
    t = packet.units.physical_time(T)
    x = interval_grid(packet, interval)
    S = np.empty(T.size)
    P = np.empty(T.size)
    for i, ti in enumerate(t):
        S[i] = survival(packet, float(ti))
        P[i] = nonescape(evolve(packet, float(ti), x), interval)
    return ObservableSeries(T, S, P, interval, packet.describe())
