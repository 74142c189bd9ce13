"""Power-law fits of the S/P tails and comparison with the leading asymptotes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotics import AsymptoticProfile, asymptotic_profile
from .errors import DomainError, InvalidParameterError
from .observables import ObservableSeries, observable_series
from .packets import Interval
from .propagator import field_norm

MIN_FIT_POINTS = 8


@dataclass(frozen=True)
class FitResult:
    exponent: float
    amplitude: float
    window: tuple
    rms_residual: float  # log10 units
    n_points: int


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    predicted_exponent_S: int
    predicted_exponent_P: int
    fitted_S: FitResult
    fitted_P: FitResult
    coefficient_ratios: tuple
    profile: AsymptoticProfile
    series: ObservableSeries
    max_norm_drift: float

    @property
    def deviations(self):
        return (
            abs(self.fitted_S.exponent - self.predicted_exponent_S),
            abs(self.fitted_P.exponent - self.predicted_exponent_P),
        )

    def summary(self) -> str:
        p = self.profile
        lines = [
            f"packet            {self.series.packet_descriptor}",
            f"interval          [{p.interval.a:g}, {p.interval.b:g}]",
            f"m, m_bar          {p.m}, {p.m_bar}",
            f"S exponent        fitted {self.fitted_S.exponent:+.4f}  predicted {self.predicted_exponent_S:+d}",
            f"P exponent        fitted {self.fitted_P.exponent:+.4f}  predicted {self.predicted_exponent_P:+d}",
            f"fit window        [{self.fitted_S.window[0]:g}, {self.fitted_S.window[1]:g}]"
            f"  ({self.fitted_S.n_points} points)",
            f"amplitude ratios  S {self.coefficient_ratios[0]:.5f}  P {self.coefficient_ratios[1]:.5f}",
            f"max norm drift    {self.max_norm_drift:.3g}",
        ]
        return "\n".join(lines)


def fit_power_law(times, values, window=None) -> FitResult:
    """Least-squares line through (log10 T, log10 value) restricted to the window."""
    T = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if window is None:
        window = (T.min(), T.max())
    lo, hi = window
    if not lo < hi:
        raise InvalidParameterError(f"fit window needs lo < hi, got {window}")
    sel = (T >= lo * (1 - 1e-12)) & (T <= hi * (1 + 1e-12))
    n = int(sel.sum())
    if n < MIN_FIT_POINTS:
        raise InvalidParameterError(f"only {n} points in fit window {window}; need {MIN_FIT_POINTS}")
    if np.any(T[sel] <= 0) or np.any(v[sel] <= 0):
        raise DomainError("power-law fit needs strictly positive times and values")
    lx, ly = np.log10(T[sel]), np.log10(v[sel])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return FitResult(float(slope), float(10**intercept), (float(lo), float(hi)), float(np.sqrt(np.mean(resid**2))), n)


def default_window(times):
    T_max = float(np.max(times))
    return (T_max / 10.0, T_max)


def compare(packet, interval: Interval, times, window=None, m: int | None = None) -> ComparisonReport:
    """Simulate S and P, fit the tails and set them against the predicted powers."""
    T = np.asarray(times, dtype=float)
    if T.max() < 100.0 or (T > 10.0).sum() < 2:
        raise InvalidParameterError("times must reach at least one decade above T = 10")
    series = observable_series(packet, T, interval)
    profile = asymptotic_profile(packet, interval, m=m)
    window = default_window(T) if window is None else window
    fs = fit_power_law(T, series.survival, window)
    fp = fit_power_law(T, series.nonescape, window)
    ratios = (
        fs.amplitude / profile.s_coefficient if profile.s_coefficient > 0 else float("nan"),
        fp.amplitude / profile.p_coefficient if profile.p_coefficient > 0 else float("nan"),
    )
    t = packet.units.physical_time(T)
    drift = max(abs(field_norm(packet, float(ti)) - 1.0) for ti in t)
    return ComparisonReport(profile.s_exponent, profile.p_exponent, fs, fp, ratios, profile, series, float(drift))
