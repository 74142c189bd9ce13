"""Free evolution psi(x, t) with hbar = 1, 2M = 1 (phase exp(-i t k**2)).

Two routes:

* ``evolve_family``: exact, for closed-form packets.  exp(-i t k^2) folds into
  the Gaussian exponent and the Fourier integral of k^m times a complex Gaussian
  is a Hermite-type moment.  Cheap at any t, so it serves as the oracle.
* ``evolve_grid``: trapezoid quadrature of the Fourier integral on the sampled
  psi_hat, guarded by a Nyquist rule on the phase k x - t k^2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, InvalidParameterError, NumericalFailure
from .gaussian import terms_fourier
from .packets import GridPacket, default_half_width, is_analytic, position_space

MIN_GRID_POINTS = 4096
NORM_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class EvolvedField:
    t: float
    T: float
    x_grid: np.ndarray
    values: np.ndarray
    norm: float

    @property
    def abs2(self):
        return np.abs(self.values) ** 2


def _trapezoid_norm(x, values):
    if len(x) < 2:
        return float("nan")
    return float(np.trapezoid(np.abs(values) ** 2, x))


def _check_time(t):
    if not (np.isfinite(t) and t >= 0):
        raise InvalidParameterError(f"time must be finite and >= 0, got {t}")


def evolve_family(packet, t: float, x_grid) -> EvolvedField:
    """Exact psi(x, t) for a closed-form packet (family member or superposition)."""
    if not is_analytic(packet):
        raise InvalidParameterError("evolve_family needs a closed-form packet")
    _check_time(t)
    x = np.asarray(x_grid, dtype=float)
    values = terms_fourier(packet.terms(), x, t)
    T = float(packet.units.reduced_time(t))
    return EvolvedField(float(t), T, x, values, _trapezoid_norm(np.atleast_1d(x), np.atleast_1d(values)))


def momentum_step_limit(t: float, x_max: float, k_max: float) -> float:
    """Largest dk keeping the phase k x - t k^2 to <= pi/4 per step."""
    return np.pi / (4.0 * (abs(x_max) + 2.0 * t * k_max))


def nyquist_points(k_half_width: float, t: float, x_max: float) -> int:
    """Raw sample count 2 K / dk_max demanded by the Nyquist rule."""
    return int(np.ceil(2.0 * k_half_width / momentum_step_limit(t, x_max, k_half_width)))


def required_grid(packet, t_max: float, x_max: float) -> int:
    """Smallest power of two, at least 4096, meeting the Nyquist rule up to t_max."""
    if t_max < 0 or x_max < 0:
        raise InvalidParameterError("t_max and x_max must be nonnegative")
    if isinstance(packet, GridPacket):
        width = packet.k_extent()
    else:
        width = default_half_width(packet)
    raw = max(MIN_GRID_POINTS, nyquist_points(width, t_max, x_max))
    return int(2 ** int(np.ceil(np.log2(raw))))


def norm_window(packet, t: float):
    """[c - W(t), c + W(t)] with W(t) = 12 a0 + 4 t k_max (ballistic spreading)."""
    center, _ = packet.position_window()
    half = 12.0 * packet.a0_ref + 4.0 * t * packet.k_extent()
    return center - half, center + half


def _covers_window(packet, t, x):
    lo, hi = norm_window(packet, t)
    return len(x) > 1 and x[0] <= lo and x[-1] >= hi


def evolve_grid(packet: GridPacket, t: float, x_grid) -> EvolvedField:
    """psi(x, t) by trapezoid quadrature of (1/sqrt(2 pi)) int exp(i k x - i t k^2) psi_hat dk."""
    if not isinstance(packet, GridPacket):
        raise InvalidParameterError("evolve_grid needs a GridPacket")
    _check_time(t)
    x = np.asarray(x_grid, dtype=float)
    flat = np.atleast_1d(x).ravel()
    x_max = float(np.abs(flat).max()) if flat.size else 0.0
    k_max = packet.k_extent()
    if packet.spacing > momentum_step_limit(t, x_max, k_max) * (1 + 1e-12):
        need = nyquist_points(k_max, t, x_max)
        raise AliasingError(
            f"momentum grid too coarse for t = {t:g}, |x| <= {x_max:g}: need >= {need} points "
            f"(have {packet.n_points})",
            required_points=need,
        )
    k = packet.k
    w = np.full(packet.n_points, packet.spacing)
    w[0] = w[-1] = 0.5 * packet.spacing
    amp = packet.samples * np.exp(-1j * t * k * k) * w / np.sqrt(2 * np.pi)
    out = np.empty(flat.shape, dtype=complex)
    chunk = max(1, 4_000_000 // packet.n_points)
    for s in range(0, len(flat), chunk):
        out[s:s + chunk] = np.exp(1j * np.outer(flat[s:s + chunk], k)) @ amp
    values = out.reshape(x.shape)
    norm = _trapezoid_norm(flat, out)
    if _covers_window(packet, t, flat) and abs(norm - 1.0) > NORM_TOL:
        raise NumericalFailure(f"norm drift {abs(norm - 1.0):.3g} at t = {t:g}")
    T = float(packet.units.reduced_time(t))
    return EvolvedField(float(t), T, x, values, norm)


def evolve(packet, t: float, x_grid) -> EvolvedField:
    if is_analytic(packet):
        return evolve_family(packet, t, x_grid)
    return evolve_grid(packet, t, x_grid)


def norm_grid(packet, t: float, n_min: int = 4097) -> np.ndarray:
    """x-grid over the norm window, fine enough for the smooth envelope |psi|^2."""
    lo, hi = norm_window(packet, t)
    T = float(packet.units.reduced_time(t))
    h = packet.a0_ref * np.sqrt(1.0 + 4.0 * T * T) / 64.0
    n = max(n_min, int(np.ceil((hi - lo) / h)) + 1)
    return np.linspace(lo, hi, n)


def field_norm(packet, t: float) -> float:
    """Full-line norm of the evolved field via the window-extended grid."""
    x = norm_grid(packet, t)
    return evolve(packet, t, x).norm


def evolve_kernel(packet, t: float, x_grid) -> np.ndarray:
    """Position-kernel form, (4 pi i t)^(-1/2) int exp(i (x-y)^2 / 4t) psi(y) dy.

    A short-time cross-check only (0 < t <= 1): the kernel does not decay, so the
    cost grows like 1/t.
    """
    if not 0 < t <= 1:
        raise InvalidParameterError("the kernel cross-check is limited to 0 < t <= 1")
    x = np.atleast_1d(np.asarray(x_grid, dtype=float))
    center, half = packet.position_window()
    reach = (np.abs(x).max() + abs(center) + half) / (2.0 * t)
    dy = min(2 * np.pi / (32.0 * reach), np.pi / (8.0 * packet.k_extent()))
    n = int(np.ceil(2 * half / dy)) + 1
    y = np.linspace(center - half, center + half, n)
    psi0 = position_space(packet, y)
    w = np.full(n, y[1] - y[0])
    w[0] = w[-1] = 0.5 * w[0]
    pref = 1.0 / np.sqrt(4j * np.pi * t)
    out = np.empty(x.shape, dtype=complex)
    for i, xi in enumerate(x):
        out[i] = pref * np.sum(np.exp(1j * (xi - y) ** 2 / (4.0 * t)) * psi0 * w)
    return out.reshape(np.shape(x_grid))
