"""Derivative coefficients psi_hat^(j)(0), the reduced order and the special position."""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import (
    DegenerateInputError,
    InvalidParameterError,
    NotApplicableError,
    NumericalFailure,
    OrderUndetectableError,
    WindowTooNarrowError,
)
from .gaussian import terms_derivatives
from .packets import GridPacket, M_CAP, is_analytic, position_grid, position_space, sample_to_grid

ZERO_THRESHOLD = 1e-9
XI0_IMAG_TOL = 1e-9
METHODS = ("analytic", "finite-difference", "moment-integral")


@dataclass(frozen=True, eq=False)
class DerivativeTable:
    values: np.ndarray
    j_max: int
    method: str

    def __getitem__(self, j):
        return self.values[j]


def first_nonzero(values, tol: float = ZERO_THRESHOLD):
    """Index of the first entry above tol * max|values|, or None."""
    mags = np.abs(np.asarray(values))
    scale = mags.max() if mags.size else 0.0
    if scale == 0.0:
        return None
    hits = np.nonzero(mags > tol * scale)[0]
    return int(hits[0]) if hits.size else None


def m_bar(m: int) -> int:
    """Reduced order: m/2 for even m, (m+1)/2 for odd m."""
    if m < 0:
        raise InvalidParameterError(f"m must be nonnegative, got {m}")
    return (m + 1) // 2


def fd_weights(z: float, nodes, order: int) -> np.ndarray:
    """Fornberg weights; row d holds the weights of the d-th derivative at z."""
    x = np.asarray(nodes, dtype=float)
    n = len(x)
    c = np.zeros((order + 1, n))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - z
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def _fd_table(grid: GridPacket, j_max: int) -> np.ndarray:
    dk = grid.spacing
    pos = -grid.k_min / dk
    i0 = int(round(pos))
    centered = abs(pos - i0) < 1e-9
    stride = max(4, ceil(1.0 / (64.0 * grid.a0_ref * dk)))
    stride += stride % 2
    h = stride * dk
    if h ** max(j_max, 1) < 1e-290:
        raise NumericalFailure("finite-difference step underflows")
    f = grid.samples
    out = np.zeros(j_max + 1, dtype=complex)

    def apply(j, step, p):
        idx = i0 + step * np.arange(-p, p + 1)
        if idx[0] < 0 or idx[-1] >= grid.n_points:
            raise NumericalFailure(f"derivative stencil for order {j} runs off the momentum grid")
        w = fd_weights(0.0, grid.k_min + idx * dk, j)[j]
        return w @ f[idx]

    for j in range(j_max + 1):
        p = (j + 1) // 2 + 1
        if centered:
            if j == 0:
                out[j] = f[i0]
                continue
            coarse = apply(j, stride, p)
            fine = apply(j, stride // 2, p)
            out[j] = (16.0 * fine - coarse) / 15.0
        else:
            out[j] = apply(j, stride, p + 1)
    return out


def _moment_table(packet, j_max: int) -> np.ndarray:
    y = position_grid(packet)
    psi = position_space(packet, y)
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge > 1e-10 * np.abs(psi).max():
        raise WindowTooNarrowError(f"position-space tail {edge:.3g} not decayed on the window")
    dy = y[1] - y[0]
    out = np.empty(j_max + 1, dtype=complex)
    for j in range(j_max + 1):
        out[j] = (-1j) ** j / np.sqrt(2 * np.pi) * np.trapezoid(y**j * psi, dx=dy)
    return out


def derivative_table(packet, j_max: int, method: str | None = None) -> DerivativeTable:
    """Table of psi_hat^(j)(0) for j = 0..j_max.

    Analytic packets default to exact Taylor coefficients; grid packets to
    Richardson-extrapolated central differences.  Either may request the other
    routes explicitly (an analytic packet is sampled first for finite differences).
    """
    if not 0 <= j_max <= M_CAP:
        raise InvalidParameterError(f"j_max must lie in [0, {M_CAP}], got {j_max}")
    if method is None:
        method = "analytic" if is_analytic(packet) else "finite-difference"
    if method not in METHODS:
        raise InvalidParameterError(f"unknown method {method!r}")
    if method == "analytic":
        if not is_analytic(packet):
            raise InvalidParameterError("analytic derivatives need a closed-form packet")
        values = terms_derivatives(packet.terms(), j_max)
    elif method == "finite-difference":
        grid = packet if isinstance(packet, GridPacket) else sample_to_grid(packet)
        values = _fd_table(grid, j_max)
    else:
        values = _moment_table(packet, j_max)
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("non-finite derivative coefficient")
    return DerivativeTable(values, j_max, method)


def detect_order(packet, tol: float = ZERO_THRESHOLD, j_cap: int = M_CAP) -> int:
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    table = derivative_table(packet, j_cap)
    j = first_nonzero(table.values, tol)
    if j is None:
        raise OrderUndetectableError(f"all derivatives up to order {j_cap} are below tolerance")
    return j


def special_position(table: DerivativeTable, m: int):
    """Real root of the leading odd-m profile, or None when that root is complex."""
    if m % 2 == 0:
        raise NotApplicableError(f"the special position only exists for odd m (got m = {m})")
    if table.j_max < m + 1:
        raise InvalidParameterError(f"table depth {table.j_max} < m + 1 = {m + 1}")
    denom = (m + 1) * table.values[m]
    if abs(table.values[m]) <= ZERO_THRESHOLD * np.abs(table.values).max():
        raise DegenerateInputError(f"psi_hat^({m})(0) vanishes")
    xi = 1j * table.values[m + 1] / denom
    if abs(xi.imag) < XI0_IMAG_TOL:
        return float(xi.real)
    return None


def special_position_complex(table: DerivativeTable, m: int) -> complex:
    if m % 2 == 0:
        raise NotApplicableError(f"the special position only exists for odd m (got m = {m})")
    return complex(1j * table.values[m + 1] / ((m + 1) * table.values[m]))
