"""The integral operators G_j and the quantities built from them.

    (G_j psi)(x) = -(1 / (2 j!)) * integral |x - y|**j psi(y) dy

Even indices drive the long-time expansion.  Each quantity has two routes: a
quadrature route working on psi(y) directly, and a closed form in terms of the
derivative coefficients psi_hat^(n)(0).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .derivatives import ZERO_THRESHOLD, DerivativeTable, m_bar
from .errors import InvalidParameterError, PreconditionError, WindowTooNarrowError
from .packets import position_grid, position_space

G_APPLY_CAP = 6
SQRT_2PI = np.sqrt(2 * np.pi)


@dataclass(frozen=True, eq=False)
class GInnerProducts:
    values: np.ndarray  # <psi, G_{2j} psi>, j = 0..j_max


@dataclass(frozen=True, eq=False)
class GFieldProfile:
    x_grid: np.ndarray
    values: np.ndarray
    m: int
    m_bar: int


def _position_samples(packet):
    y = position_grid(packet)
    psi = position_space(packet, y)
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge > 1e-10 * np.abs(psi).max():
        raise WindowTooNarrowError(f"position-space tail {edge:.3g} has not decayed on the window")
    w = np.full(len(y), y[1] - y[0])
    w[0] = w[-1] = 0.5 * w[0]
    return y, psi, w


def g_apply(j: int, packet, x_grid) -> np.ndarray:
    """(G_j psi)(x) by trapezoid quadrature over the packet's position window."""
    if j < 0 or int(j) != j:
        raise InvalidParameterError(f"j must be a nonnegative integer, got {j}")
    if j > G_APPLY_CAP:
        raise InvalidParameterError(f"g_apply is capped at j = {G_APPLY_CAP}; use the closed form")
    x = np.atleast_1d(np.asarray(x_grid, dtype=float))
    y, psi, w = _position_samples(packet)
    kernel = np.abs(x[:, None] - y[None, :]) ** j
    out = -(kernel @ (psi * w)) / (2.0 * factorial(j))
    return out.reshape(np.shape(x_grid))


def g_field_closed_form(table: DerivativeTable, j: int, x) -> np.ndarray:
    """(G_{2j} psi)(x) from the binomial sum over psi_hat^(n)(0), n = 0..2j."""
    if table.j_max < 2 * j:
        raise InvalidParameterError(f"table depth {table.j_max} < 2j = {2 * j}")
    x = np.asarray(x, dtype=float)
    acc = np.zeros(np.shape(x), dtype=complex)
    for n in range(2 * j + 1):
        acc = acc + comb(2 * j, n) * 1j**n * table.values[n] * (-x) ** (2 * j - n)
    return -SQRT_2PI / (2.0 * factorial(2 * j)) * acc


def g_inner_products(table: DerivativeTable, j_max: int) -> GInnerProducts:
    """<psi, G_{2j} psi> for j = 0..j_max from the derivative coefficients."""
    if j_max < 0 or table.j_max < 2 * j_max:
        raise InvalidParameterError(f"need table depth >= {2 * j_max}, have {table.j_max}")
    d = table.values
    vals = np.empty(j_max + 1, dtype=complex)
    for j in range(j_max + 1):
        s = sum(comb(2 * j, n) * np.conj(d[2 * j - n]) * d[n] for n in range(2 * j + 1))
        vals[j] = (-1) ** (j - 1) * np.pi / factorial(2 * j) * s
    return GInnerProducts(vals)


def g_inner_product_quadrature(packet, j: int) -> complex:
    """<psi, G_{2j} psi> as a double integral over position space."""
    if 2 * j > G_APPLY_CAP:
        raise InvalidParameterError(f"2j = {2 * j} exceeds the quadrature cap {G_APPLY_CAP}")
    y, psi, w = _position_samples(packet)
    kernel = np.abs(y[:, None] - y[None, :]) ** (2 * j)
    a = psi * w
    return complex(-(np.conj(a) @ kernel @ a) / (2.0 * factorial(2 * j)))


def check_small_momentum_condition(table: DerivativeTable, m: int):
    """Raise PreconditionError unless psi_hat^(j)(0) vanishes for all j < m."""
    if table.j_max < m:
        raise InvalidParameterError(f"table depth {table.j_max} < m = {m}")
    scale = np.abs(table.values).max()
    for j in range(m):
        if abs(table.values[j]) > ZERO_THRESHOLD * scale:
            raise PreconditionError(
                f"psi_hat^({j})(0) = {table.values[j]:.3g} is not zero, so psi_hat is not O(k^{m})"
            )


def leading_g_field(table: DerivativeTable, m: int, x_grid) -> GFieldProfile:
    """First non-vanishing (G_{2 m_bar} psi)(x): constant for even m, affine for odd m."""
    if m < 0:
        raise InvalidParameterError(f"m must be nonnegative, got {m}")
    need = m if m % 2 == 0 else m + 1
    if table.j_max < need:
        raise InvalidParameterError(f"table depth {table.j_max} < {need}")
    check_small_momentum_condition(table, m)
    x = np.asarray(x_grid, dtype=float)
    d = table.values
    if m % 2 == 0:
        vals = np.full(x.shape, -SQRT_2PI * 1j**m * d[m] / (2.0 * factorial(m)), dtype=complex)
    else:
        vals = -SQRT_2PI * 1j ** (m + 1) * (d[m + 1] + 1j * (m + 1) * x * d[m]) / (2.0 * factorial(m + 1))
    return GFieldProfile(x, vals, m, m_bar(m))
