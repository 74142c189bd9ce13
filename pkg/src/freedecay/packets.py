"""Initial wave packets in momentum representation.

Units are fixed to hbar = 1 and 2M = 1, so the free phase is exp(-i t k**2) and
the reduced time of the figures is T = t / a0**2.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.integrate import quad

from .errors import GridTooNarrowError, InvalidParameterError, NumericalFailure
from .gaussian import GaussTerm, terms_overlap

M_CAP = 8
M_WARN = 4
ENDPOINT_THRESHOLD = 1e-12
DEFAULT_GRID_POINTS = 4096


@dataclass(frozen=True)
class UnitSystem:
    a0_ref: float = 1.0
    hbar: float = field(default=1.0, init=False)
    two_m: float = field(default=1.0, init=False)

    def __post_init__(self):
        if not self.a0_ref > 0:
            raise InvalidParameterError(f"a0_ref must be positive, got {self.a0_ref}")

    def reduced_time(self, t):
        return np.asarray(t) * self.hbar / (self.two_m * self.a0_ref**2)

    def physical_time(self, T):
        return np.asarray(T) * self.two_m * self.a0_ref**2 / self.hbar


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise InvalidParameterError("interval ends must be finite")
        if not self.a < self.b:
            raise InvalidParameterError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def length(self):
        return self.b - self.a


@dataclass(frozen=True)
class FamilyPacket:
    """psi_hat(k) = N k**m exp(-a0**2 (k - k0)**2 / 2 - i x0 k)."""

    m: int
    a0: float
    k0: float
    x0: float
    norm_const: float

    @property
    def a0_ref(self):
        return self.a0

    @property
    def units(self):
        return UnitSystem(self.a0)

    def terms(self):
        a2 = self.a0**2
        return [GaussTerm(self.norm_const, self.m, -a2 / 2, a2 * self.k0 - 1j * self.x0, -a2 * self.k0**2 / 2)]

    def psi_hat(self, k):
        k = np.asarray(k, dtype=float)
        return self.norm_const * k**self.m * np.exp(-self.a0**2 * (k - self.k0) ** 2 / 2 - 1j * self.x0 * k)

    def k_extent(self):
        return abs(self.k0) + 8.0 / self.a0

    def position_window(self):
        return self.x0, 12.0 * self.a0

    def describe(self):
        return f"family:m={self.m},a0={self.a0:g},k0={self.k0:g},x0={self.x0:g}"


@dataclass(frozen=True)
class Superposition:
    """Normalized linear combination of family members (still closed form)."""

    components: tuple
    weights: tuple

    @property
    def a0_ref(self):
        return self.components[0].a0

    @property
    def units(self):
        return UnitSystem(self.a0_ref)

    def terms(self):
        out = []
        for w, comp in zip(self.weights, self.components):
            for term in comp.terms():
                out.append(GaussTerm(w * term.coeff, term.power, term.quad, term.lin, term.const))
        return out

    def psi_hat(self, k):
        return sum(w * c.psi_hat(k) for w, c in zip(self.weights, self.components))

    def k_extent(self):
        return max(c.k_extent() for c in self.components)

    def position_window(self):
        lo = min(c.x0 - 12.0 * c.a0 for c in self.components)
        hi = max(c.x0 + 12.0 * c.a0 for c in self.components)
        return 0.5 * (lo + hi), 0.5 * (hi - lo)

    def describe(self):
        parts = [f"({complex(w):.6g})*{c.describe()}" for w, c in zip(self.weights, self.components)]
        return "superposition:" + "+".join(parts)


@dataclass(frozen=True, eq=False)
class GridPacket:
    """psi_hat sampled on the uniform grid k_i = k_min + i * spacing."""

    k_min: float
    spacing: float
    samples: np.ndarray
    a0_ref: float = 1.0
    label: str = "grid"

    @property
    def n_points(self):
        return len(self.samples)

    @property
    def k(self):
        return self.k_min + self.spacing * np.arange(self.n_points)

    @property
    def k_max(self):
        return self.k_min + self.spacing * (self.n_points - 1)

    @property
    def units(self):
        return UnitSystem(self.a0_ref)

    def k_extent(self):
        return max(abs(self.k_min), abs(self.k_max))

    def norm(self):
        return float(np.trapezoid(np.abs(self.samples) ** 2, dx=self.spacing))

    def mean_position(self):
        # <x> = integral conj(psi_hat) i d/dk psi_hat
        d = np.gradient(self.samples, self.spacing)
        return float(np.real(np.trapezoid(np.conj(self.samples) * 1j * d, dx=self.spacing)))

    def position_window(self):
        return self.mean_position(), 12.0 * self.a0_ref

    def describe(self):
        return self.label


WavePacket = Union[FamilyPacket, Superposition, GridPacket]


def is_analytic(packet) -> bool:
    return isinstance(packet, (FamilyPacket, Superposition))


def make_family_packet(m: int, a0: float, k0: float = 0.0, x0: float = 0.0) -> FamilyPacket:
    """Build a unit-norm member of the k**m Gaussian family.

    The normalization constant is obtained by quadrature of |psi_hat|**2, so any
    (a0, k0) combination is handled the same way.
    """
    if int(m) != m or m < 0:
        raise InvalidParameterError(f"m must be a nonnegative integer, got {m}")
    m = int(m)
    if m > M_CAP:
        raise InvalidParameterError(f"m = {m} exceeds the cap {M_CAP}")
    if m > M_WARN:
        warnings.warn(f"m = {m} > {M_WARN}: high derivative orders are numerically delicate", stacklevel=2)
    if not a0 > 0:
        raise InvalidParameterError(f"a0 must be positive, got {a0}")
    if not (np.isfinite(k0) and np.isfinite(x0)):
        raise InvalidParameterError("k0 and x0 must be finite")

    a2 = a0 * a0

    def density(k):
        return k ** (2 * m) * np.exp(-a2 * (k - k0) ** 2)

    # peak of k^2m exp(-a0^2 (k-k0)^2)
    peak = 0.5 * k0 + np.sign(k0 or 1.0) * np.sqrt(0.25 * k0 * k0 + m / a2)
    half = (12.0 + 2.0 * np.sqrt(m + 1.0)) / a0
    lo, hi = min(peak, 0.0) - half, max(peak, 0.0) + half
    val, _ = quad(density, lo, hi, points=sorted({0.0, float(peak), float(k0)}), epsabs=0.0, epsrel=1e-13, limit=200)
    return FamilyPacket(m, float(a0), float(k0), float(x0), float(1.0 / np.sqrt(val)))


def make_superposition(components: Sequence[FamilyPacket], weights: Sequence[complex]) -> Superposition:
    if len(components) == 0 or len(components) != len(weights):
        raise InvalidParameterError("need matching, nonempty components and weights")
    raw = Superposition(tuple(components), tuple(complex(w) for w in weights))
    norm2 = terms_overlap(raw.terms()).real
    if not norm2 > 1e-14:
        raise InvalidParameterError("superposition has (numerically) zero norm")
    scale = 1.0 / np.sqrt(norm2)
    return Superposition(raw.components, tuple(w * scale for w in raw.weights))


def default_half_width(packet) -> float:
    """|k0| + 8/a0, widened in 1/a0 steps until the tails are negligible."""
    width = packet.k_extent()
    step = 1.0 / packet.a0_ref
    for _ in range(64):
        edge = max(abs(packet.psi_hat(width)), abs(packet.psi_hat(-width)))
        if edge < 1e-2 * ENDPOINT_THRESHOLD:
            return float(width)
        width += step
    return float(width)


def sample_to_grid(packet, k_half_width: float | None = None, n_points: int | None = None) -> GridPacket:
    """Sample an analytic packet on k_i = (i - n//2) dk, dk = 2 K / n.

    The grid always contains k = 0, which the finite-difference derivatives rely on.
    """
    if not is_analytic(packet):
        raise InvalidParameterError("sample_to_grid needs an analytic packet")
    if k_half_width is None:
        k_half_width = default_half_width(packet)
    if n_points is None:
        n_points = DEFAULT_GRID_POINTS
    n_points = int(n_points)
    if n_points < 16:
        raise InvalidParameterError(f"n_points must be >= 16, got {n_points}")
    if not k_half_width > 0:
        raise InvalidParameterError("k_half_width must be positive")
    dk = 2.0 * k_half_width / n_points
    k = (np.arange(n_points) - n_points // 2) * dk
    samples = packet.psi_hat(k)
    edge = max(abs(samples[0]), abs(samples[-1]))
    if edge >= ENDPOINT_THRESHOLD:
        raise GridTooNarrowError(
            f"|psi_hat| = {edge:.3g} at the grid edge (|k| = {k_half_width:g}); widen k_half_width"
        )
    grid = GridPacket(float(k[0]), float(dk), samples, float(packet.a0_ref), packet.describe())
    drift = abs(grid.norm() - 1.0)
    if drift > 1e-8:
        raise NumericalFailure(f"sampled norm off by {drift:.3g}; increase n_points")
    return grid


def grid_packet_from_samples(k, samples, a0_ref: float = 1.0, label: str = "grid", normalize: bool = True) -> GridPacket:
    k = np.asarray(k, dtype=float)
    samples = np.asarray(samples, dtype=complex)
    if k.ndim != 1 or k.shape != samples.shape or len(k) < 16:
        raise InvalidParameterError("need matching 1-D k and sample arrays with at least 16 points")
    dk = np.diff(k)
    if np.any(dk <= 0) or np.ptp(dk) > 1e-9 * abs(dk.mean()):
        raise InvalidParameterError("momentum grid must be uniform and increasing")
    edge = max(abs(samples[0]), abs(samples[-1]))
    grid = GridPacket(float(k[0]), float(dk.mean()), samples, float(a0_ref), label)
    if normalize:
        grid = GridPacket(grid.k_min, grid.spacing, samples / np.sqrt(grid.norm()), grid.a0_ref, label)
        edge = max(abs(grid.samples[0]), abs(grid.samples[-1]))
    if edge >= ENDPOINT_THRESHOLD:
        raise GridTooNarrowError(f"|psi_hat| = {edge:.3g} at the grid edge")
    if abs(grid.norm() - 1.0) > 1e-8:
        raise NumericalFailure(f"grid packet norm {grid.norm():.12g} is not 1")
    return grid


def load_grid_csv(path, a0_ref: float = 1.0) -> GridPacket:
    """Read a CSV with header ``k,re,im`` (``#`` lines ignored)."""
    data = np.genfromtxt(path, delimiter=",", names=True, comments="#")
    missing = {"k", "re", "im"} - set(data.dtype.names or ())
    if missing:
        raise InvalidParameterError(f"grid CSV {path} lacks columns {sorted(missing)}")
    return grid_packet_from_samples(data["k"], data["re"] + 1j * data["im"], a0_ref, label=f"grid:{path}")


def detect_small_k_order(packet, tol: float = 1e-9, j_cap: int = M_CAP) -> int:
    """Smallest j with |psi_hat^(j)(0)| above tol times the table scale."""
    from .derivatives import detect_order

    return detect_order(packet, tol, j_cap)


def position_grid(packet, n_min: int = 1025) -> np.ndarray:
    """Uniform y-grid over the packet's position window [c - W, c + W]."""
    center, half = packet.position_window()
    dy_max = np.pi / (8.0 * packet.k_extent())
    n = max(n_min, int(np.ceil(2 * half / dy_max)) + 1)
    n += 1 - n % 2
    return np.linspace(center - half, center + half, n)


def position_space(packet, y, grid: GridPacket | None = None) -> np.ndarray:
    """psi(y) by trapezoid Fourier synthesis of the sampled psi_hat.

    Deliberately avoids the closed-form evolution so that consumers of this
    function stay independent of the propagator.
    """
    if grid is None:
        grid = packet if isinstance(packet, GridPacket) else sample_to_grid(packet)
    y = np.asarray(y, dtype=float)
    k = grid.k
    w = np.full(grid.n_points, grid.spacing)
    w[0] = w[-1] = 0.5 * grid.spacing
    amp = grid.samples * w / np.sqrt(2 * np.pi)
    flat = y.ravel()
    out = np.empty(flat.shape, dtype=complex)
    chunk = max(1, 2_000_000 // grid.n_points)
    for s in range(0, len(flat), chunk):
        out[s:s + chunk] = np.exp(1j * np.outer(flat[s:s + chunk], k)) @ amp
    return out.reshape(y.shape)
