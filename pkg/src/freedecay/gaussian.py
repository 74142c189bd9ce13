"""Closed-form algebra for polynomial-times-complex-Gaussian functions.

Every analytic packet in this package is a finite sum of terms

    c * k**p * exp(A k**2 + B k + C)

with complex A (Re A < 0), B, C.  Products, Fourier integrals, free evolution
and Taylor coefficients at k = 0 all stay inside this class, which is what makes
the exact evolution route cheap at very long times.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np


@dataclass(frozen=True)
class GaussTerm:
    coeff: complex
    power: int
    quad: complex   # A, must have negative real part
    lin: complex    # B
    const: complex  # C

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        return self.coeff * k**self.power * np.exp(self.quad * k * k + self.lin * k + self.const)

    def conj_times(self, other: "GaussTerm") -> "GaussTerm":
        """Return conj(self) * other as a single term."""
        return GaussTerm(
            np.conj(self.coeff) * other.coeff,
            self.power + other.power,
            np.conj(self.quad) + other.quad,
            np.conj(self.lin) + other.lin,
            np.conj(self.const) + other.const,
        )

    def taylor(self, n_max: int) -> np.ndarray:
        """Taylor coefficients a_n (n = 0..n_max) so that term(k) = sum a_n k**n."""
        g = np.zeros(n_max + 1, dtype=complex)
        if n_max < self.power:
            return g
        # (j+1) e_{j+1} = B e_j + 2A e_{j-1} for e(k) = exp(A k^2 + B k)
        e = np.zeros(n_max + 1 - self.power, dtype=complex)
        e[0] = 1.0
        for j in range(len(e) - 1):
            prev = e[j - 1] if j >= 1 else 0.0
            e[j + 1] = (self.lin * e[j] + 2.0 * self.quad * prev) / (j + 1)
        g[self.power:] = self.coeff * np.exp(self.const) * e
        return g


def gaussian_moment_integral(p: int, alpha, beta):
    """Integral over the real line of k**p * exp(-alpha k**2 + beta k).

    ``alpha`` and ``beta`` broadcast; Re(alpha) > 0 is required.  Uses the
    moments of a (complex) normal law with mean beta/(2 alpha) and variance
    1/(2 alpha); the square root is the principal branch, which is the
    analytic continuation from real alpha.
    """
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    if np.any(alpha.real <= 0):
        raise ValueError("gaussian_moment_integral needs Re(alpha) > 0")
    mu = beta / (2.0 * alpha)
    var = 1.0 / (2.0 * alpha)
    m_prev = np.ones(np.broadcast(mu, var).shape, dtype=complex)
    m_cur = mu * m_prev
    if p == 0:
        mom = m_prev
    else:
        for n in range(1, p):
            m_prev, m_cur = m_cur, mu * m_cur + n * var * m_prev
        mom = m_cur
    return np.sqrt(np.pi / alpha) * np.exp(beta * beta / (4.0 * alpha)) * mom


def term_fourier(term: GaussTerm, x, t=0.0):
    """(1/sqrt(2 pi)) * integral of exp(i k x - i t k**2) * term(k) dk."""
    x = np.asarray(x, dtype=float)
    alpha = -term.quad + 1j * t
    beta = term.lin + 1j * x
    return term.coeff * np.exp(term.const) * gaussian_moment_integral(term.power, alpha, beta) / np.sqrt(2 * np.pi)


def terms_fourier(terms, x, t=0.0):
    out = np.zeros(np.shape(x), dtype=complex)
    for term in terms:
        out = out + term_fourier(term, x, t)
    return out


def terms_overlap(terms, t=0.0):
    """integral of |sum terms|**2 * exp(-i t k**2) dk, expanded pairwise."""
    total = 0.0 + 0.0j
    for a in terms:
        for b in terms:
            prod = a.conj_times(b)
            total += prod.coeff * np.exp(prod.const) * gaussian_moment_integral(
                prod.power, -prod.quad + 1j * t, prod.lin
            )
    return complex(total)


def terms_derivatives(terms, j_max: int) -> np.ndarray:
    """Derivatives d^j/dk^j of the summed terms at k = 0, j = 0..j_max."""
    taylor = np.zeros(j_max + 1, dtype=complex)
    for term in terms:
        taylor += term.taylor(j_max)
    return taylor * np.array([factorial(j) for j in range(j_max + 1)], dtype=float)
