"""Coefficients and right-hand sides of the rescaled rotation Camassa-Holm equation.

The evolved equation is

    u_t + u u_x = -d/dx (1 - d^2/dx^2)^{-1} (u_x^2/2 + c1 u^2 + c2 u^3 + c3 u^4).

Every pointwise product is dealiased before it is used further.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spectral import Field, TorusGrid, derivative_symbol, helmholtz_symbol

DEFAULT_DEALIAS = 2.0 / 3.0


class CoefficientError(ValueError):
    """Raised when the coefficients cannot be formed for a given rotation speed."""


class NonFiniteFieldError(FloatingPointError):
    """Raised when a NaN or Inf reaches a model evaluation."""


@dataclass(frozen=True)
class ModelCoefficients:
    omega: float
    c: float
    alpha: float
    beta0: float
    beta: float
    omega1: float
    omega2: float
    gamma: float
    c0: float
    c1: float
    c2: float
    c3: float
    gamma_residual: float
    real_root_count: int = 1
    warnings: tuple = field(default=())

    def as_dict(self) -> dict:
        return {
            "omega": self.omega, "c": self.c, "alpha": self.alpha, "beta0": self.beta0,
            "beta": self.beta, "omega1": self.omega1, "omega2": self.omega2,
            "gamma": self.gamma, "c0": self.c0, "c1": self.c1, "c2": self.c2,
            "c3": self.c3, "gamma_residual": self.gamma_residual,
            "real_root_count": self.real_root_count, "warnings": list(self.warnings),
        }


def _gamma_polynomial(c, alpha, beta0, beta, omega1, omega2):
    """Coefficients (highest degree first) of the cubic defining gamma."""
    return (-omega2 / alpha**3, omega1 / alpha**2, -2.0, c - beta0 / beta)


def _newton(poly, x, tol=1e-14, max_iter=50):
    a3, a2, a1, a0 = poly
    for _ in range(max_iter):
        f = ((a3 * x + a2) * x + a1) * x + a0
        if abs(f) <= tol:
            break
        df = (3.0 * a3 * x + 2.0 * a2) * x + a1
        if df == 0.0:
            break
        step = f / df
        x -= step
        if abs(step) <= 1e-17 * max(1.0, abs(x)):
            break
    return x


def solve_gamma(poly):
    """Return (gamma, number of real roots) for the cubic ``poly``."""
    a3, a2, a1, a0 = poly
    if a3 == 0.0 and a2 == 0.0:
        return -a0 / a1, 1
    if a3 == 0.0:
        disc = a1 * a1 - 4.0 * a2 * a0
        if disc < 0.0:
            raise CoefficientError(f"quadratic for gamma has no real root (discriminant {disc:.3e})")
        sq = math.sqrt(disc)
        # cancellation-free pair of roots
        q = -0.5 * (a1 + math.copysign(sq, a1))
        roots = [q / a2, a0 / q] if q != 0.0 else [0.0]
        count = 1 if disc == 0.0 else 2
    else:
        r = np.roots([a3, a2, a1, a0])
        scale = max(1.0, float(np.max(np.abs(r))))
        roots = [float(z.real) for z in r if abs(z.imag) <= 1e-10 * scale]
        if not roots:
            raise CoefficientError("cubic for gamma returned no real root")
        count = len(roots)
    gamma = min(roots, key=abs)
    return _newton((a3, a2, a1, a0), gamma), count


def compute_coefficients(omega: float) -> ModelCoefficients:
    omega = float(omega)
    if not math.isfinite(omega) or omega < 0.0:
        raise CoefficientError(f"rotation speed must be finite and >= 0, got {omega}")
    c = math.sqrt(1.0 + omega * omega) - omega
    c2_ = c * c
    alpha = c2_ / (1.0 + c2_)
    beta0 = c * (c2_ * c2_ + 6.0 * c2_ - 1.0) / (6.0 * (c2_ + 1.0) ** 2)
    beta = (3.0 * c2_ * c2_ + 8.0 * c2_ - 1.0) / (6.0 * (c2_ + 1.0) ** 2)
    if beta == 0.0:
        raise CoefficientError(f"beta vanishes at omega={omega}; beta0/beta is undefined")
    omega1 = -3.0 * c * (c2_ - 1.0) * (c2_ - 2.0) / (2.0 * (c2_ + 1.0) ** 3)
    omega2 = (c2_ - 1.0) ** 2 * (c2_ - 2.0) * (8.0 * c2_ - 1.0) / (2.0 * (c2_ + 1.0) ** 5)

    poly = _gamma_polynomial(c, alpha, beta0, beta, omega1, omega2)
    gamma, count = solve_gamma(poly)
    a3, a2, a1, a0 = poly
    residual = abs(((a3 * gamma + a2) * gamma + a1) * gamma + a0)
    warnings = ()
    if count > 1:
        warnings = (f"gamma polynomial has {count} real roots; picked the smallest in magnitude",)

    c1 = 1.0 + 3.0 * gamma**2 * omega2 / (2.0 * alpha**3) - omega1 * gamma / alpha**2
    c2 = omega1 / (3.0 * alpha**2) - omega2 * gamma / alpha**3
    c3 = omega2 / (4.0 * alpha**3)
    # "+ 0.0" turns the signed zeros produced at omega = 0 into +0.0
    omega1, omega2, c2, c3 = omega1 + 0.0, omega2 + 0.0, c2 + 0.0, c3 + 0.0
    return ModelCoefficients(
        omega=omega, c=c, alpha=alpha, beta0=beta0, beta=beta, omega1=omega1,
        omega2=omega2, gamma=gamma, c0=beta0 / beta - gamma, c1=c1, c2=c2, c3=c3,
        gamma_residual=residual, real_root_count=count, warnings=warnings,
    )


class RCHOperator:
    """Spectral evaluation of the model terms for one grid and coefficient set.

    All methods take and return rfft spectra; the public functions below wrap
    them for :class:`Field` arguments.
    """

    def __init__(self, grid: TorusGrid, coeffs: ModelCoefficients,
                 dealias_fraction: float = DEFAULT_DEALIAS):
        self.grid = grid
        self.coeffs = coeffs
        self.dealias_fraction = dealias_fraction
        self.mask = grid.retained_mask(dealias_fraction)
        self.ik = derivative_symbol(grid)
        self.inv = helmholtz_symbol(grid)
        self.ik_inv = self.ik * self.inv

    def _phys(self, spec):
        return np.fft.irfft(spec, self.grid.n)

    def _prod(self, a, b):
        """Dealiased spectrum of the product of two physical arrays."""
        return np.fft.rfft(a * b) * self.mask

    def _powers(self, u):
        """Dealiased spectra of u^2, u^3, u^4 (only those with nonzero weight)."""
        c = self.coeffs
        zero = np.zeros(self.grid.n // 2 + 1, dtype=complex)
        u2 = self._prod(u, u)
        u3 = u4 = zero
        if c.c2 != 0.0 or c.c3 != 0.0:
            u2p = self._phys(u2)
            if c.c2 != 0.0:
                u3 = self._prod(u2p, u)
            if c.c3 != 0.0:
                u4 = self._prod(u2p, u2p)
        return u2, u3, u4

    def tendency(self, uhat):
        # for band-limited u the dealiased u u_x equals d_x of the dealiased u^2 / 2
        c = self.coeffs
        u = self._phys(uhat)
        ux = self._phys(self.ik * uhat)
        u2, u3, u4 = self._powers(u)
        src = 0.5 * self._prod(ux, ux) + c.c1 * u2 + c.c2 * u3 + c.c3 * u4
        return -self.ik * (0.5 * u2 + self.inv * src)

    def E(self, uhat):
        ux = self._phys(self.ik * uhat)
        return -self.ik_inv * (0.5 * self._prod(ux, ux))

    def H(self, uhat):
        c = self.coeffs
        u = self._phys(uhat)
        ux = self._phys(self.ik * uhat)
        u2, u3, u4 = self._powers(u)
        local = c.c1 * u2 + c.c2 * u3 + c.c3 * u4
        return local - self.inv * (0.5 * self._prod(ux, ux) + local)

    def F(self, uhat):
        c = self.coeffs
        u = self._phys(uhat)
        ux = self._phys(self.ik * uhat)
        u2, u3, u4 = self._powers(u)
        ux2_hat = self._prod(ux, ux)
        ux2 = self._phys(ux2_hat)
        u2p = self._phys(u2)
        u3_hat = self._prod(u2p, u)

        # Q = (c1/3) u^3 + (c2/4) u^4 + (c3/5) u^5
        q = c.c1 / 3.0 * u3_hat
        if c.c2 != 0.0:
            q = q + c.c2 / 4.0 * self._prod(u2p, u2p)
        if c.c3 != 0.0:
            q = q + c.c3 / 5.0 * self._prod(self._phys(u3_hat), u2p)

        inv_half_ux2 = self._phys(self.inv * (0.5 * ux2_hat))
        u_inv_half_ux2 = self._prod(u, inv_half_ux2)
        half_u_ux2 = 0.5 * self._prod(u, ux2)
        P = 0.5 * ux2_hat + c.c1 * u2 + c.c2 * u3 + c.c3 * u4
        ux_invP = self._prod(ux, self._phys(self.inv * P))
        inner = q - half_u_ux2 - self.ik * ux_invP
        return q - u_inv_half_ux2 - self.inv * inner


def _check_finite(u: Field):
    if not u.is_finite():
        raise NonFiniteFieldError("field contains NaN or Inf")


def rhs(u: Field, coeffs: ModelCoefficients, dealias_fraction: float = DEFAULT_DEALIAS) -> Field:
    """Tendency u_t of the rescaled equation."""
    _check_finite(u)
    op = RCHOperator(u.grid, coeffs, dealias_fraction)
    return Field.from_spectrum(u.grid, op.tendency(u.spectrum))


def compute_E(u: Field, dealias_fraction: float = DEFAULT_DEALIAS) -> Field:
    """E = -(1 - d_xx)^{-1} d_x (u_x^2 / 2)."""
    _check_finite(u)
    op = RCHOperator(u.grid, compute_coefficients(0.0), dealias_fraction)
    return Field.from_spectrum(u.grid, op.E(u.spectrum))


def compute_F(u: Field, coeffs: ModelCoefficients, dealias_fraction: float = DEFAULT_DEALIAS) -> Field:
    """Forcing of the transport equation E_t + u E_x = F."""
    _check_finite(u)
    op = RCHOperator(u.grid, coeffs, dealias_fraction)
    return Field.from_spectrum(u.grid, op.F(u.spectrum))


def compute_H(u: Field, coeffs: ModelCoefficients, dealias_fraction: float = DEFAULT_DEALIAS) -> Field:
    """Source in u_xt + u u_xx = -u_x^2/2 + H."""
    _check_finite(u)
    op = RCHOperator(u.grid, coeffs, dealias_fraction)
    return Field.from_spectrum(u.grid, op.H(u.spectrum))
