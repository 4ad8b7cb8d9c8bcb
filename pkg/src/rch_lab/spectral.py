"""Periodic grid, real scalar fields and Fourier multipliers on the 2*pi torus.

Spectra follow the numpy ``rfft`` convention: unnormalized coefficients for
wavenumbers ``k = 0 .. n/2``.  The last entry is the Nyquist mode, which is
the real mode ``k = -n/2`` of the full transform.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import finufft
import numpy as np

TWO_PI = 2.0 * np.pi

#: Default relative tolerance for off-grid evaluation.
OFFGRID_EPS = 1e-14


class GridError(ValueError):
    """Raised for an invalid grid configuration."""


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid of ``n`` points on ``[0, 2*pi)``."""

    n: int
    period: float = field(default=TWO_PI, init=False)

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 16 or n & (n - 1):
            raise GridError(f"grid size must be a power of two >= 16, got {n!r}")
        object.__setattr__(self, "n", int(n))

    @property
    def dx(self) -> float:
        return self.period / self.n

    @cached_property
    def points(self) -> np.ndarray:
        x = TWO_PI * np.arange(self.n) / self.n
        x.flags.writeable = False
        return x

    @cached_property
    def k(self) -> np.ndarray:
        """Non-negative wavenumbers of the rfft layout, ``0 .. n/2``."""
        k = np.arange(self.n // 2 + 1, dtype=float)
        k.flags.writeable = False
        return k

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Full integer wavenumber set ``-n/2 .. n/2-1`` in FFT order."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)

    def retained_mask(self, fraction: float) -> np.ndarray:
        """Boolean rfft mask of modes kept by :func:`dealias`."""
        if not 0.0 < fraction <= 1.0:
            raise ValueError(f"dealias fraction must lie in (0, 1], got {fraction}")
        return self.k <= fraction * (self.n // 2)


class Field:
    """Immutable real field sampled on a :class:`TorusGrid`.

    Either the point values or the rfft spectrum may be supplied; the other
    representation is computed on first access and cached.
    """

    __slots__ = ("grid", "_values", "_spectrum")

    def __init__(self, grid: TorusGrid, values=None, *, spectrum=None):
        if (values is None) == (spectrum is None):
            raise ValueError("give exactly one of values or spectrum")
        self.grid = grid
        self._values = None
        self._spectrum = None
        if values is not None:
            v = np.array(values, dtype=float)
            if v.shape != (grid.n,):
                raise ValueError(f"expected {grid.n} samples, got shape {v.shape}")
            v.flags.writeable = False
            self._values = v
        else:
            s = np.array(spectrum, dtype=complex)
            if s.shape != (grid.n // 2 + 1,):
                raise ValueError(f"expected {grid.n // 2 + 1} rfft coefficients, got {s.shape}")
            # real-valuedness: the mean and Nyquist coefficients are real
            s[0] = s[0].real
            s[-1] = s[-1].real
            s.flags.writeable = False
            self._spectrum = s

    @classmethod
    def from_spectrum(cls, grid: TorusGrid, spectrum) -> "Field":
        return cls(grid, spectrum=spectrum)

    @classmethod
    def from_function(cls, grid: TorusGrid, fn) -> "Field":
        return cls(grid, fn(grid.points))

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            v = np.fft.irfft(self._spectrum, self.grid.n)
            v.flags.writeable = False
            self._values = v
        return self._values

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            s = np.fft.rfft(self._values)
            s.flags.writeable = False
            self._spectrum = s
        return self._spectrum

    def full_spectrum(self) -> np.ndarray:
        """Complex DFT over all ``n`` wavenumbers (FFT order)."""
        return np.fft.fft(self.values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def mean(self) -> float:
        return float(self.spectrum[0].real / self.grid.n)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def max_wavenumber(self, rtol: float = 1e-13) -> int:
        """Largest ``|k|`` whose coefficient exceeds ``rtol`` times the peak."""
        mag = np.abs(self.spectrum)
        peak = mag.max()
        if peak == 0.0:
            return 0
        return int(np.nonzero(mag > rtol * peak)[0][-1])

    def __add__(self, other):
        if isinstance(other, Field):
            return Field(self.grid, self.values + other.values)
        return Field(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Field):
            return Field(self.grid, self.values - other.values)
        return Field(self.grid, self.values - other)

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __mul__(self, other):
        if isinstance(other, Field):
            return Field(self.grid, self.values * other.values)
        return Field(self.grid, self.values * other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Field(n={self.grid.n}, max={self.max_abs():.3e})"


# -- multiplier symbols on the rfft layout ----------------------------------


def derivative_symbol(grid: TorusGrid) -> np.ndarray:
    sym = 1j * grid.k
    sym[-1] = 0.0  # odd derivative: Nyquist has no sign-symmetric partner
    return sym


def helmholtz_symbol(grid: TorusGrid) -> np.ndarray:
    return 1.0 / (1.0 + grid.k**2)


def apply_multiplier(u: Field, symbol: np.ndarray) -> Field:
    return Field.from_spectrum(u.grid, u.spectrum * symbol)


def differentiate(u: Field) -> Field:
    """Spectral derivative d/dx."""
    return apply_multiplier(u, derivative_symbol(u.grid))


def helmholtz_inverse(u: Field) -> Field:
    """Apply ``(1 - d^2/dx^2)^{-1}``, the multiplier ``1/(1+k^2)``."""
    return apply_multiplier(u, helmholtz_symbol(u.grid))


def dealias(u: Field, fraction: float = 2.0 / 3.0) -> Field:
    """Zero every mode with ``|k| > fraction * n/2``."""
    return apply_multiplier(u, u.grid.retained_mask(fraction))


# -- off-grid evaluation -----------------------------------------------------


def _centered_coefficients(spectra: np.ndarray, n: int) -> np.ndarray:
    """Map rfft spectra (last axis) to normalized coefficients for k = -n/2..n/2.

    The Nyquist coefficient is split evenly between +-n/2 so that the
    interpolant is the real trigonometric polynomial through the samples.
    """
    half = n // 2
    c = np.empty(spectra.shape[:-1] + (n + 1,), dtype=complex)
    c[..., half:] = spectra / n
    c[..., :half] = np.conj(spectra[..., :0:-1]) / n
    c[..., 0] *= 0.5
    c[..., -1] *= 0.5
    return c


class OffgridEvaluator:
    """Trigonometric interpolation of fields at a fixed set of positions.

    Wraps a type-2 non-uniform FFT plan so several spectra can be evaluated
    at the same points without re-sorting them.
    """

    def __init__(self, grid: TorusGrid, positions, eps: float = OFFGRID_EPS):
        self.grid = grid
        pos = np.mod(np.asarray(positions, dtype=float).ravel(), TWO_PI)
        self.size = pos.size
        self._plans = {}
        self._eps = eps
        self._pos = pos

    def _plan(self, n_trans: int):
        plan = self._plans.get(n_trans)
        if plan is None:
            plan = finufft.Plan(2, (self.grid.n + 1,), n_trans=n_trans, eps=self._eps,
                                isign=1, nthreads=1, modeord=0)
            plan.setpts(self._pos)
            self._plans[n_trans] = plan
        return plan

    def evaluate_spectra(self, spectra: np.ndarray) -> np.ndarray:
        """Evaluate rfft spectra (shape ``(n/2+1,)`` or ``(m, n/2+1)``)."""
        spectra = np.asarray(spectra)
        if self.size == 0:
            return np.zeros(spectra.shape[:-1] + (0,))
        single = spectra.ndim == 1
        batch = spectra[None] if single else spectra
        coeffs = _centered_coefficients(batch, self.grid.n)
        out = self._plan(batch.shape[0]).execute(coeffs if batch.shape[0] > 1 else coeffs[0])
        out = np.asarray(out).real.reshape(batch.shape[0], self.size)
        return out[0] if single else out

    def __call__(self, u: Field) -> np.ndarray:
        return self.evaluate_spectra(u.spectrum)


def evaluate_offgrid(u: Field, positions) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``u`` at arbitrary positions."""
    shape = np.shape(positions)
    return OffgridEvaluator(u.grid, positions)(u).reshape(shape)
