"""Dyadic Littlewood-Paley blocks and nonhomogeneous Besov norms on the torus."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import Field, TorusGrid, TWO_PI

CHI_INNER = 3.0 / 4.0
CHI_OUTER = 4.0 / 3.0


class FilterBankError(ValueError):
    """Raised for grids too small to carry a useful dyadic decomposition."""


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        f = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        s = 1.0 - t
        g = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
    return f / (f + g)


def chi(xi):
    """Low-pass profile: 1 on |xi| <= 3/4, 0 on |xi| >= 4/3."""
    r = np.abs(np.asarray(xi, dtype=float))
    return 1.0 - smooth_step((r - CHI_INNER) / (CHI_OUTER - CHI_INNER))


def phi(xi):
    """Annulus profile chi(xi/2) - chi(xi), supported in 3/4 <= |xi| <= 8/3."""
    xi = np.asarray(xi, dtype=float)
    return chi(xi / 2.0) - chi(xi)


@dataclass(frozen=True)
class DyadicFilterBank:
    """Cutoffs sampled at the rfft wavenumbers of ``grid``.

    ``multipliers[j + 1]`` is the symbol of block ``j`` for ``j = -1 .. j_max``.
    """

    grid: TorusGrid
    j_max: int
    multipliers: np.ndarray

    @property
    def chi(self) -> np.ndarray:
        return self.multipliers[0]

    @property
    def indices(self) -> range:
        return range(-1, self.j_max + 1)

    def symbol(self, j: int) -> np.ndarray:
        if j < -1:
            return np.zeros_like(self.chi)
        if j > self.j_max:
            raise IndexError(f"block {j} exceeds j_max = {self.j_max}")
        return self.multipliers[j + 1]

    @property
    def covered_wavenumber(self) -> float:
        """Largest |k| where the blocks sum to one."""
        return 1.5 * 2.0**self.j_max

    def partition_residual(self) -> float:
        k = self.grid.k
        covered = k <= self.covered_wavenumber
        total = self.multipliers.sum(axis=0)
        return float(np.max(np.abs(total[covered] - 1.0)))


def build_filter_bank(grid: TorusGrid) -> DyadicFilterBank:
    # largest j whose annulus (8/3) 2^j still fits below Nyquist
    j_max = -1
    while 8 * 2 ** (j_max + 1) <= 3 * (grid.n // 2):
        j_max += 1
    if j_max < 2:
        raise FilterBankError(f"grid n={grid.n} too small for a dyadic bank (j_max={j_max})")
    k = grid.k
    rows = [chi(k)] + [phi(k / 2.0**j) for j in range(j_max + 1)]
    mult = np.vstack(rows)
    mult.flags.writeable = False
    return DyadicFilterBank(grid=grid, j_max=j_max, multipliers=mult)


def block(u: Field, j: int, bank: DyadicFilterBank) -> Field:
    """Littlewood-Paley block Delta_j u."""
    return Field.from_spectrum(u.grid, u.spectrum * bank.symbol(j))


def low_pass(u: Field, N: int, bank: DyadicFilterBank) -> Field:
    """S_N u, the sum of blocks -1 .. N-1 (multiplier chi(2^-N k))."""
    if N > bank.j_max + 1:
        raise IndexError(f"S_{N} needs blocks beyond j_max = {bank.j_max}")
    if N <= -1:
        return Field.from_spectrum(u.grid, np.zeros_like(u.spectrum))
    return Field.from_spectrum(u.grid, u.spectrum * bank.multipliers[: N + 1].sum(axis=0))


def block_sup_norms(u: Field, bank: DyadicFilterBank) -> np.ndarray:
    """Grid maximum of |Delta_j u| for j = -1 .. j_max."""
    n = u.grid.n
    spec = u.spectrum
    out = np.empty(bank.j_max + 2)
    for row, m in enumerate(bank.multipliers):
        out[row] = np.max(np.abs(np.fft.irfft(spec * m, n)))
    return out


def block_l2_norms(u: Field, bank: DyadicFilterBank) -> np.ndarray:
    n = u.grid.n
    spec = u.spectrum
    out = np.empty(bank.j_max + 2)
    for row, m in enumerate(bank.multipliers):
        b = np.fft.irfft(spec * m, n)
        out[row] = math.sqrt(np.mean(b * b) * TWO_PI)
    return out


@dataclass(frozen=True)
class BesovIndex:
    """Besov exponents (s, p, r); ``log_weight`` selects the j 2^{js} sup norm."""

    s: float
    p: float = math.inf
    r: float = 1.0
    log_weight: bool = False

    def __post_init__(self):
        if self.p not in (2, math.inf):
            raise ValueError(f"p must be 2 or inf, got {self.p}")
        if not 1.0 <= self.r <= math.inf:
            raise ValueError(f"r must lie in [1, inf], got {self.r}")
        if self.log_weight and (self.p != math.inf or self.r != math.inf):
            raise ValueError("the log-weighted space requires p = r = inf")


def aggregate(block_norms, s: float, r: float) -> float:
    """l^r sum of ``2^{js} * block_norms[j+1]`` over j = -1 .. j_max."""
    b = np.asarray(block_norms, dtype=float)
    j = np.arange(-1, b.size - 1)
    weighted = 2.0 ** (j * s) * b
    if r == math.inf:
        return float(weighted.max())
    if r == 1:
        return float(weighted.sum())
    return float(np.sum(weighted**r) ** (1.0 / r))


def log_aggregate(block_norms, s: float) -> float:
    """sup_j j 2^{js} block_norms[j+1]; blocks j <= 0 carry zero weight."""
    b = np.asarray(block_norms, dtype=float)
    j = np.arange(-1, b.size - 1)
    weighted = np.where(j >= 1, j * 2.0 ** (j * s), 0.0) * b
    return float(weighted.max())


def besov_norm(u: Field, idx: BesovIndex, bank: DyadicFilterBank) -> float:
    if idx.log_weight:
        raise ValueError("use besov_log_norm for the log-weighted space")
    norms = block_sup_norms(u, bank) if idx.p == math.inf else block_l2_norms(u, bank)
    return aggregate(norms, idx.s, idx.r)


def besov_log_norm(u: Field, s: float, bank: DyadicFilterBank) -> float:
    """Norm of the space B^s_{inf,inf,1}: sup_j j 2^{js} max|Delta_j u|."""
    return log_aggregate(block_sup_norms(u, bank), s)
