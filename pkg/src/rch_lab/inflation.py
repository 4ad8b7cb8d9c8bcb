"""Norm-inflation experiment for the rescaled R-CH equation.

The initial datum is a high-frequency carrier ``cos(2^{N+5} x)`` modulated by a
smoothed step and mapped through ``-(1 - d_xx)^{-1} d_x``.  Each run records
Besov norms, commutator sizes and the Lagrangian flow gradient over the
horizon ``t_end = 2 / sqrt(N)``; a sweep fits log-log slopes across N.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from .littlewood_paley import (
    DyadicFilterBank, aggregate, block_sup_norms, build_filter_bank, log_aggregate, low_pass,
)
from .model import DEFAULT_DEALIAS, RCHOperator, compute_coefficients
from .solver import blown_up, characteristic_step_with_gradient, periodic_gradient, rk4_step
from .spectral import Field, OffgridEvaluator, TorusGrid, derivative_symbol, helmholtz_symbol

log = logging.getLogger(__name__)

GRID_OFFSET = 9  # n = 2^(N + GRID_OFFSET)
UNCOVERED_TOL = 1e-20  # energy share of u0x^2 allowed above the covered band


class ConfigurationError(ValueError):
    pass


def carrier_wavenumber(N: int) -> int:
    return 2 ** (N + 5)


def grid_rule_ok(N: int, n: int, dealias_fraction: float = DEFAULT_DEALIAS) -> bool:
    """Carrier headroom: 4 * 2^(N+5) must sit inside the retained band."""
    return 4 * carrier_wavenumber(N) <= dealias_fraction * (n // 2)


def grid_for(N: int) -> TorusGrid:
    return TorusGrid(2 ** (N + GRID_OFFSET))


def torus_step(grid: TorusGrid) -> Field:
    """Fourier projection of the indicator of [0, pi) onto the grid's modes.

    Built from the exact series 1/2 + (2/pi) sum_{k odd} sin(kx)/k instead of
    point samples, so no aliasing of the jump enters the low modes.
    """
    n = grid.n
    spec = np.zeros(n // 2 + 1, dtype=complex)
    spec[0] = n / 2.0
    k = np.arange(1, n // 2 + 1, 2)
    spec[k] = -1j * n / (np.pi * k)
    return Field.from_spectrum(grid, spec)


def build_initial_data(N: int, grid: TorusGrid, bank: Optional[DyadicFilterBank] = None,
                       dealias_fraction: float = DEFAULT_DEALIAS) -> Field:
    """u0 = -N^{-1/10} (1 - d_xx)^{-1} d_x [cos(2^{N+5} x) (1 + N^{-1/10} S_N h)]."""
    if N < 1:
        raise ConfigurationError(f"N must be a positive integer, got {N}")
    if not grid_rule_ok(N, grid.n, dealias_fraction):
        raise ConfigurationError(
            f"grid n={grid.n} too coarse for N={N}: need 4*2^(N+5) <= {dealias_fraction:.4g}*n/2")
    bank = bank or build_filter_bank(grid)
    amp = N ** -0.1
    smooth_h = low_pass(torus_step(grid), N, bank)
    carrier = np.cos(carrier_wavenumber(N) * grid.points)
    bracket = np.fft.rfft(carrier * (1.0 + amp * smooth_h.values)) * grid.retained_mask(dealias_fraction)
    return Field.from_spectrum(grid, -amp * derivative_symbol(grid) * helmholtz_symbol(grid) * bracket)


# -- diagnostics ----------------------------------------------------------------


@dataclass
class CommutatorDiag:
    """Sizes of R_j = Delta_j(u u_x) - u Delta_j u_x and the lemma ratios."""

    block_norms: list
    sum_norms: float
    weighted_sum: float
    log_sup: float
    ux_B0: float
    u_B0: float
    u_B1: float
    u_log0: float
    ratio_sum: float
    ratio_weighted: float
    ratio_log: float


def _ratio(num, den):
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def commutator_blocks(u: Field, bank: DyadicFilterBank,
                      dealias_fraction: float = DEFAULT_DEALIAS) -> np.ndarray:
    """Array of R_j on the grid, one row per j = -1 .. j_max (pointwise products)."""
    n = u.grid.n
    mask = u.grid.retained_mask(dealias_fraction)
    ux_hat = derivative_symbol(u.grid) * u.spectrum
    ux = np.fft.irfft(ux_hat, n)
    uux_hat = np.fft.rfft(u.values * ux) * mask
    out = np.empty((bank.j_max + 2, n))
    for row, m in enumerate(bank.multipliers):
        out[row] = np.fft.irfft(m * uux_hat, n) - u.values * np.fft.irfft(m * ux_hat, n)
    return out


def commutator_diag(u: Field, bank: DyadicFilterBank,
                    dealias_fraction: float = DEFAULT_DEALIAS) -> CommutatorDiag:
    r = np.max(np.abs(commutator_blocks(u, bank, dealias_fraction)), axis=1)
    j = np.arange(-1, bank.j_max + 1)
    ux_blocks = block_sup_norms(Field.from_spectrum(u.grid, derivative_symbol(u.grid) * u.spectrum), bank)
    u_blocks = block_sup_norms(u, bank)
    ux_B0 = aggregate(ux_blocks, 0.0, 1)
    u_B0 = aggregate(u_blocks, 0.0, 1)
    u_B1 = aggregate(u_blocks, 1.0, 1)
    u_log0 = log_aggregate(u_blocks, 0.0)
    sum_norms = float(r.sum())
    weighted = float(np.sum(2.0**j * r))
    log_sup = float(np.max(np.where(j >= 1, j, 0) * r))
    return CommutatorDiag(
        block_norms=r.tolist(), sum_norms=sum_norms, weighted_sum=weighted, log_sup=log_sup,
        ux_B0=ux_B0, u_B0=u_B0, u_B1=u_B1, u_log0=u_log0,
        ratio_sum=_ratio(sum_norms, ux_B0 * (u_B0 + u_log0)),
        ratio_weighted=_ratio(weighted, ux_B0 * u_B1),
        ratio_log=_ratio(log_sup, ux_B0 * u_log0),
    )


def field_norms(u: Field, bank: DyadicFilterBank, dealias_fraction: float = DEFAULT_DEALIAS) -> dict:
    """The norms tracked for a state: B^1_{inf,1} of u, B^0 and log norms of u_x, C^{0,1}."""
    grid = u.grid
    ux = Field.from_spectrum(grid, derivative_symbol(grid) * u.spectrum)
    u_blocks = block_sup_norms(u, bank)
    ux_blocks = block_sup_norms(ux, bank)
    return {
        "B1_inf1": aggregate(u_blocks, 1.0, 1),
        "log_B1": log_aggregate(u_blocks, 1.0),
        "ux_B0_inf1": aggregate(ux_blocks, 0.0, 1),
        "ux_log_B0": log_aggregate(ux_blocks, 0.0),
        "C01": u.max_abs() + ux.max_abs(),
        "u_sup": u.max_abs(),
        "ux_sup": ux.max_abs(),
        "low_block_sup": float(u_blocks[0]),
    }


def initial_data_norms(u0: Field, bank: DyadicFilterBank,
                       dealias_fraction: float = DEFAULT_DEALIAS) -> dict:
    grid = u0.grid
    op = RCHOperator(grid, compute_coefficients(0.0), dealias_fraction)
    ux = np.fft.irfft(op.ik * u0.spectrum, grid.n)
    ux2 = Field.from_spectrum(grid, op._prod(ux, ux))
    E0 = Field.from_spectrum(grid, op.E(u0.spectrum))
    norms = field_norms(u0, bank, dealias_fraction)
    norms["ux2_B0_inf1"] = aggregate(block_sup_norms(ux2, bank), 0.0, 1)
    norms["E_B1_inf1"] = aggregate(block_sup_norms(E0, bank), 1.0, 1)
    norms["E_over_ux2"] = _ratio(norms["E_B1_inf1"], norms["ux2_B0_inf1"])
    norms["ux2_max_wavenumber"] = ux2.max_wavenumber(rtol=1e-10)
    norms["ux2_uncovered"] = uncovered_fraction(ux2.spectrum, bank)
    norms["covered_wavenumber"] = bank.covered_wavenumber
    return norms


def uncovered_fraction(spectrum: np.ndarray, bank: DyadicFilterBank) -> float:
    """Share of spectral energy above the band where the blocks sum to one."""
    e = np.abs(spectrum) ** 2
    total = e.sum()
    if total == 0.0:
        return 0.0
    return float(e[bank.grid.k > bank.covered_wavenumber].sum() / total)


# -- slope fits ---------------------------------------------------------------------


@dataclass
class SlopeFit:
    slope: Optional[float]
    stderr: Optional[float]
    intercept: Optional[float]
    residual_rms: Optional[float]
    points: int

    @property
    def defined(self) -> bool:
        return self.slope is not None


def fit_loglog(Ns: Sequence[float], values: Sequence[float]) -> SlopeFit:
    """Least-squares slope of log2(value) against log2(N).

    Fewer than two usable points leave the slope undefined; exactly two give
    an exact fit with no standard error.
    """
    pts = [(float(n), float(v)) for n, v in zip(Ns, values)
           if v is not None and math.isfinite(v) and v > 0]
    npts = len(pts)
    if npts < 2 or len({n for n, _ in pts}) < 2:
        return SlopeFit(None, None, None, None, npts)
    x = np.log2([n for n, _ in pts])
    y = np.log2([v for _, v in pts])
    res = stats.linregress(x, y)
    resid = y - (res.intercept + res.slope * x)
    stderr = float(res.stderr) if npts > 2 else None
    return SlopeFit(float(res.slope), stderr, float(res.intercept),
                    float(np.sqrt(np.mean(resid**2))), npts)


def pearson(a, b) -> Optional[float]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 3 or np.std(a) == 0.0 or np.std(b) == 0.0:
        return None
    return float(np.corrcoef(a, b)[0, 1])


# -- experiment -------------------------------------------------------------------


@dataclass(frozen=True)
class InflationConfig:
    N_list: tuple = (6, 7, 8)
    omega: float = 1.0
    horizon_factor: float = 2.0
    dt_max: float = 1e-3
    cfl_target: float = 1.0
    char_dt_max: float = 1e-3
    n_samples: int = 64
    dealias_fraction: float = DEFAULT_DEALIAS
    blowup_threshold: float = 1e6
    flow_window: tuple = (0.4, 2.5)
    offgrid_eps: float = 1e-12
    lagrangian_diagnostics: bool = True
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "N_list", tuple(int(n) for n in self.N_list))
        object.__setattr__(self, "flow_window", tuple(float(v) for v in self.flow_window))
        if not self.N_list:
            raise ConfigurationError("N_list must not be empty")
        if any(n < 1 for n in self.N_list):
            raise ConfigurationError("every N must be a positive integer")
        if min(self.n_samples, self.dt_max, self.horizon_factor, self.cfl_target, self.char_dt_max) <= 0:
            raise ConfigurationError(
                "n_samples, dt_max, horizon_factor, cfl_target and char_dt_max must be positive")

    def horizon(self, N: int) -> float:
        return self.horizon_factor / math.sqrt(N)

    def sampling(self, N: int) -> tuple[float, int]:
        """(sampling interval, characteristic steps per interval)."""
        interval = self.horizon(N) / self.n_samples
        return interval, max(1, math.ceil(interval / self.char_dt_max - 1e-9))


SERIES_KEYS = (
    "t", "B1_inf1", "ux_B0_inf1", "ux_log_B0", "C01", "u_sup", "ux_sup", "low_block_sup", "E_B1_inf1",
    "F_B1_inf1", "commutator_weighted", "commutator_ratio", "yxi_min", "yxi_max",
    "yxi_var_min", "yxi_var_max", "lagrangian_B1", "remainder_D", "proxy", "uncovered",
)


@dataclass
class RunRecord:
    N: int
    omega: float
    n: int
    dt: Optional[float]
    t_end: float
    n_steps: int
    initial: dict
    commutator0: dict
    series: dict
    blown_up: bool = False
    blowup_time: Optional[float] = None
    achieved_t: float = 0.0
    char_step: Optional[float] = None
    max_cfl: Optional[float] = None
    peak_ratio: Optional[float] = None
    pearson_growth_proxy: Optional[float] = None
    envelope_constant: Optional[float] = None
    ux_log_constant: Optional[float] = None
    yxi_min: Optional[float] = None
    yxi_max: Optional[float] = None
    yxi_route_gap: Optional[float] = None
    flow_window_ok: Optional[bool] = None
    lower_bound_ok: Optional[bool] = None
    max_uncovered: Optional[float] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None or self.flow_window_ok is False or self.lower_bound_ok is False


def _block_rows(spec: np.ndarray, bank: DyadicFilterBank) -> np.ndarray:
    return np.fft.irfft(bank.multipliers * spec, bank.grid.n, axis=-1)


def _envelope_constant(series) -> Optional[float]:
    """Smallest C with A(t) <= A(0) exp(C int_0^t |u_x|), A = |u_x| + |u| + |u|^2 + |u|^3."""
    u = np.asarray(series["u_sup"])
    ux = np.asarray(series["ux_sup"])
    t = np.asarray(series["t"])
    A = ux + u + u**2 + u**3
    integral = np.concatenate([[0.0], np.cumsum(0.5 * (ux[1:] + ux[:-1]) * np.diff(t))])
    ok = integral > 0
    if not np.any(ok) or A[0] == 0.0:
        return None
    return float(max(0.0, np.max(np.log(A[ok] / A[0]) / integral[ok])))


def run_single(N: int, omega: float, cfg: InflationConfig) -> RunRecord:
    """One inflation run at carrier level N; failures are recorded, not raised."""
    grid = grid_for(N)
    rec = RunRecord(N=N, omega=omega, n=grid.n, dt=None, t_end=cfg.horizon(N), n_steps=0,
                    initial={}, commutator0={}, series={k: [] for k in SERIES_KEYS})
    try:
        _run(rec, grid, cfg)
    except Exception as exc:  # noqa: BLE001 - a sweep must survive any single run
        log.exception("run N=%s failed", N)
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


class _Sampler:
    """Records the diagnostics of one state into the run's series."""

    def __init__(self, rec, grid, bank, op, u0, cfg):
        self.rec, self.grid, self.bank, self.op, self.cfg = rec, grid, bank, op, cfg
        self.frac = cfg.dealias_fraction
        self.E0_B1 = rec.initial["E_B1_inf1"]
        self.weights = 2.0 ** np.arange(-1, bank.j_max + 1)
        self.u0_blocks = self.E0_blocks = None
        if cfg.lagrangian_diagnostics:
            self.u0_blocks = _block_rows(u0.spectrum, bank)
            self.E0_blocks = _block_rows(op.E(u0.spectrum), bank)

    def __call__(self, t, uhat, y, y_xi):
        grid, bank, op, s = self.grid, self.bank, self.op, self.rec.series
        u = Field.from_spectrum(grid, uhat)
        norms = field_norms(u, bank, self.frac)
        yxi_spec = periodic_gradient(y - grid.points)
        s["t"].append(t)
        for key in ("B1_inf1", "ux_B0_inf1", "ux_log_B0", "C01", "u_sup", "ux_sup", "low_block_sup"):
            s[key].append(norms[key])
        s["E_B1_inf1"].append(aggregate(block_sup_norms(Field.from_spectrum(grid, op.E(uhat)), bank), 1.0, 1))
        s["F_B1_inf1"].append(aggregate(block_sup_norms(Field.from_spectrum(grid, op.F(uhat)), bank), 1.0, 1))
        cd = commutator_diag(u, bank, self.frac)
        s["commutator_weighted"].append(cd.weighted_sum)
        s["commutator_ratio"].append(cd.ratio_weighted)
        s["yxi_min"].append(float(yxi_spec.min()))
        s["yxi_max"].append(float(yxi_spec.max()))
        s["yxi_var_min"].append(float(y_xi.min()))
        s["yxi_var_max"].append(float(y_xi.max()))
        s["proxy"].append(t * self.E0_B1)
        s["uncovered"].append(uncovered_fraction(uhat, bank))
        if self.cfg.lagrangian_diagnostics:
            lag, D = _lagrangian_terms(uhat, y, t, bank, self.u0_blocks, self.E0_blocks,
                                       self.weights, self.cfg.offgrid_eps)
        else:
            lag = D = math.nan
        s["lagrangian_B1"].append(lag)
        s["remainder_D"].append(D)
        return norms["u_sup"]


def _run(rec: RunRecord, grid: TorusGrid, cfg: InflationConfig):
    N = rec.N
    frac = cfg.dealias_fraction
    bank = build_filter_bank(grid)
    coeffs = compute_coefficients(rec.omega)
    op = RCHOperator(grid, coeffs, frac)
    u0 = build_initial_data(N, grid, bank, frac)
    rec.initial = initial_data_norms(u0, bank, frac)
    if rec.initial["ux2_uncovered"] > UNCOVERED_TOL:
        raise ConfigurationError("u0x^2 extends beyond the dyadic blocks; grid too coarse")
    rec.commutator0 = asdict(commutator_diag(u0, bank, frac))
    sample = _Sampler(rec, grid, bank, op, u0, cfg)

    k_max = frac * (grid.n // 2)
    interval, q = cfg.sampling(N)
    h = interval / q
    rec.char_step = h
    y = grid.points.copy()
    y_xi = np.ones_like(y)
    uhat = u0.spectrum * op.mask
    u_sup = sample(0.0, uhat, y, y_xi)
    u_prev = u_sup
    dt_min = math.inf
    max_cfl = 0.0
    for i in range(cfg.n_samples):
        # extrapolate max|u| one interval ahead so the advective number stays below target
        u_est = u_sup + max(0.0, u_sup - u_prev)
        dt_target = cfg.dt_max if u_est == 0.0 else min(cfg.dt_max, cfg.cfl_target / (k_max * u_est))
        p = 2 * math.ceil(h / (2.0 * dt_target))
        dt = h / p
        dt_min = min(dt_min, dt)
        t0 = i * interval
        for c in range(q):
            start, mid = uhat, None
            for step in range(1, p + 1):
                uhat = rk4_step(op, uhat, dt)
                rec.n_steps += 1
                if blown_up(uhat, op.ik, grid.n, cfg.blowup_threshold):
                    rec.blown_up = True
                    rec.blowup_time = t0 + (c * p + step) * dt
                    rec.achieved_t = rec.blowup_time - dt
                    rec.dt, rec.max_cfl = dt_min, max_cfl
                    _summarize(rec, cfg)
                    return
                if step == p // 2:
                    mid = uhat
            y, y_xi = characteristic_step_with_gradient(y, y_xi, grid, start, uhat, h, spec_mid=mid)
        t = (i + 1) * interval
        rec.achieved_t = t
        u_prev = u_sup
        u_sup = sample(t, uhat, y, y_xi)
        max_cfl = max(max_cfl, dt * k_max * max(u_prev, u_sup))
    rec.dt, rec.max_cfl = dt_min, max_cfl
    _summarize(rec, cfg)


def _lagrangian_terms(uhat, y, t, bank, u0_blocks, E0_blocks, weights, eps):
    """Sum_j 2^j max|Delta_j u o y| and D(t) = Sum_j 2^j max|Delta_j u o y - Delta_j u0 - t Delta_j E0|."""
    ev = OffgridEvaluator(bank.grid, y, eps=eps)
    lag = 0.0
    D = 0.0
    rows = bank.multipliers.shape[0]
    chunk = 4
    for start in range(0, rows, chunk):
        stop = min(rows, start + chunk)
        along = ev.evaluate_spectra(bank.multipliers[start:stop] * uhat)
        for i, row in enumerate(range(start, stop)):
            w = weights[row]
            lag += w * np.max(np.abs(along[i]))
            D += w * np.max(np.abs(along[i] - u0_blocks[row] - t * E0_blocks[row]))
    return float(lag), float(D)


def _summarize(rec: RunRecord, cfg: InflationConfig):
    s = rec.series
    if not s["t"]:
        return
    u0_B1 = rec.initial["B1_inf1"]
    B1 = np.asarray(s["B1_inf1"])
    rec.peak_ratio = float(B1.max() / u0_B1) if u0_B1 > 0 else None
    rec.pearson_growth_proxy = pearson(B1 - u0_B1, s["proxy"])
    rec.envelope_constant = _envelope_constant(s)
    rec.ux_log_constant = float(max(s["ux_log_B0"]) / rec.N ** 0.9)
    rec.yxi_min = float(min(s["yxi_min"]))
    rec.yxi_max = float(max(s["yxi_max"]))
    rec.yxi_route_gap = float(np.max(np.abs(np.asarray(s["yxi_min"]) - np.asarray(s["yxi_var_min"]))
                                     + np.abs(np.asarray(s["yxi_max"]) - np.asarray(s["yxi_var_max"]))))
    lo, hi = cfg.flow_window
    rec.flow_window_ok = bool(rec.yxi_min >= lo and rec.yxi_max <= hi)
    rec.max_uncovered = float(max(s["uncovered"]))
    if cfg.lagrangian_diagnostics:
        lag = np.asarray(s["lagrangian_B1"])
        bound = np.asarray(s["proxy"]) - np.asarray(s["remainder_D"]) - u0_B1
        rec.lower_bound_ok = bool(np.all(lag >= bound - 1e-12 * np.maximum(1.0, np.abs(bound))))


# -- sweep ----------------------------------------------------------------------------

PEARSON_MIN = 0.9
SCALING_TARGETS = {"B1_inf1": -0.1, "log_B1": 0.9, "ux2_B0_inf1": 0.6}
SCALING_WINDOWS = {"B1_inf1": (-0.35, 0.05), "log_B1": (0.6, 1.2), "ux2_B0_inf1": (0.35, 0.85)}


@dataclass
class InflationReport:
    config: dict
    coefficients: dict
    runs: list
    fits: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v for v in self.verdicts.values() if v is not None)


def initial_data_table(N_list: Sequence[int], builder: Callable = build_initial_data,
                       dealias_fraction: float = DEFAULT_DEALIAS) -> dict:
    """Initial-data norms for each N and their log-log slopes against N."""
    rows = []
    for N in N_list:
        grid = grid_for(N)
        bank = build_filter_bank(grid)
        u0 = builder(N, grid, bank, dealias_fraction)
        rows.append({"N": N, "n": grid.n, **initial_data_norms(u0, bank, dealias_fraction)})
    fits = {key: asdict(fit_loglog([r["N"] for r in rows], [r[key] for r in rows]))
            for key in SCALING_TARGETS}
    verdicts = {}
    for key, (lo, hi) in SCALING_WINDOWS.items():
        slope = fits[key]["slope"]
        verdicts[f"slope_{key}_in_window"] = None if slope is None else bool(lo <= slope <= hi)
    return {"rows": rows, "fits": fits, "targets": dict(SCALING_TARGETS),
            "windows": {k: list(v) for k, v in SCALING_WINDOWS.items()}, "verdicts": verdicts}


def strictly_increasing(values) -> Optional[bool]:
    vals = [v for v in values if v is not None]
    if len(vals) != len(values) or len(vals) < 2:
        return None
    return all(b > a for a, b in zip(vals, vals[1:]))


def run_sweep(cfg: InflationConfig, runner: Callable = run_single) -> InflationReport:
    Ns = sorted(cfg.N_list)
    if cfg.workers > 1 and len(Ns) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            runs = list(pool.map(runner, Ns, [cfg.omega] * len(Ns), [cfg] * len(Ns)))
    else:
        runs = [runner(N, cfg.omega, cfg) for N in Ns]

    ok = [r for r in runs if r.error is None]
    fits = {}
    for key in SCALING_TARGETS:
        fits[f"u0_{key}"] = asdict(fit_loglog([r.N for r in ok], [r.initial.get(key) for r in ok]))
    fits["peak_ratio"] = asdict(fit_loglog([r.N for r in ok], [r.peak_ratio for r in ok]))

    u0_slope = fits["u0_B1_inf1"]["slope"]
    increasing = strictly_increasing([r.peak_ratio for r in runs])
    verdicts = {
        "peak_ratio_increasing": increasing,
        "u0_slope_negative": None if u0_slope is None else bool(u0_slope < 0),
        "flow_window": all(r.flow_window_ok for r in ok) if ok else False,
        "lower_bound": all(r.lower_bound_ok is not False for r in ok) if ok else False,
        "growth_tracks_proxy": (all(r.pearson_growth_proxy is not None
                                    and r.pearson_growth_proxy >= PEARSON_MIN for r in ok)
                                if ok else False),
        "all_runs_completed": len(ok) == len(runs),
    }
    if increasing is None or u0_slope is None:
        verdicts["inflation_trend"] = None
    else:
        verdicts["inflation_trend"] = bool(increasing and u0_slope < 0)
    return InflationReport(
        config=_config_dict(cfg),
        coefficients=compute_coefficients(cfg.omega).as_dict(),
        runs=runs, fits=fits, verdicts=verdicts,
    )


def _config_dict(cfg: InflationConfig) -> dict:
    d = asdict(cfg)
    d["N_list"] = list(cfg.N_list)
    d["flow_window"] = list(cfg.flow_window)
    return d


def config_from_dict(d: dict) -> InflationConfig:
    known = {f for f in InflationConfig.__dataclass_fields__}
    unknown = set(d) - known
    if unknown:
        raise ConfigurationError(f"unknown inflation config keys: {sorted(unknown)}")
    return replace(InflationConfig(), **d)
