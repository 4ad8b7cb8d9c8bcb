"""Fixed-step RK4 integration, blow-up monitoring and Lagrangian flow maps."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .model import DEFAULT_DEALIAS, ModelCoefficients, RCHOperator
from .spectral import Field, OffgridEvaluator, TorusGrid, TWO_PI, derivative_symbol


class CFLWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    t_end: float
    dealias_fraction: float = DEFAULT_DEALIAS
    blowup_threshold: float = 1e6
    snapshot_stride: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_end >= 0:
            raise ValueError(f"t_end must be non-negative, got {self.t_end}")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        # tolerate t_end/dt landing a hair above an integer
        return int(math.ceil(self.t_end / self.dt - 1e-9))


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    blown_up: bool = False
    blowup_time: Optional[float] = None

    @property
    def grid(self) -> TorusGrid:
        return self.states[0].grid


def cfl_number(u: Field, dt: float, dealias_fraction: float = DEFAULT_DEALIAS) -> float:
    k_max = dealias_fraction * (u.grid.n // 2)
    return dt * k_max * u.max_abs()


def blown_up(uhat, ik, n, threshold) -> bool:
    """True if u_x has a non-finite value or exceeds ``threshold`` in absolute value."""
    ux = np.fft.irfft(ik * uhat, n)
    if not np.all(np.isfinite(ux)):
        return True
    return float(np.max(np.abs(ux))) > threshold


def rk4_step(op: RCHOperator, uhat: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of the spectral tendency."""
    k1 = op.tendency(uhat)
    k2 = op.tendency(uhat + 0.5 * dt * k1)
    k3 = op.tendency(uhat + 0.5 * dt * k2)
    k4 = op.tendency(uhat + dt * k3)
    return uhat + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def march(u0: Field, coeffs: ModelCoefficients, cfg: SolverConfig,
          ) -> Iterator[tuple[int, float, np.ndarray, bool]]:
    """Yield ``(step, t, spectrum, blown_up)`` after every RK4 step, starting at step 0.

    Iteration stops after the final step or the first step flagged as blown up.
    """
    grid = u0.grid
    op = RCHOperator(grid, coeffs, cfg.dealias_fraction)
    if cfl_number(u0, cfg.dt, cfg.dealias_fraction) > 0.5:
        warnings.warn(f"advisory CFL number {cfl_number(u0, cfg.dt, cfg.dealias_fraction):.3f} "
                      "exceeds 0.5", CFLWarning, stacklevel=2)
    uhat = u0.spectrum * op.mask
    n_steps = cfg.n_steps
    dt = cfg.dt
    yield 0, 0.0, uhat, False
    for step in range(1, n_steps + 1):
        uhat = rk4_step(op, uhat, dt)
        t = step * dt
        bad = blown_up(uhat, op.ik, grid.n, cfg.blowup_threshold)
        yield step, t, uhat, bad
        if bad:
            return


def integrate(u0: Field, coeffs: ModelCoefficients, cfg: SolverConfig) -> Trajectory:
    """Classical RK4 for the rescaled equation with snapshots every ``snapshot_stride`` steps.

    The final state is always recorded.  Blow-up stops the run and is reported
    on the returned trajectory rather than raised.
    """
    if not u0.is_finite():
        raise ValueError("initial data is not finite")
    traj = Trajectory()
    n_steps = cfg.n_steps
    grid = u0.grid
    for step, t, uhat, bad in march(u0, coeffs, cfg):
        if bad:
            traj.blown_up = True
            traj.blowup_time = t
            break
        if step % cfg.snapshot_stride == 0 or step == n_steps:
            traj.times.append(t)
            traj.states.append(Field.from_spectrum(grid, uhat.copy()))
    return traj


# -- characteristics ----------------------------------------------------------


def characteristic_step(y: np.ndarray, grid: TorusGrid, spec_a: np.ndarray,
                        spec_b: np.ndarray, h: float) -> np.ndarray:
    """One RK4 step of dy/dt = u(t, y) with u linear in time between two spectra."""
    spec_mid = 0.5 * (spec_a + spec_b)
    k1 = OffgridEvaluator(grid, y).evaluate_spectra(spec_a)
    k2 = OffgridEvaluator(grid, y + 0.5 * h * k1).evaluate_spectra(spec_mid)
    k3 = OffgridEvaluator(grid, y + 0.5 * h * k2).evaluate_spectra(spec_mid)
    k4 = OffgridEvaluator(grid, y + h * k3).evaluate_spectra(spec_b)
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def characteristic_step_with_gradient(y, y_xi, grid: TorusGrid, spec_a, spec_b, h, spec_mid=None):
    """RK4 step of the coupled system dy/dt = u(t, y), d(y_xi)/dt = u_x(t, y) y_xi.

    ``spec_mid`` is the state at the half step; the linear interpolant is used if omitted.
    """
    ik = derivative_symbol(grid)
    if spec_mid is None:
        spec_mid = 0.5 * (spec_a + spec_b)
    pairs = [np.vstack([s, ik * s]) for s in (spec_a, spec_mid, spec_b)]

    def f(yy, g, pair):
        u, ux = OffgridEvaluator(grid, yy).evaluate_spectra(pair)
        return u, ux * g

    a1, b1 = f(y, y_xi, pairs[0])
    a2, b2 = f(y + 0.5 * h * a1, y_xi + 0.5 * h * b1, pairs[1])
    a3, b3 = f(y + 0.5 * h * a2, y_xi + 0.5 * h * b2, pairs[1])
    a4, b4 = f(y + h * a3, y_xi + h * b3, pairs[2])
    return (y + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
            y_xi + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4))


def _substeps(traj: Trajectory, substeps: int):
    for a in range(len(traj.times) - 1):
        sa = traj.states[a].spectrum
        sb = traj.states[a + 1].spectrum
        h = (traj.times[a + 1] - traj.times[a]) / substeps
        for s in range(substeps):
            wa, wb = 1.0 - s / substeps, s / substeps
            wc, wd = 1.0 - (s + 1) / substeps, (s + 1) / substeps
            yield a, s, wa * sa + wb * sb, wc * sa + wd * sb, h


def flow_map(traj: Trajectory, xi: Sequence[float], substeps: int = 1) -> np.ndarray:
    """Positions ``y(t, xi)`` at every snapshot time, shape ``(len(times), len(xi))``.

    Positions are not reduced modulo the period.
    """
    y = np.array(xi, dtype=float).ravel()
    out = [y.copy()]
    grid = traj.grid
    for a, s, sa, sb, h in _substeps(traj, substeps):
        y = characteristic_step(y, grid, sa, sb, h)
        if s == substeps - 1:
            out.append(y.copy())
    return np.array(out)


def periodic_gradient(displacement: np.ndarray) -> np.ndarray:
    """d/dxi of xi + displacement(xi) for a displacement sampled on a uniform periodic grid."""
    m = displacement.shape[-1]
    spec = np.fft.rfft(displacement, axis=-1)
    k = np.arange(m // 2 + 1, dtype=float)
    sym = 1j * k
    sym[-1] = 0.0
    return 1.0 + np.fft.irfft(sym * spec, m, axis=-1)


@dataclass
class FlowGradient:
    times: list
    y_xi: np.ndarray
    y_xi_min: float
    y_xi_max: float


def uniform_xi(m: int) -> np.ndarray:
    return TWO_PI * np.arange(m) / m


def flow_gradient(traj: Trajectory, xi_grid: Sequence[float], substeps: int = 1) -> FlowGradient:
    """Spectral y_xi from the periodic part y(t, xi) - xi on a uniform xi grid."""
    xi = np.asarray(xi_grid, dtype=float)
    m = xi.size
    if m < 4 or not np.allclose(np.diff(xi), TWO_PI / m, rtol=0, atol=1e-12):
        raise ValueError("xi_grid must be a uniform grid covering one period")
    y = flow_map(traj, xi, substeps=substeps)
    y_xi = periodic_gradient(y - xi)
    return FlowGradient(times=list(traj.times), y_xi=y_xi,
                        y_xi_min=float(y_xi.min()), y_xi_max=float(y_xi.max()))


def flow_gradient_variational(traj: Trajectory, xi: Sequence[float], substeps: int = 1) -> np.ndarray:
    """y_xi at every snapshot from d(y_xi)/dt = u_x(t, y) y_xi, shape ``(len(times), len(xi))``."""
    y = np.array(xi, dtype=float).ravel()
    g = np.ones_like(y)
    out = [g.copy()]
    grid = traj.grid
    for a, s, sa, sb, h in _substeps(traj, substeps):
        y, g = characteristic_step_with_gradient(y, g, grid, sa, sb, h)
        if s == substeps - 1:
            out.append(g.copy())
    return np.array(out)
