"""Method-of-lines solver for the Navier-Stokes-Fourier system in the shock-moving frame.

The unknowns (v, u, theta) live on a uniform grid in xi = x - sigma t.  The
temperature equation is discretized in non-divergence form with conservative
half-point viscous fluxes.  Time stepping is classical RK4 on the augmented
state (v, u, theta, X) so the shift ODE is advanced with the field.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ansatz import AnsatzEval, CompositeAnsatz
from .exceptions import (BoundaryContaminationError, DomainError, PositivityError,
                         PreconditionError)
from .gas import GasParams, lambda1
from .shift import ShiftState, WeightFn, m_constant, shift_rhs_from_values


@dataclass(frozen=True)
class Grid:
    xi_min: float
    xi_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise DomainError(f"grid needs at least 16 points, got {self.n}")
        if not self.xi_max > self.xi_min:
            raise DomainError("xi_max must exceed xi_min")

    @classmethod
    def from_spacing(cls, xi_min: float, xi_max: float, h: float) -> "Grid":
        n = int(round((xi_max - xi_min) / h)) + 1
        return cls(xi_min, xi_min + (n - 1) * h, n)

    @property
    def h(self) -> float:
        return (self.xi_max - self.xi_min) / (self.n - 1)

    @property
    def xi(self) -> np.ndarray:
        return np.linspace(self.xi_min, self.xi_max, self.n)


@dataclass
class Field:
    v: np.ndarray
    u: np.ndarray
    theta: np.ndarray
    t: float = 0.0

    def copy(self) -> "Field":
        return Field(self.v.copy(), self.u.copy(), self.theta.copy(), self.t)

    def check_positive(self) -> None:
        if not (np.all(np.isfinite(self.v)) and np.all(np.isfinite(self.u))
                and np.all(np.isfinite(self.theta))):
            raise PositivityError(f"non-finite values at t={self.t}", snapshot=self.copy())
        if self.v.min() <= 0 or self.theta.min() <= 0:
            raise PositivityError(
                f"positivity lost at t={self.t}: min v={self.v.min():.3e}, "
                f"min theta={self.theta.min():.3e}", snapshot=self.copy())


@dataclass(frozen=True)
class Perturbation:
    """Gaussian bumps amplitude * exp(-(xi - center)^2 / width^2) added per component."""

    amplitude: tuple = (0.0, 0.0, 0.0)
    center: float = 0.0
    width: float = 5.0

    def __post_init__(self):
        if len(self.amplitude) != 3:
            raise PreconditionError("perturbation amplitude must have three components")
        if not self.width > 0:
            raise PreconditionError("perturbation width must be positive")

    def profile(self, xi) -> np.ndarray:
        return np.exp(-((np.asarray(xi) - self.center) / self.width) ** 2)

    def h1_norm_exact(self) -> float:
        """Closed-form H^1 norm over the line: |A| (pi/2)^(1/4) sqrt(w) sqrt(1 + 1/w^2)."""
        w = self.width
        a = math.sqrt(sum(x * x for x in self.amplitude))
        return a * (math.pi / 2.0) ** 0.25 * math.sqrt(w) * math.sqrt(1.0 + 1.0 / w ** 2)


@dataclass(frozen=True)
class SolverConfig:
    cfl_hyp: float = 0.4
    cfl_diff: float = 0.4
    T_end: float = 1.0
    output_every: float = 1.0
    perturbation: Perturbation = field(default_factory=Perturbation)
    dt_fixed: float | None = None
    boundary_tol: float = 1e-6
    track_shift: bool = True

    def __post_init__(self):
        for name in ("cfl_hyp", "cfl_diff"):
            c = getattr(self, name)
            if not 0 < c <= 1:
                raise PreconditionError(f"{name} must lie in (0, 1], got {c}")
        if not self.T_end > 0:
            raise PreconditionError("T_end must be positive")
        if not self.output_every > 0:
            raise PreconditionError("output_every must be positive")
        if self.dt_fixed is not None and not self.dt_fixed > 0:
            raise PreconditionError("dt_fixed must be positive")


def perturbation_h1_norm(pert: Perturbation, grid: Grid) -> float:
    """H^1 norm of the Gaussian perturbation by trapezoid quadrature on ``grid``."""
    xi = grid.xi
    g = pert.profile(xi)
    dg = -2.0 * (xi - pert.center) / pert.width ** 2 * g
    a2 = sum(x * x for x in pert.amplitude)
    return math.sqrt(a2 * np.trapezoid(g * g + dg * dg, dx=grid.h))


def initial_data(ansatz: CompositeAnsatz, grid: Grid, perturbation: Perturbation) -> Field:
    """Ansatz at t = 0, X = 0 plus the Gaussian perturbation."""
    xi = grid.xi
    a = ansatz.evaluate(0.0, xi, 0.0)
    g = perturbation.profile(xi)
    av, au, at = perturbation.amplitude
    f = Field(a.vbar + av * g, a.ubar + au * g, a.thetabar + at * g, 0.0)
    f.check_positive()
    return f


def rhs(gas: GasParams, fld: Field, sigma: float, grid: Grid):
    """Semi-discrete right-hand side (dv, du, dtheta); boundary rows are zero."""
    v, u, th = fld.v, fld.u, fld.theta
    h = grid.h
    if v.min() <= 0 or th.min() <= 0:
        raise PositivityError(f"positivity lost at t={fld.t}", snapshot=fld.copy())
    p = gas.R * th / v
    inv2h = 0.5 / h
    vx = (v[2:] - v[:-2]) * inv2h
    ux = (u[2:] - u[:-2]) * inv2h
    thx = (th[2:] - th[:-2]) * inv2h
    px = (p[2:] - p[:-2]) * inv2h
    vhalf = 0.5 * (v[1:] + v[:-1])
    fu = gas.mu * (u[1:] - u[:-1]) / (h * vhalf)
    fth = gas.kappa * (th[1:] - th[:-1]) / (h * vhalf)
    vi = v[1:-1]
    dv = np.zeros_like(v)
    du = np.zeros_like(u)
    dth = np.zeros_like(th)
    dv[1:-1] = sigma * vx + ux
    du[1:-1] = sigma * ux - px + (fu[1:] - fu[:-1]) / h
    dth[1:-1] = sigma * thx + (-p[1:-1] * ux + (fth[1:] - fth[:-1]) / h
                               + gas.mu * ux * ux / vi) / gas.cv
    return dv, du, dth


def stable_dt(gas: GasParams, fld: Field, sigma: float, grid: Grid, config: SolverConfig) -> float:
    if config.dt_fixed is not None:
        return config.dt_fixed
    h = grid.h
    lam = np.sqrt(gas.gamma * gas.R * fld.theta) / fld.v
    dt_hyp = config.cfl_hyp * h / (float(np.max(lam)) + abs(sigma))
    dt_diff = config.cfl_diff * h * h * float(np.min(fld.v)) / max(gas.mu, gas.kappa / gas.cv)
    return min(dt_hyp, dt_diff)


def auto_domain(ansatz: CompositeAnsatz, T: float, h: float = 0.1, tol: float = 1e-8,
                margin: float = 50.0) -> Grid:
    """Domain covering the waves up to time T with quiet far-field ends.

    The left end is -(|lambda_1(minus)| + sigma) T - margin - 4 sqrt(D T),
    where D = max(mu, kappa/c_v)/v_- bounds the diffusivity, so the diffusive
    front of left-going signals stays inside.  Both ends also clear the slowly
    decaying tails of the viscous shock: they sit ``margin`` beyond the points
    where the profile is within ``tol`` of its end states.
    """
    gas, ends = ansatz.gas, ansatz.ends
    lam = abs(float(lambda1(gas, ends.minus.v, ends.minus.theta)))
    diff = max(gas.mu, gas.kappa / gas.cv) / min(ends.minus.v, ends.star.v)
    left = -(lam + ends.sigma) * T - margin - 4.0 * math.sqrt(diff * T)
    right = margin
    sh = ansatz.shock
    if sh.delta_S > 0:
        def dev(state):
            return np.maximum.reduce([np.abs(sh.vS - state.v), np.abs(sh.uS - state.u),
                                      np.abs(sh.thetaS - state.theta)])
        above = np.nonzero(dev(sh.right) >= tol)[0]
        if above.size:
            right = max(right, float(sh.xi[above[-1]]) + margin)
        above = np.nonzero(dev(sh.left) >= tol)[0]
        if above.size:
            left = min(left, float(sh.xi[above[0]]) - margin)
    return Grid.from_spacing(left, right, h)


def far_field_gap(ansatz: CompositeAnsatz, grid: Grid, t: float, X: float = 0.0) -> float:
    """Largest deviation of the ansatz from the far-field states at the grid ends."""
    a = ansatz.evaluate(t, np.array([grid.xi_min, grid.xi_max]), X)
    m, p = ansatz.ends.minus, ansatz.ends.plus
    return max(abs(a.vbar[0] - m.v), abs(a.ubar[0] - m.u), abs(a.thetabar[0] - m.theta),
               abs(a.vbar[1] - p.v), abs(a.ubar[1] - p.u), abs(a.thetabar[1] - p.theta))


class Stepper:
    """RK4 integrator for the augmented state (v, u, theta, X) on a fixed grid."""

    def __init__(self, gas: GasParams, ansatz: CompositeAnsatz, grid: Grid,
                 weight: WeightFn | None = None, M: float | None = None,
                 track_shift: bool = True):
        self.gas = gas
        self.ansatz = ansatz
        self.grid = grid
        self.xi = grid.xi
        self.sigma = ansatz.sigma
        self.weight = weight if weight is not None else WeightFn.default(ansatz.shock)
        self.M = M if M is not None else m_constant(gas, ansatz.ends)
        self.track_shift = track_shift and ansatz.shock.delta_S > 0
        m, p = ansatz.ends.minus, ansatz.ends.plus
        self._left = (m.v, m.u, m.theta)
        self._right = (p.v, p.u, p.theta)
        self._cache: dict = {}

    def moving(self, t: float):
        """Rarefaction and contact evaluations, memoized on the last few stage times."""
        hit = self._cache.get(t)
        if hit is None:
            hit = self.ansatz.eval_moving(t, self.xi)
            if len(self._cache) > 4:
                self._cache.pop(next(iter(self._cache)))
            self._cache[t] = hit
        return hit

    def ansatz_at(self, t: float, X: float) -> AnsatzEval:
        return self.ansatz.combine(self.moving(t), self.ansatz.shock.evaluate(self.xi - X))

    def pin(self, fld: Field) -> None:
        fld.v[0], fld.u[0], fld.theta[0] = self._left
        fld.v[-1], fld.u[-1], fld.theta[-1] = self._right

    def shock_window(self, X: float) -> slice:
        """Grid slice covering the tabulated shock profile shifted by X."""
        pxi = self.ansatz.shock.xi
        i0 = max(int(np.searchsorted(self.xi, X + pxi[0])) - 1, 0)
        i1 = min(int(np.searchsorted(self.xi, X + pxi[-1])) + 1, self.grid.n)
        return slice(i0, i1)

    def xdot(self, fld: Field, X: float) -> float:
        """Shift rate; the integrand vanishes where the shock derivatives do."""
        if not self.track_shift:
            return 0.0
        sl = self.shock_window(X)
        if sl.stop - sl.start < 2:
            return 0.0
        moving = tuple(tuple(a[sl] for a in part) for part in self.moving(fld.t))
        abar = self.ansatz.combine(moving, self.ansatz.shock.evaluate(self.xi[sl] - X))
        return shift_rhs_from_values(self.gas, fld.v[sl], fld.u[sl], fld.theta[sl], abar,
                                     self.weight, self.M, self.grid.h)

    def stage(self, fld: Field, X: float):
        fld.check_positive()
        return rhs(self.gas, fld, self.sigma, self.grid), self.xdot(fld, X)

    def step(self, fld: Field, shift: ShiftState, dt: float) -> tuple[Field, ShiftState]:
        t0, X0 = fld.t, shift.X

        def shifted(k, c):
            f = Field(fld.v + c * k[0][0], fld.u + c * k[0][1], fld.theta + c * k[0][2], t0 + c)
            self.pin(f)
            return f, X0 + c * k[1]

        k1 = self.stage(fld, X0)
        f2, X2 = shifted(k1, 0.5 * dt)
        k2 = self.stage(f2, X2)
        f3, X3 = shifted(k2, 0.5 * dt)
        k3 = self.stage(f3, X3)
        f4, X4 = shifted(k3, dt)
        k4 = self.stage(f4, X4)
        w = dt / 6.0
        new = Field(
            fld.v + w * (k1[0][0] + 2 * k2[0][0] + 2 * k3[0][0] + k4[0][0]),
            fld.u + w * (k1[0][1] + 2 * k2[0][1] + 2 * k3[0][1] + k4[0][1]),
            fld.theta + w * (k1[0][2] + 2 * k2[0][2] + 2 * k3[0][2] + k4[0][2]),
            t0 + dt,
        )
        self.pin(new)
        new.check_positive()
        X1 = X0 + w * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        out = ShiftState(X1, k1[1], shift.history)
        return new, out

    def boundary_gap(self, fld: Field) -> float:
        """Deviation of the first interior cells from the far-field states."""
        lv, lu, lt = self._left
        rv, ru, rt = self._right
        return max(abs(fld.v[1] - lv), abs(fld.u[1] - lu), abs(fld.theta[1] - lt),
                   abs(fld.v[-2] - rv), abs(fld.u[-2] - ru), abs(fld.theta[-2] - rt))


def step(gas: GasParams, fld: Field, sigma: float, grid: Grid, shift_state: ShiftState,
         ansatz: CompositeAnsatz, config: SolverConfig | None = None,
         dt: float | None = None) -> tuple[Field, ShiftState]:
    """One RK4 step of the augmented system; dt defaults to the stability bound."""
    if abs(sigma - ansatz.sigma) > 1e-14:
        raise PreconditionError("sigma must match the ansatz shock speed")
    config = config or SolverConfig()
    st = Stepper(gas, ansatz, grid, track_shift=config.track_shift)
    if dt is None:
        dt = stable_dt(gas, fld, sigma, grid, config)
    return st.step(fld, shift_state, dt)


@dataclass
class RunResult:
    field: Field
    shift: ShiftState
    records: list
    steps: int
    wall_clock: float
    boundary_gap: float
    h1_perturbation: float
    snapshots: dict = field(default_factory=dict)


def run(gas: GasParams, ansatz: CompositeAnsatz, grid: Grid, config: SolverConfig,
        weight: WeightFn | None = None,
        on_output: Callable | None = None,
        snapshot_times: tuple = (),
        max_steps: int | None = None,
        check_boundary: bool = True) -> RunResult:
    """Integrate from the perturbed ansatz to ``config.T_end``.

    ``on_output(stepper, field, shift)`` is called at t = 0 and at every
    multiple of ``output_every``; its return values are collected.  Steps
    are shortened to land exactly on output and snapshot times.
    """
    t_start = time.perf_counter()
    st = Stepper(gas, ansatz, grid, weight=weight, track_shift=config.track_shift)
    fld = initial_data(ansatz, grid, config.perturbation)
    st.pin(fld)
    shift = ShiftState()
    shift.Xdot = st.xdot(fld, 0.0)
    shift.record(0.0)
    records = []
    snapshots = {}
    if on_output is not None:
        records.append(on_output(st, fld, shift))
    stops = sorted(set([k * config.output_every
                        for k in range(1, int(math.floor(config.T_end / config.output_every + 1e-9)) + 1)]
                       + [config.T_end] + [s for s in snapshot_times if 0 < s <= config.T_end]))
    if 0.0 in snapshot_times:
        snapshots[0.0] = fld.copy()
    steps = 0
    worst_boundary = st.boundary_gap(fld)
    for stop in stops:
        while fld.t < stop - 1e-12:
            dt = stable_dt(gas, fld, ansatz.sigma, grid, config)
            if fld.t + dt > stop - 1e-12 * max(1.0, stop):
                dt = stop - fld.t
            fld, shift = st.step(fld, shift, dt)
            steps += 1
            if max_steps is not None and steps >= max_steps:
                break
        fld.t = stop if abs(fld.t - stop) < 1e-9 else fld.t
        shift.Xdot = st.xdot(fld, shift.X)
        shift.record(fld.t)
        gap = st.boundary_gap(fld)
        worst_boundary = max(worst_boundary, gap)
        if check_boundary and gap > config.boundary_tol:
            raise BoundaryContaminationError(
                f"waves reached the domain ends at t={fld.t:.4g} (gap {gap:.3e})")
        if stop in snapshot_times:
            snapshots[stop] = fld.copy()
        is_output = abs(stop / config.output_every - round(stop / config.output_every)) < 1e-9
        if on_output is not None and (is_output or stop == config.T_end):
            records.append(on_output(st, fld, shift))
        if max_steps is not None and steps >= max_steps:
            break
    return RunResult(fld, shift, records, steps, time.perf_counter() - t_start,
                     worst_boundary, perturbation_h1_norm(config.perturbation, grid), snapshots)
