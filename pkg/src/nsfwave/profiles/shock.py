"""Viscous 3-shock profile: heteroclinic orbit of the reduced traveling-wave ODE."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ..exceptions import ConstructionError, ConvergenceError, PreconditionError
from ..gas import GasParams, PrimState, pressure, rh_residual

LAUNCH_OFFSET = 1e-8
ARRIVAL_TOL = 1e-10
TAIL_FLOOR = 1e-14


def shock_ode_rhs(gas: GasParams, plus: PrimState, sigma: float, v, theta):
    """(v', theta') along the viscous 3-shock, xi = x - sigma t.

    Integrating the traveling-wave system once from +infinity gives
        -mu sigma v'/v     = (p - p_+) + sigma^2 (v - v_+)
        -kappa theta'/(sigma v) = R/(gamma-1)(theta - theta_+) + p_+(v - v_+)
                                  - sigma^2 (v - v_+)^2 / 2
    so that v increases from v^* to v_+ across the profile.
    """
    p = gas.R * theta / v
    p_p = gas.R * plus.theta / plus.v
    dv = v - plus.v
    fv = -v * ((p - p_p) + sigma ** 2 * dv) / (gas.mu * sigma)
    ft = -sigma * v * (gas.cv * (theta - plus.theta) + p_p * dv - 0.5 * sigma ** 2 * dv * dv) / gas.kappa
    return fv, ft


def shock_ode_jacobian(gas: GasParams, plus: PrimState, sigma: float, v, theta):
    """Jacobian of :func:`shock_ode_rhs`, shape (..., 2, 2)."""
    v = np.asarray(v, dtype=float)
    theta = np.asarray(theta, dtype=float)
    R, mu, ka = gas.R, gas.mu, gas.kappa
    p_p = R * plus.theta / plus.v
    dv = v - plus.v
    p = R * theta / v
    A = (p - p_p) + sigma ** 2 * dv
    B = gas.cv * (theta - plus.theta) + p_p * dv - 0.5 * sigma ** 2 * dv * dv
    J = np.empty(v.shape + (2, 2))
    # d/dv [-v A/(mu sigma)] with dp/dv = -p/v
    J[..., 0, 0] = -(A + v * (-p / v + sigma ** 2)) / (mu * sigma)
    J[..., 0, 1] = -v * (R / v) / (mu * sigma)
    J[..., 1, 0] = -sigma * (B + v * (p_p - sigma ** 2 * dv)) / ka
    J[..., 1, 1] = -sigma * v * gas.cv / ka
    return J


@dataclass(frozen=True)
class ShockProfile:
    """Sampled viscous shock on a uniform xi grid, phase-normalized so v^S(0) is the midpoint."""

    gas: GasParams
    xi: np.ndarray
    vS: np.ndarray
    uS: np.ndarray
    thetaS: np.ndarray
    dvS: np.ndarray
    duS: np.ndarray
    dthetaS: np.ndarray
    d2vS: np.ndarray
    d2thetaS: np.ndarray
    sigma: float
    left: PrimState
    right: PrimState
    delta_S: float

    @property
    def degenerate(self) -> bool:
        return self.delta_S == 0.0

    def _table(self):
        tab = self.__dict__.get("_tab")
        if tab is None:
            y = np.stack([self.vS, self.thetaS, self.dvS, self.dthetaS])
            dy = np.stack([self.dvS, self.dthetaS, self.d2vS, self.d2thetaS])
            step = (self.xi[-1] - self.xi[0]) / (self.xi.size - 1)
            uniform = bool(np.allclose(np.diff(self.xi), step, rtol=1e-9, atol=0.0))
            tab = (y, dy, step if uniform else None)
            object.__setattr__(self, "_tab", tab)
        return tab

    def _hermite(self, x):
        """Cubic Hermite interpolation of (v, theta, v', theta') at points inside the window.

        Returns an array of shape (4, len(x)).
        """
        y, dy, step = self._table()
        last = self.xi.size - 2
        if step is not None:
            r = (x - self.xi[0]) / step
            k = np.clip(r.astype(np.intp), 0, last)
            s = r - k
            hk = step
        else:
            k = np.clip(np.searchsorted(self.xi, x, side="right") - 1, 0, last)
            hk = self.xi[k + 1] - self.xi[k]
            s = (x - self.xi[k]) / hk
        s2 = s * s
        s3 = s2 * s
        h01 = 3.0 * s2 - 2.0 * s3
        h10 = (s3 - 2.0 * s2 + s) * hk
        h11 = (s3 - s2) * hk
        return ((1.0 - h01) * y.take(k, axis=1) + h01 * y.take(k + 1, axis=1)
                + h10 * dy.take(k, axis=1) + h11 * dy.take(k + 1, axis=1))

    def evaluate(self, xi):
        """(vS, uS, thetaS, dvS, duS, dthetaS) at ``xi``; endpoint states outside the window."""
        xi = np.asarray(xi, dtype=float)
        left, right = self.left, self.right
        if self.degenerate:
            z = np.zeros_like(xi)
            return z + right.v, z + right.u, z + right.theta, z, z.copy(), z.copy()
        lo = xi < self.xi[0]
        hi = xi > self.xi[-1]
        inside = ~(lo | hi)
        v = np.where(lo, left.v, right.v).astype(float)
        th = np.where(lo, left.theta, right.theta).astype(float)
        dv = np.zeros_like(xi)
        dth = np.zeros_like(xi)
        vals = self._hermite(xi[inside])
        v[inside], th[inside], dv[inside], dth[inside] = vals
        u = left.u - self.sigma * (v - left.v)
        du = -self.sigma * dv
        return v, u, th, dv, du, dth

    def evaluate_second(self, xi):
        """Second derivatives (vS'', uS'', thetaS'') at ``xi``."""
        v, _, th, dv, _, dth = self.evaluate(xi)
        J = shock_ode_jacobian(self.gas, self.right, self.sigma, v, th)
        d2v = J[..., 0, 0] * dv + J[..., 0, 1] * dth
        d2t = J[..., 1, 0] * dv + J[..., 1, 1] * dth
        return d2v, -self.sigma * d2v, d2t


def _eig_unstable(J):
    w, V = np.linalg.eig(J)
    w = w.real
    k = int(np.argmax(w))
    vec = V[:, k].real
    if vec[0] < 0:
        vec = -vec
    return w, k, vec / np.linalg.norm(vec)


def _deviation_rhs(gas: GasParams, ref: PrimState, sigma: float, d):
    """Profile ODE written for d = (v - v_r, theta - theta_r) about either end state.

    Both end states satisfy the jump relations, so the integrated system has
    the same form about each; p - p_r is formed without cancellation.
    """
    dv, dth = d[0], d[1]
    v = ref.v + dv
    p_r = gas.R * ref.theta / ref.v
    dp = gas.R * (dth * ref.v - ref.theta * dv) / (v * ref.v)
    fv = -v * (dp + sigma ** 2 * dv) / (gas.mu * sigma)
    ft = -sigma * v * (gas.cv * dth + p_r * dv - 0.5 * sigma ** 2 * dv * dv) / gas.kappa
    return np.array([fv, ft])


def solve_shock_profile(gas: GasParams, left: PrimState, plus: PrimState, sigma: float,
                        xi_half_width: float | None = None, n_samples: int | None = None,
                        dxi: float = 0.05) -> ShockProfile:
    """Integrate the heteroclinic orbit from (v^*, theta^*) to (v_+, theta_+).

    Launches a distance 1e-8 delta_S from the left state along the unstable
    eigenvector and integrates with an adaptive 8th-order Runge-Kutta method
    (rtol 1e-12) until within 1e-10 delta_S of the right state.  The first
    half is carried in deviations from the left state and the second half in
    deviations from the right state, so tails keep full relative accuracy.
    Both tails are then extended with their linearized exponential modes down
    to 1e-14 delta_S and the result is resampled on a uniform grid centered
    at the midpoint volume.
    """
    delta = plus.v - left.v
    if delta < 0:
        raise PreconditionError("3-shock requires v^* < v_+")
    if delta == 0:
        xi = np.array([-1.0, 1.0]) if xi_half_width is None else np.array([-xi_half_width, xi_half_width])
        c = np.ones(2)
        z = np.zeros(2)
        return ShockProfile(gas, xi, plus.v * c, plus.u * c, plus.theta * c, z, z, z, z, z,
                            sigma, plus, plus, 0.0)
    res = rh_residual(gas, left, plus, sigma)
    if np.max(np.abs(res)) > 1e-10:
        raise PreconditionError(f"end states violate Rankine-Hugoniot (residual {np.max(np.abs(res)):.2e})")

    J_l = shock_ode_jacobian(gas, plus, sigma, left.v, left.theta)
    w_l, k_l, e_u = _eig_unstable(J_l)
    if w_l[k_l] <= 0 or np.min(w_l) >= 0:
        raise ConstructionError("left state is not a saddle of the profile ODE")
    rate_l = float(w_l[k_l])
    J_r = shock_ode_jacobian(gas, plus, sigma, plus.v, plus.theta)
    w_r, V_r = np.linalg.eig(J_r)
    w_r, V_r = w_r.real, V_r.real
    if np.max(w_r) >= 0:
        raise ConstructionError("right state is not a sink of the profile ODE")
    k_s = int(np.argmax(w_r))
    rate_r = float(w_r[k_s])  # slow decay toward v_+
    e_s = V_r[:, k_s]

    eps = LAUNCH_OFFSET * delta
    shift = np.array([plus.v - left.v, plus.theta - left.theta])
    budget = 200.0 / min(rate_l, -rate_r) + 100.0
    opts = dict(method="DOP853", rtol=1e-12, atol=1e-30, dense_output=True)

    def at_mid(_, d):
        return d[0] - 0.5 * delta
    at_mid.terminal = True
    sol1 = solve_ivp(lambda _, d: _deviation_rhs(gas, left, sigma, d), (0.0, budget),
                     eps * e_u, events=at_mid, **opts)
    if sol1.status != 1:
        raise ConvergenceError("shock profile did not reach the midpoint volume within the xi budget")
    s_mid = float(sol1.t_events[0][0])
    d_mid = sol1.y_events[0][0] - shift

    def arrive(_, d):
        return np.max(np.abs(d)) - ARRIVAL_TOL * delta
    arrive.terminal = True
    sol2 = solve_ivp(lambda _, d: _deviation_rhs(gas, plus, sigma, d), (s_mid, s_mid + budget),
                     d_mid, events=arrive, **opts)
    if sol2.status != 1:
        raise ConvergenceError("shock profile did not reach the right state within the xi budget")
    s_end = float(sol2.t_events[0][0])
    d_end = sol2.y_events[0][0]

    left_ext = math.log(eps / (TAIL_FLOOR * delta)) / rate_l
    coef = np.linalg.solve(V_r, d_end)
    amp_end = abs(coef[k_s]) * np.max(np.abs(e_s))
    right_ext = max(math.log(amp_end / (TAIL_FLOOR * delta)), 0.0) / (-rate_r)
    if xi_half_width is None:
        xi_half_width = max(s_mid + left_ext, s_end - s_mid + right_ext)
    if n_samples is None:
        n_samples = int(math.ceil(2.0 * xi_half_width / dxi)) + 1
    xi = np.linspace(-xi_half_width, xi_half_width, n_samples)
    s = xi + s_mid

    base_l = np.array([left.v, left.theta])[:, None]
    base_r = np.array([plus.v, plus.theta])[:, None]
    Y = np.empty((2, n_samples))
    dY = np.empty((2, n_samples))
    lo = s < 0.0
    amp = eps * np.exp(rate_l * s[lo])
    Y[:, lo] = base_l + e_u[:, None] * amp
    dY[:, lo] = e_u[:, None] * (rate_l * amp)
    m1 = (s >= 0.0) & (s < s_mid)
    d1 = sol1.sol(s[m1])
    Y[:, m1] = base_l + d1
    dY[:, m1] = _deviation_rhs(gas, left, sigma, d1)
    m2 = (s >= s_mid) & (s <= s_end)
    d2 = sol2.sol(s[m2])
    Y[:, m2] = base_r + d2
    dY[:, m2] = _deviation_rhs(gas, plus, sigma, d2)
    hi = s > s_end
    # the fast mode has died out by the arrival point; keep only the slow one
    amp_r = coef[k_s] * np.exp(rate_r * (s[hi] - s_end))
    Y[:, hi] = base_r + e_s[:, None] * amp_r
    dY[:, hi] = e_s[:, None] * (rate_r * amp_r)

    J = shock_ode_jacobian(gas, plus, sigma, Y[0], Y[1])
    d2v = J[:, 0, 0] * dY[0] + J[:, 0, 1] * dY[1]
    d2t = J[:, 1, 0] * dY[0] + J[:, 1, 1] * dY[1]

    vS, thS = Y
    dvS, dthS = dY
    uS = left.u - sigma * (vS - left.v)
    duS = -sigma * dvS

    if not (np.all(dvS > 0) and np.all(dthS < 0) and np.all(np.diff(vS) >= 0)):
        raise ConstructionError("shock profile lost monotonicity")
    return ShockProfile(gas, xi, vS, uS, thS, dvS, duS, dthS, d2v, d2t,
                        sigma, left, plus, delta)


def shock_profile_eval(profile: ShockProfile, xi):
    return profile.evaluate(xi)


def first_integral_residual(profile: ShockProfile) -> float:
    """max |mu u'/v + sigma (u - u_+) - (p - p_+)| over the samples."""
    gas = profile.gas
    p = pressure(gas, profile.vS, profile.thetaS)
    p_p = gas.R * profile.right.theta / profile.right.v
    r = gas.mu * profile.duS / profile.vS + profile.sigma * (profile.uS - profile.right.u) - (p - p_p)
    return float(np.max(np.abs(r)))


def shock_scaling_report(profile: ShockProfile, gas: GasParams) -> dict:
    """Scaling ratios of the weak-shock estimates, tail decay rate and curvature ratio."""
    if profile.degenerate:
        return {"u_ratio": 0.0, "theta_ratio": 0.0, "tail_rate_left": 0.0,
                "tail_rate_right": 0.0, "second_derivative_ratio": 0.0, "monotone": True}
    left = profile.left
    p_star = gas.R * left.theta / left.v
    sigma_star = math.sqrt(gas.gamma * p_star / left.v)
    dv = profile.dvS
    sup_dv = np.max(np.abs(dv))
    u_ratio = np.max(np.abs(profile.duS + sigma_star * dv)) / sup_dv
    theta_ratio = np.max(np.abs(profile.dthetaS + (gas.gamma - 1.0) * p_star / gas.R * dv)) / sup_dv
    d2 = np.max(np.abs(profile.d2vS)) / (profile.delta_S * sup_dv)

    def tail_rate(mask, dist):
        xs = np.abs(profile.xi[mask])
        ys = np.log(dist[mask])
        if xs.size < 3:
            return float("nan")
        return float(-np.polyfit(xs, ys, 1)[0])

    delta = profile.delta_S
    dev_l = np.abs(profile.vS - left.v)
    dev_r = np.abs(profile.vS - profile.right.v)
    band_l = (profile.xi < 0) & (dev_l < 1e-2 * delta) & (dev_l > 1e-10 * delta)
    band_r = (profile.xi > 0) & (dev_r < 1e-2 * delta) & (dev_r > 1e-10 * delta)
    return {
        "u_ratio": float(u_ratio),
        "theta_ratio": float(theta_ratio),
        "tail_rate_left": tail_rate(band_l, dev_l),
        "tail_rate_right": tail_rate(band_r, dev_r),
        "second_derivative_ratio": float(d2),
        "monotone": bool(np.all(profile.dvS > 0) and np.all(profile.duS < 0)
                         and np.all(profile.dthetaS < 0)),
    }


def sharp_diffusion_coefficient(gas: GasParams, left: PrimState) -> float:
    """sigma^* alpha^* mu R gamma / (mu R gamma + kappa (gamma-1)^2) at the state ``left`` = (v^*, theta^*)."""
    p_star = gas.R * left.theta / left.v
    sigma_alpha = gas.gamma * (gas.gamma + 1.0) * p_star / (2.0 * left.v ** 2)
    mrg = gas.mu * gas.R * gas.gamma
    return sigma_alpha * mrg / (mrg + gas.kappa * (gas.gamma - 1.0) ** 2)


def chord_difference(profile: ShockProfile, band: float = 0.01):
    """(p^S-p_+)/(v^S-v_+) - (p^S-p^*)/(v^S-v^*) on samples away from both end states."""
    gas = profile.gas
    left, right = profile.left, profile.right
    p = gas.R * profile.thetaS / profile.vS
    p_p = gas.R * right.theta / right.v
    p_s = gas.R * left.theta / left.v
    dv_r = profile.vS - right.v
    dv_l = profile.vS - left.v
    mask = (np.abs(dv_r) > band * profile.delta_S) & (np.abs(dv_l) > band * profile.delta_S)
    return profile.xi[mask], (p[mask] - p_p) / dv_r[mask] - (p[mask] - p_s) / dv_l[mask]


def check_sharp_diffusion(gas: GasParams, plus: PrimState, delta_list) -> dict:
    """Chord-difference scaling against the closed-form diffusion constant, per delta_S.

    ``limit`` is the constant evaluated at ``plus`` (the delta_S -> 0 value);
    ``coeff`` uses the actual left state (v^*, theta^*) and ``scaled_deviation``
    is max_xi |chord - coeff delta_S| / delta_S^2, which must stay bounded.
    """
    from ..gas import WaveStrengths, build_end_states

    limit = sharp_diffusion_coefficient(gas, plus)
    rows = []
    for d in delta_list:
        ends = build_end_states(gas, plus, WaveStrengths(delta_S=d, delta_max=max(d, 0.3)))
        prof = solve_shock_profile(gas, ends.starstar, plus, ends.sigma)
        coeff = sharp_diffusion_coefficient(gas, ends.starstar)
        xi, chord = chord_difference(prof)
        mid = chord[int(np.argmin(np.abs(xi)))] / d
        rows.append({
            "delta_S": d,
            "limit": limit,
            "coeff": coeff,
            "chord_over_delta": float(mid),
            "rel_error": float(abs(mid - limit) / limit),
            "scaled_deviation": float(np.max(np.abs(chord - coeff * d)) / d ** 2),
        })
    errs = [r["rel_error"] for r in rows]
    return {"rows": rows, "limit": limit,
            "monotone_error": bool(all(a > b for a, b in zip(errs, errs[1:])))}
