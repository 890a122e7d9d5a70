"""Smooth approximate 1-rarefaction built from a tanh-initialized Burgers solution."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..gas import (EndStates, GasParams, PrimState, entropy_s, isentrope_constant,
                   lambda1, riemann_invariant_z1)
from ..exceptions import DomainError


def _characteristic_foot(w_minus, w_star, t, x):
    """Solve x = x0 + w0(x0) t for x0 (safeguarded Newton, vectorized).

    Far outside the fan tanh(x0) rounds to +-1 and x0 = x - w t is exact, so
    only the remaining points are iterated.  Newton steps leaving the current
    bracket fall back to bisection.
    """
    mid = 0.5 * (w_star + w_minus)
    half = 0.5 * (w_star - w_minus)
    x = np.asarray(x, dtype=float)
    if half * t == 0:
        return x - mid * t
    with np.errstate(over="ignore"):
        # for tiny t only the sign of g matters
        g = (x - mid * t) / (half * t)
    outer = x - np.where(g > 0, w_star, w_minus) * t
    x0 = outer.ravel().copy()
    idx = np.nonzero(~((np.abs(outer) > 20.0) & (np.sign(outer) == np.sign(g))).ravel())[0]
    xr = np.broadcast_to(x, outer.shape).ravel()[idx]
    gi = np.clip(g.ravel()[idx], -1.0 + 1e-15, 1.0 - 1e-15)
    # start from whichever asymptotic foot fits better: inside the fan
    # x0 ~ atanh((x/t - mid)/half), outside it x0 ~ x - w t
    fan = np.arctanh(gi)
    out_i = x0[idx]
    f_fan = np.abs(fan + (mid + half * np.tanh(fan)) * t - xr)
    f_out = np.abs(out_i + (mid + half * np.tanh(out_i)) * t - xr)
    lo = xr - max(w_star, w_minus) * t - 1.0
    hi = xr - min(w_star, w_minus) * t + 1.0
    cur = np.clip(np.where(f_fan < f_out, fan, out_i), lo, hi)
    act = np.arange(idx.size)
    for _ in range(200):
        xa, la, ha, xs = cur[act], lo[act], hi[act], xr[act]
        th = np.tanh(xa)
        f = xa + (mid + half * th) * t - xs
        la = np.where(f < 0, xa, la)
        ha = np.where(f > 0, xa, ha)
        step = xa - f / (1.0 + half * (1.0 - th * th) * t)
        new = np.where((step < la) | (step > ha), 0.5 * (la + ha), step)
        cur[act], lo[act], hi[act] = new, la, ha
        # stop on a converged step or a residual already at roundoff level
        busy = (np.abs(new - xa) > 1e-15 * (1.0 + np.abs(xa))) & (
            np.abs(f) > 4e-16 * (1.0 + np.abs(xs) + np.abs(xa) + abs(mid) * t))
        act = act[busy]
        if act.size == 0:
            break
    x0[idx] = cur
    return x0.reshape(x.shape)


def burgers_smooth(w_minus: float, w_star: float, t: float, x):
    """Smooth Burgers solution with data (w_* + w_-)/2 + (w_* - w_-)/2 tanh(x).

    Solves x = x0 + w0(x0) t for the foot x0 of the characteristic through
    (t, x).  The map is strictly increasing, so a bracketed Newton iteration
    converges for every x.
    """
    xa = np.asarray(x, dtype=float)
    x0 = _characteristic_foot(w_minus, w_star, t, xa)
    w = 0.5 * (w_star + w_minus) + 0.5 * (w_star - w_minus) * np.tanh(x0)
    return w if xa.ndim else float(w)


def burgers_smooth_x(w_minus: float, w_star: float, t: float, x):
    """Return (w, w_x) for :func:`burgers_smooth`; w_x = w0'(x0)/(1 + w0'(x0) t)."""
    xa = np.asarray(x, dtype=float)
    half = 0.5 * (w_star - w_minus)
    x0 = _characteristic_foot(w_minus, w_star, t, xa)
    th = np.tanh(x0)
    w = 0.5 * (w_star + w_minus) + half * th
    e = np.exp(-2.0 * np.abs(x0))
    w0p = half * 4.0 * e / (1.0 + e) ** 2
    return w, w0p / (1.0 + w0p * t)


@dataclass(frozen=True)
class RarefactionWave:
    gas: GasParams
    w_minus: float
    w_star: float
    s_bar: float
    z_bar: float
    minus: PrimState
    star: PrimState

    @classmethod
    def from_end_states(cls, gas: GasParams, ends: EndStates) -> "RarefactionWave":
        m, s = ends.minus, ends.star
        s_bar = float(entropy_s(gas, s.v, s.theta))
        return cls(
            gas=gas,
            w_minus=float(lambda1(gas, m.v, m.theta)),
            w_star=float(lambda1(gas, s.v, s.theta)),
            s_bar=s_bar,
            z_bar=float(riemann_invariant_z1(gas, s.v, s.u, s_bar)),
            minus=m,
            star=s,
        )

    @property
    def K(self) -> float:
        return isentrope_constant(self.gas, self.s_bar)

    @property
    def delta_R(self) -> float:
        return abs(self.star.v - self.minus.v)

    def states_from_speed(self, w):
        """Invert lambda1 = w on the isentrope: v = (gamma K / w^2)^(1/(gamma+1))."""
        g = self.gas.gamma
        K = self.K
        w = np.asarray(w, dtype=float)
        v = (g * K / (w * w)) ** (1.0 / (g + 1.0))
        theta = K / (self.gas.R * v ** (g - 1.0))
        u = self.z_bar - 2.0 * math.sqrt(g * K) / (g - 1.0) * v ** (-(g - 1.0) / 2.0)
        return v, u, theta

    def evaluate(self, t: float, x):
        """Values and x-derivatives of the smooth approximate rarefaction at (t, x).

        Returns ``(v, u, theta, v_x, u_x, theta_x)``.  Derivatives follow from
        w_x through dv/dw = -2 v / ((gamma+1) w), u_x = c v^{-(gamma+1)/2} v_x
        and theta_x = -(gamma-1) theta v_x / v.
        """
        g = self.gas.gamma
        if self.w_minus == self.w_star:
            x = np.asarray(x, dtype=float)
            s = self.star
            z = np.zeros_like(x)
            return z + s.v, z + s.u, z + s.theta, z, z.copy(), z.copy()
        w, wx = burgers_smooth_x(self.w_minus, self.w_star, 1.0 + t, x)
        v, u, theta = self.states_from_speed(w)
        vx = -2.0 * v / ((g + 1.0) * w) * wx
        ux = math.sqrt(g * self.K) * v ** (-(g + 1.0) / 2.0) * vx
        thetax = -(g - 1.0) * theta / v * vx
        return v, u, theta, vx, ux, thetax


def approx_rarefaction(gas: GasParams, wave: RarefactionWave, t: float, x):
    """(v^R, u^R, theta^R) at (t, x); a PrimState for scalar ``x``, arrays otherwise."""
    if t < 0:
        raise DomainError("time must be nonnegative")
    v, u, theta = wave.evaluate(t, x)[:3]
    if np.ndim(x) == 0:
        return PrimState(float(v), float(u), float(theta))
    return v, u, theta


def exact_rarefaction_fan(gas: GasParams, wave: RarefactionWave, t: float, x):
    """Self-similar inviscid 1-rarefaction fan at (t, x), t > 0."""
    if not t > 0:
        raise DomainError("the rarefaction fan is defined for t > 0")
    x = np.asarray(x, dtype=float)
    if wave.w_minus == wave.w_star:
        w = np.full_like(x, wave.w_star)
    else:
        w = np.clip(x / t, wave.w_minus, wave.w_star)
    v, u, theta = wave.states_from_speed(w)
    if x.ndim == 0:
        return PrimState(float(v), float(u), float(theta))
    return v, u, theta
