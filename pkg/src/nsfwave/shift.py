"""Weight function, contraction constant M and the shift ODE for the viscous shock."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gas import EndStates, GasParams
from .profiles.shock import ShockProfile


@dataclass(frozen=True)
class WeightFn:
    """a(xi) = 1 + (lambda/delta_S)(v^S(xi) - v^*), increasing from 1 to 1 + lambda."""

    lam: float
    profile: ShockProfile
    delta_S: float

    @classmethod
    def default(cls, profile: ShockProfile, lam: float | None = None) -> "WeightFn":
        d = profile.delta_S
        return cls(math.sqrt(d) if lam is None else lam, profile, d)

    def _slope(self) -> float:
        return self.lam / self.delta_S if self.delta_S > 0 else 0.0

    def value(self, xi):
        v = self.profile.evaluate(np.asarray(xi, dtype=float))[0]
        return 1.0 + self._slope() * (v - self.profile.left.v)

    def derivative(self, xi):
        """a'(xi) = (lambda/delta_S) v^S_xi."""
        return self._slope() * self.profile.evaluate(np.asarray(xi, dtype=float))[3]

    def from_shock_values(self, vS, dvS):
        s = self._slope()
        return 1.0 + s * (vS - self.profile.left.v), s * dvS


def weight_a(weight: WeightFn, xi):
    return weight.value(xi)


def alpha_star(gas: GasParams, ends: EndStates) -> float:
    """alpha^* = gamma (gamma+1) p^* / (2 (v^*)^2 sigma^*)."""
    ss = ends.starstar
    p = gas.R * ss.theta / ss.v
    return gas.gamma * (gas.gamma + 1.0) * p / (2.0 * ss.v ** 2 * ends.sigma_star)


def _bracket(gas: GasParams) -> float:
    return 1.0 + 2.0 * gas.kappa * (gas.gamma - 1.0) ** 2 / (gas.mu * gas.R * gas.gamma)


def m_constant(gas: GasParams, ends: EndStates) -> float:
    """M = 3/(2 sigma*^2) alpha^* (1 + 2 kappa (gamma-1)^2/(mu R gamma))."""
    return 1.5 / ends.sigma_star ** 2 * alpha_star(gas, ends) * _bracket(gas)


def m_constant_alt(gas: GasParams, ends: EndStates) -> float:
    """Alternative normalization gamma(gamma+1)p^*/(2 v*^2 sigma*^3)(...), which is 2/3 of :func:`m_constant`."""
    return alpha_star(gas, ends) / ends.sigma_star ** 2 * _bracket(gas)


@dataclass
class ShiftState:
    X: float = 0.0
    Xdot: float = 0.0
    history: list = field(default_factory=list)

    def record(self, t: float) -> None:
        self.history.append((t, self.X, self.Xdot))


def shift_integrand(gas: GasParams, v, u, theta, vbar, ubar, thetabar, shock_vals, weight: WeightFn):
    vS, _, _, dvS, duS, dthS = shock_vals
    a, _ = weight.from_shock_values(vS, dvS)
    pbar = gas.R * thetabar / vbar
    return a * (duS * (u - ubar)
                + gas.cv * dthS / thetabar * (theta - thetabar)
                + pbar * dvS / vbar * (v - vbar))


def shift_rhs_from_values(gas, v, u, theta, abar, weight: WeightFn, M: float, h: float) -> float:
    """Xdot from field values and an already evaluated ansatz (same grid, same X)."""
    if weight.delta_S <= 0:
        return 0.0
    f = shift_integrand(gas, v, u, theta, abar.vbar, abar.ubar, abar.thetabar,
                        abar.parts["shock"], weight)
    return -M / weight.delta_S * float(np.trapezoid(f, dx=h))


def shift_rhs(gas: GasParams, field, ansatz, weight: WeightFn, M: float, X: float, t: float,
              xi=None) -> float:
    """Right-hand side of the shift ODE for ``field`` against the ansatz shifted by ``X``.

    ``field`` exposes ``v``, ``u``, ``theta`` sampled on the uniform grid ``xi``
    (taken from ``field.xi`` when omitted).
    """
    xi = np.asarray(field.xi if xi is None else xi, dtype=float)
    abar = ansatz.evaluate(t, xi, X)
    return shift_rhs_from_values(gas, field.v, field.u, field.theta, abar, weight, M, xi[1] - xi[0])
