"""Ideal polytropic gas: thermodynamics, wave curves and the R1 + CD2 + S3 Riemann fan.

All routines work in Lagrangian mass coordinates with primitive unknowns
``(v, u, theta)``: specific volume, velocity and temperature.  Pointwise
functions accept floats or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import ConstructionError, DomainError, PreconditionError


@dataclass(frozen=True)
class GasParams:
    """Thermodynamic and transport constants."""

    R: float = 1.0
    gamma: float = 5.0 / 3.0
    mu: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"R must be positive, got {self.R}")
        if not self.gamma > 1:
            raise DomainError(f"gamma must exceed 1, got {self.gamma}")
        if not self.mu > 0:
            raise DomainError(f"mu must be positive, got {self.mu}")
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")

    @property
    def cv(self) -> float:
        """Specific heat at constant volume, R/(gamma-1)."""
        return self.R / (self.gamma - 1.0)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PrimState:
    v: float
    u: float
    theta: float

    def __post_init__(self):
        if not self.v > 0:
            raise DomainError(f"specific volume must be positive, got {self.v}")
        if not self.theta > 0:
            raise DomainError(f"temperature must be positive, got {self.theta}")

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.u, self.theta])


@dataclass(frozen=True)
class WaveStrengths:
    """Volume jumps of the rarefaction, contact and shock."""

    delta_R: float = 0.0
    delta_C: float = 0.0
    delta_S: float = 0.0
    delta_max: float = 0.3

    def __post_init__(self):
        for name in ("delta_R", "delta_C", "delta_S"):
            d = getattr(self, name)
            if not 0.0 <= d <= self.delta_max:
                raise PreconditionError(f"{name}={d} outside [0, {self.delta_max}]")


def _check_positive(v, theta):
    if np.any(np.asarray(v) <= 0):
        raise DomainError("specific volume must be positive")
    if np.any(np.asarray(theta) <= 0):
        raise DomainError("temperature must be positive")


def pressure(gas: GasParams, v, theta):
    _check_positive(v, theta)
    return gas.R * theta / v


def entropy_s(gas: GasParams, v, theta):
    """Physical entropy R/(gamma-1) ln(theta v^(gamma-1)), normalized so s(1, 1) = 0."""
    _check_positive(v, theta)
    return gas.cv * (np.log(theta) + (gas.gamma - 1.0) * np.log(v))


def sound_speed(gas: GasParams, v, theta):
    """Lagrangian sound speed sqrt(gamma p / v)."""
    _check_positive(v, theta)
    return np.sqrt(gas.gamma * gas.R * theta) / v


def lambda1(gas: GasParams, v, theta):
    return -sound_speed(gas, v, theta)


def lambda3(gas: GasParams, v, theta):
    return sound_speed(gas, v, theta)


def isentrope_constant(gas: GasParams, s_bar: float) -> float:
    """K = p v^gamma = R theta v^(gamma-1) on the isentrope of entropy ``s_bar``."""
    return gas.R * math.exp(s_bar / gas.cv)


def riemann_invariant_z1(gas: GasParams, v, u, s_bar: float):
    """1-Riemann invariant u + int^v lambda1 dv' with zero integration constant.

    On the isentrope p v^gamma = K the antiderivative of
    lambda1 = -sqrt(gamma K) v^(-(gamma+1)/2) is
    2 sqrt(gamma K)/(gamma-1) v^(-(gamma-1)/2).
    """
    if np.any(np.asarray(v) <= 0):
        raise DomainError("specific volume must be positive")
    K = isentrope_constant(gas, s_bar)
    g = gas.gamma
    return u + 2.0 * math.sqrt(g * K) / (g - 1.0) * np.power(v, -(g - 1.0) / 2.0)


def rarefaction1_curve(gas: GasParams, right: PrimState, v: float) -> PrimState:
    """State on R1(right) with specific volume ``v`` (requires v <= v_right)."""
    if not 0 < v <= right.v:
        raise PreconditionError(f"R1 curve defined for 0 < v <= v_R={right.v}, got {v}")
    if v == right.v:
        return right
    g = gas.gamma
    theta = right.theta * (right.v / v) ** (g - 1.0)
    s_r = entropy_s(gas, right.v, right.theta)
    z = riemann_invariant_z1(gas, right.v, right.u, s_r)
    u = z - (riemann_invariant_z1(gas, v, 0.0, s_r))
    return PrimState(v, float(u), float(theta))


def contact2_curve(gas: GasParams, right: PrimState, v: float) -> PrimState:
    """State on CD2(right): same velocity and pressure as ``right``."""
    if not v > 0:
        raise DomainError(f"specific volume must be positive, got {v}")
    if v == right.v:
        return right
    p_r = pressure(gas, right.v, right.theta)
    return PrimState(v, right.u, p_r * v / gas.R)


def hugoniot_theta(gas: GasParams, right: PrimState, v):
    """Temperature on the Hugoniot locus of ``right`` at volume ``v``.

    Eliminating u and sigma from the jump relations leaves
    R/(gamma-1)(theta_R - theta) + (p_R + p)/2 (v_R - v) = 0, linear in theta.
    """
    p_r = gas.R * right.theta / right.v
    dv = right.v - v
    denom = gas.cv - 0.5 * gas.R * dv / v
    if np.any(denom <= 0):
        raise ConstructionError("volume beyond the maximal-compression limit of the Hugoniot")
    return (gas.cv * right.theta + 0.5 * p_r * dv) / denom


def shock3_curve(gas: GasParams, right: PrimState, v: float) -> tuple[PrimState, float]:
    """Left state on S3(right) with volume ``v`` and the shock speed sigma > 0."""
    if v == right.v:
        return right, float(lambda3(gas, right.v, right.theta))
    if not 0 < v < right.v:
        raise ConstructionError(f"admissible 3-shock requires 0 < v < v_R={right.v}, got {v}")
    theta = float(hugoniot_theta(gas, right, v))
    p_r = gas.R * right.theta / right.v
    p = gas.R * theta / v
    sigma = math.sqrt(-(p_r - p) / (right.v - v))
    u = right.u + sigma * (right.v - v)
    return PrimState(v, u, theta), sigma


def total_energy(gas: GasParams, u, theta):
    return gas.cv * theta + 0.5 * u * u


def rh_residual(gas: GasParams, left: PrimState, right: PrimState, sigma: float) -> np.ndarray:
    """Left-hand sides of the three Rankine-Hugoniot relations (mass, momentum, energy)."""
    p_l = gas.R * left.theta / left.v
    p_r = gas.R * right.theta / right.v
    e_l = total_energy(gas, left.u, left.theta)
    e_r = total_energy(gas, right.u, right.theta)
    return np.array([
        -sigma * (right.v - left.v) - (right.u - left.u),
        -sigma * (right.u - left.u) + (p_r - p_l),
        -sigma * (e_r - e_l) + (p_r * right.u - p_l * left.u),
    ])


@dataclass(frozen=True)
class EndStates:
    """The four constant states of the generic R1 + CD2 + S3 configuration.

    ``star`` is (v_*, u_*, theta_*) between rarefaction and contact and
    ``starstar`` is (v^*, u^*, theta^*) between contact and shock.
    """

    minus: PrimState
    star: PrimState
    starstar: PrimState
    plus: PrimState
    sigma: float
    sigma_star: float
    p_star_cd: float
    strengths: WaveStrengths

    def to_flat_dict(self) -> dict:
        out = {}
        for name in ("minus", "star", "starstar", "plus"):
            st = getattr(self, name)
            out[f"v_{name}"] = st.v
            out[f"u_{name}"] = st.u
            out[f"theta_{name}"] = st.theta
        out["sigma"] = self.sigma
        out["sigma_star"] = self.sigma_star
        out["p_star_cd"] = self.p_star_cd
        out["delta_R"] = self.strengths.delta_R
        out["delta_C"] = self.strengths.delta_C
        out["delta_S"] = self.strengths.delta_S
        return out

    @classmethod
    def from_flat_dict(cls, d: dict) -> "EndStates":
        states = {
            name: PrimState(d[f"v_{name}"], d[f"u_{name}"], d[f"theta_{name}"])
            for name in ("minus", "star", "starstar", "plus")
        }
        strengths = WaveStrengths(d.get("delta_R", 0.0), d.get("delta_C", 0.0), d.get("delta_S", 0.0))
        return cls(sigma=d["sigma"], sigma_star=d["sigma_star"], p_star_cd=d["p_star_cd"],
                   strengths=strengths, **states)


def build_end_states(gas: GasParams, plus: PrimState, strengths: WaveStrengths,
                     contact_sign: int = 1) -> EndStates:
    """Walk S3, CD2 and R1 backwards from ``plus`` using the prescribed volume jumps.

    ``contact_sign=+1`` puts v_* = v^* - delta_C (cooler left of the contact);
    ``-1`` selects the other branch.
    """
    if contact_sign not in (1, -1):
        raise PreconditionError("contact_sign must be +1 or -1")
    v_ss = plus.v - strengths.delta_S
    if v_ss <= 0:
        raise ConstructionError("nonpositive intermediate volume v^*")
    starstar, sigma = shock3_curve(gas, plus, v_ss)
    v_s = v_ss - contact_sign * strengths.delta_C
    if v_s <= 0:
        raise ConstructionError("nonpositive intermediate volume v_*")
    star = contact2_curve(gas, starstar, v_s)
    v_m = v_s - strengths.delta_R
    if v_m <= 0:
        raise ConstructionError("nonpositive far-field volume v_-")
    minus = rarefaction1_curve(gas, star, v_m)
    sigma_star = float(lambda3(gas, starstar.v, starstar.theta))
    ends = EndStates(minus, star, starstar, plus, sigma, sigma_star,
                     float(pressure(gas, starstar.v, starstar.theta)), strengths)
    return ends


def check_end_states(gas: GasParams, ends: EndStates) -> dict:
    """Evaluate the defining relations of ``ends``; returns a dict of residuals and flags."""
    s_m = float(entropy_s(gas, ends.minus.v, ends.minus.theta))
    s_s = float(entropy_s(gas, ends.star.v, ends.star.theta))
    rh = rh_residual(gas, ends.starstar, ends.plus, ends.sigma)
    lam_plus = float(lambda3(gas, ends.plus.v, ends.plus.theta))
    lam_ss = float(lambda3(gas, ends.starstar.v, ends.starstar.theta))
    shock = ends.strengths.delta_S > 0
    return {
        "rh_residual": float(np.max(np.abs(rh))),
        "contact_u_jump": abs(ends.star.u - ends.starstar.u),
        "contact_p_jump": abs(float(pressure(gas, ends.star.v, ends.star.theta))
                              - float(pressure(gas, ends.starstar.v, ends.starstar.theta))),
        "rarefaction_s_jump": abs(s_m - s_s),
        "rarefaction_z1_jump": abs(float(riemann_invariant_z1(gas, ends.minus.v, ends.minus.u, s_s))
                                   - float(riemann_invariant_z1(gas, ends.star.v, ends.star.u, s_s))),
        "lax": bool((lam_plus < ends.sigma < lam_ss) if shock else True),
    }
