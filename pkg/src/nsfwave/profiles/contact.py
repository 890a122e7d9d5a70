"""Viscous contact wave from the self-similar nonlinear diffusion profile."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.linalg import solve_banded

from ..exceptions import ConvergenceError, DomainError
from ..gas import EndStates, GasParams


def contact_diffusivity(gas: GasParams, p_star: float) -> float:
    """a_c = (gamma-1) kappa p_* / (R^2 gamma)."""
    return (gas.gamma - 1.0) * gas.kappa * p_star / (gas.R ** 2 * gas.gamma)


def _d1_4(p, h):
    """First derivative: fourth-order centered stencil, second order next to the ends."""
    d = np.empty_like(p)
    d[2:-2] = (p[:-4] - 8.0 * p[1:-3] + 8.0 * p[3:-1] - p[4:]) / (12.0 * h)
    d[1] = (p[2] - p[0]) / (2.0 * h)
    d[-2] = (p[-1] - p[-3]) / (2.0 * h)
    d[0] = (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * h)
    d[-1] = (3.0 * p[-1] - 4.0 * p[-2] + p[-3]) / (2.0 * h)
    return d


def _d2_4(p, h):
    d = np.zeros_like(p)
    d[2:-2] = (-p[:-4] + 16.0 * p[1:-3] - 30.0 * p[2:-2] + 16.0 * p[3:-1] - p[4:]) / (12.0 * h * h)
    d[1] = (p[2] - 2.0 * p[1] + p[0]) / h ** 2
    d[-2] = (p[-1] - 2.0 * p[-2] + p[-3]) / h ** 2
    return d


def _solve_log_profile(eta, phi_l, phi_r, a_c, tol=1e-10, max_iter=200):
    """Damped Newton for a_c phi'' + (eta/2) e^phi phi' = 0 with Dirichlet ends.

    phi = ln(Theta); this is -(eta/2) Theta' = a_c (Theta'/Theta)' rewritten.
    The residual uses fourth-order stencils while the Newton matrix is the
    tridiagonal second-order Jacobian (defect correction).
    Returns (phi, final residual max-norm, iterations).
    """
    n = eta.size
    h = eta[1] - eta[0]
    phi = np.log(np.exp(phi_l) + (np.exp(phi_r) - np.exp(phi_l)) * 0.5 * (1.0 + np.tanh(eta)))
    phi[0], phi[-1] = phi_l, phi_r
    ei = eta[1:-1]

    def residual(p):
        return (a_c * _d2_4(p, h) + 0.5 * eta * np.exp(p) * _d1_4(p, h))[1:-1]

    res = residual(phi)
    rnorm = np.max(np.abs(res)) if res.size else 0.0
    for it in range(max_iter):
        if rnorm < tol:
            return phi, rnorm, it
        e = np.exp(phi[1:-1])
        d1 = (phi[2:] - phi[:-2]) / (2.0 * h)
        ab = np.zeros((3, n - 2))
        ab[1] = -2.0 * a_c / h ** 2 + 0.5 * ei * e * d1
        ab[0, 1:] = (a_c / h ** 2 + 0.25 * ei * e / h)[:-1]
        ab[2, :-1] = (a_c / h ** 2 - 0.25 * ei * e / h)[1:]
        dphi = solve_banded((1, 1), ab, -res)
        step = 1.0
        while True:
            trial = phi.copy()
            trial[1:-1] += step * dphi
            tres = residual(trial)
            tnorm = np.max(np.abs(tres))
            if tnorm < rnorm or step < 1e-4:
                break
            step *= 0.5
        phi, res, rnorm = trial, tres, tnorm
    if rnorm < tol:
        return phi, rnorm, max_iter
    raise ConvergenceError(f"contact BVP Newton did not converge (residual {rnorm:.3e})")


@dataclass(frozen=True)
class ContactProfile:
    """Self-similar temperature profile Theta(eta) on [-L, L] and its evaluators."""

    gas: GasParams
    eta: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    p_star: float
    u_star: float
    a_c: float
    theta_left: float
    theta_right: float
    bvp_residual: float

    @property
    def Theta(self) -> np.ndarray:
        return np.exp(self.phi)

    @property
    def dTheta(self) -> np.ndarray:
        return self.Theta * self.dphi

    @property
    def L(self) -> float:
        return float(self.eta[-1])

    @property
    def delta_C(self) -> float:
        return abs(self.gas.R * (self.theta_right - self.theta_left) / self.p_star)

    @property
    def degenerate(self) -> bool:
        return self.theta_left == self.theta_right

    def _d2phi(self, eta, phi, dphi):
        return -0.5 * eta * np.exp(phi) * dphi / self.a_c

    def _splines(self):
        spl = self.__dict__.get("_spl")
        if spl is None:
            d2 = self._d2phi(self.eta, self.phi, self.dphi)
            spl = (CubicHermiteSpline(self.eta, self.phi, self.dphi, extrapolate=False),
                   CubicHermiteSpline(self.eta, self.dphi, d2, extrapolate=False))
            object.__setattr__(self, "_spl", spl)
        return spl

    def log_profile(self, eta):
        """(phi, phi', phi'', phi''') at ``eta``; constants beyond [-L, L]."""
        eta = np.asarray(eta, dtype=float)
        if self.degenerate:
            z = np.zeros_like(eta)
            return z + self.phi[0], z, z.copy(), z.copy()
        s_phi, s_dphi = self._splines()
        inside = np.abs(eta) <= self.L
        phi = np.where(eta < 0, self.phi[0], self.phi[-1]).astype(float)
        dphi = np.zeros_like(eta)
        phi[inside] = s_phi(eta[inside])
        dphi[inside] = s_dphi(eta[inside])
        e = np.exp(phi)
        d2 = self._d2phi(eta, phi, dphi)
        d3 = -0.5 * (e * dphi + eta * e * dphi * dphi + eta * e * d2) / self.a_c
        return phi, dphi, d2, d3

    def evaluate(self, t: float, x, second: bool = False):
        """Contact wave (v^C, u^C, theta^C) and x-derivatives at (t, x).

        Returns ``(v, u, theta, v_x, u_x, theta_x)``; with ``second=True`` the
        second derivatives ``(v_xx, u_xx, theta_xx)`` are appended.
        """
        if t < 0:
            raise DomainError("time must be nonnegative")
        gas = self.gas
        s = np.sqrt(1.0 + t)
        eta = np.asarray(x, dtype=float) / s
        phi, d1, d2, d3 = self.log_profile(eta)
        th = np.exp(phi)
        c = (gas.gamma - 1.0) * gas.kappa / (gas.R * gas.gamma)
        v = gas.R * th / self.p_star
        u = self.u_star + c * d1 / s
        th_x = th * d1 / s
        v_x = gas.R * th_x / self.p_star
        u_x = c * d2 / s ** 2
        out = (v, u, th, v_x, u_x, th_x)
        if second:
            th_xx = th * (d1 * d1 + d2) / s ** 2
            out = out + (gas.R * th_xx / self.p_star, c * d3 / s ** 3, th_xx)
        return out


def solve_contact_profile(gas: GasParams, theta_left: float, theta_right: float,
                          p_star: float, u_star: float, L: float = 20.0,
                          n: int = 4001, tail_tol: float = 1e-12) -> ContactProfile:
    """Solve the self-similar contact BVP on [-L, L]; L is doubled until |Theta'(+-L)| < tail_tol."""
    if theta_left <= 0 or theta_right <= 0 or p_star <= 0:
        raise DomainError("temperatures and pressure must be positive")
    a_c = contact_diffusivity(gas, p_star)
    h = 2.0 * L / (n - 1)
    for _ in range(6):
        eta = np.linspace(-L, L, n)
        phi_l, phi_r = np.log(theta_left), np.log(theta_right)
        if theta_left == theta_right:
            phi = np.full(n, phi_l)
            rnorm = 0.0
        else:
            phi, rnorm, _ = _solve_log_profile(eta, phi_l, phi_r, a_c)
        dphi = _d1_4(phi, eta[1] - eta[0])
        dth = np.exp(phi) * dphi
        if max(abs(dth[0]), abs(dth[-1])) < tail_tol:
            return ContactProfile(gas, eta, phi, dphi, p_star, u_star, a_c,
                                  theta_left, theta_right, rnorm)
        L *= 2.0
        n = int(round(2.0 * L / h)) + 1
    raise ConvergenceError("contact profile tails did not decay inside the enlarged window")


def contact_from_end_states(gas: GasParams, ends: EndStates, **kw) -> ContactProfile:
    return solve_contact_profile(gas, ends.star.theta, ends.starstar.theta,
                                 ends.p_star_cd, ends.star.u, **kw)


def contact_wave_eval(gas: GasParams, profile: ContactProfile, t: float, x):
    return profile.evaluate(t, x)


def contact_residual(gas: GasParams, profile: ContactProfile, t: float,
                     n: int = 4001, dt: float = 1e-5):
    """Sup-norms of Q1 = u_t - mu (u_x/v)_x and Q2 = -mu u_x^2/v on a window covering the wave."""
    if profile.degenerate:
        return 0.0, 0.0
    half = profile.L * np.sqrt(1.0 + t)
    x = np.linspace(-half, half, n)
    u_plus = profile.evaluate(t + dt, x)[1]
    u_minus = profile.evaluate(max(t - dt, 0.0), x)[1]
    u_t = (u_plus - u_minus) / ((t + dt) - max(t - dt, 0.0))
    v, _, _, _, u_x, _ = profile.evaluate(t, x)
    flux = gas.mu * u_x / v
    q1 = u_t - np.gradient(flux, x, edge_order=2)
    q2 = -gas.mu * u_x ** 2 / v
    return float(np.max(np.abs(q1))), float(np.max(np.abs(q2)))


def self_similar_residual(profile: ContactProfile) -> float:
    """Max-norm of a_c (Theta'/Theta)' + (eta/2) Theta' at the profile nodes.

    (Theta'/Theta)' = phi'' is differenced from the stored phi' with a
    fourth-order stencil, independently of the discrete equations that
    produced phi.
    """
    if profile.degenerate:
        return 0.0
    h = profile.eta[1] - profile.eta[0]
    r = profile.a_c * _d1_4(profile.dphi, h) + 0.5 * profile.eta * profile.Theta * profile.dphi
    return float(np.max(np.abs(r[2:-2])))
