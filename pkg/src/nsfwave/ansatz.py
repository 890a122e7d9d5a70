"""Composite ansatz: rarefaction + viscous contact + shifted viscous shock in the shock frame."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gas import EndStates, GasParams, PrimState, WaveStrengths, build_end_states
from .profiles.contact import ContactProfile, contact_from_end_states
from .profiles.rarefaction import RarefactionWave
from .profiles.shock import ShockProfile, solve_shock_profile


@dataclass
class AnsatzEval:
    vbar: np.ndarray
    ubar: np.ndarray
    thetabar: np.ndarray
    dvbar: np.ndarray
    dubar: np.ndarray
    dthetabar: np.ndarray
    parts: dict = field(default_factory=dict)

    @property
    def pbar(self):
        return self.parts["R"] * self.thetabar / self.vbar


@dataclass(frozen=True)
class CompositeAnsatz:
    gas: GasParams
    ends: EndStates
    shock: ShockProfile
    contact: ContactProfile
    rarefaction: RarefactionWave

    @property
    def sigma(self) -> float:
        return self.ends.sigma

    @classmethod
    def build(cls, gas: GasParams, plus: PrimState, strengths: WaveStrengths,
              contact_sign: int = 1, shock_dxi: float = 0.05,
              contact_L: float = 20.0, contact_n: int = 4001) -> "CompositeAnsatz":
        ends = build_end_states(gas, plus, strengths, contact_sign=contact_sign)
        return cls.from_end_states(gas, ends, shock_dxi=shock_dxi,
                                   contact_L=contact_L, contact_n=contact_n)

    @classmethod
    def from_end_states(cls, gas: GasParams, ends: EndStates, shock_dxi: float = 0.05,
                        contact_L: float = 20.0, contact_n: int = 4001) -> "CompositeAnsatz":
        shock = solve_shock_profile(gas, ends.starstar, ends.plus, ends.sigma, dxi=shock_dxi)
        contact = contact_from_end_states(gas, ends, L=contact_L, n=contact_n)
        rare = RarefactionWave.from_end_states(gas, ends)
        return cls(gas, ends, shock, contact, rare)

    def eval_moving(self, t: float, xi):
        """Rarefaction and contact parts, which depend on t but not on the shift."""
        x = np.asarray(xi, dtype=float) + self.sigma * t
        return self.rarefaction.evaluate(t, x), self.contact.evaluate(t, x)

    def combine(self, moving, shock_vals) -> AnsatzEval:
        (rv, ru, rt, rvx, rux, rtx), (cv, cu, ct, cvx, cux, ctx) = moving
        sv, su, st, svx, sux, stx = shock_vals
        s_, ss = self.ends.star, self.ends.starstar
        return AnsatzEval(
            # grouped so that each wave contributes its deviation from its own end state
            vbar=(rv - s_.v) + (cv - ss.v) + sv,
            ubar=(ru - s_.u) + (cu - ss.u) + su,
            thetabar=(rt - s_.theta) + (ct - ss.theta) + st,
            dvbar=rvx + cvx + svx,
            dubar=rux + cux + sux,
            dthetabar=rtx + ctx + stx,
            parts={"R": self.gas.R,
                   "rarefaction": (rv, ru, rt, rvx, rux, rtx),
                   "contact": (cv, cu, ct, cvx, cux, ctx),
                   "shock": (sv, su, st, svx, sux, stx)},
        )

    def evaluate(self, t: float, xi, X: float = 0.0) -> AnsatzEval:
        xi = np.asarray(xi, dtype=float)
        return self.combine(self.eval_moving(t, xi), self.shock.evaluate(xi - X))


def eval_ansatz(ansatz: CompositeAnsatz, t: float, xi, X: float = 0.0) -> AnsatzEval:
    return ansatz.evaluate(t, xi, X)


def ansatz_residual(ansatz: CompositeAnsatz, t: float, X: float, Xdot: float, xi,
                    dt: float = 1e-5) -> dict:
    """Numerical error terms Q1, Q2 of the ansatz in the shock frame, plus the mass residual.

    Spatial fluxes are differenced on the supplied uniform grid; time
    derivatives are two-sided with step ``dt`` (one-sided at t = 0), moving
    the shock with ``Xdot`` so the shift terms are included consistently.
    """
    gas = ansatz.gas
    sigma = ansatz.sigma
    xi = np.asarray(xi, dtype=float)
    t_lo = max(t - dt, 0.0)
    t_hi = t + dt
    a_hi = ansatz.evaluate(t_hi, xi, X + Xdot * (t_hi - t))
    a_lo = ansatz.evaluate(t_lo, xi, X + Xdot * (t_lo - t))
    a = ansatz.evaluate(t, xi, X)
    span = t_hi - t_lo
    v_t = (a_hi.vbar - a_lo.vbar) / span
    u_t = (a_hi.ubar - a_lo.ubar) / span
    th_t = (a_hi.thetabar - a_lo.thetabar) / span
    _, _, _, svx, sux, stx = a.parts["shock"]
    v, th = a.vbar, a.thetabar
    vx, ux, thx = a.dvbar, a.dubar, a.dthetabar
    p_x = gas.R * (thx * v - th * vx) / v ** 2
    p = gas.R * th / v
    visc_u = np.gradient(gas.mu * ux / v, xi, edge_order=2)
    visc_t = np.gradient(gas.kappa * thx / v, xi, edge_order=2)
    q0 = v_t - sigma * vx + Xdot * svx - ux
    q1 = u_t - sigma * ux + Xdot * sux + p_x - visc_u
    q2 = gas.cv * (th_t - sigma * thx + Xdot * stx) + p * ux - visc_t - gas.mu * ux ** 2 / v
    h = xi[1] - xi[0]

    def l2(q):
        return float(np.sqrt(np.trapezoid(q * q, dx=h)))

    return {"Q0": q0, "Q1": q1, "Q2": q2,
            "sup_Q0": float(np.max(np.abs(q0))),
            "sup_Q1": float(np.max(np.abs(q1))), "sup_Q2": float(np.max(np.abs(q2))),
            "l2_Q1": l2(q1), "l2_Q2": l2(q2)}
