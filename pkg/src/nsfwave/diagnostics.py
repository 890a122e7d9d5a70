"""Relative entropy, good terms, gaps and the weighted Poincare check."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .exceptions import DomainError
from .gas import GasParams, PrimState


def phi(z):
    """Phi(z) = z - 1 - ln z, the convex kernel of the relative entropy."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("Phi needs positive arguments")
    return z - 1.0 - np.log(z)


def relative_entropy_density(gas: GasParams, state, ref):
    """eta(U|Ubar) = R Phi(v/vbar) + R/(gamma-1) Phi(theta/thetabar) + (u-ubar)^2/(2 thetabar).

    ``state`` and ``ref`` are PrimStates or (v, u, theta) triples of arrays.
    """
    v, u, th = (state.v, state.u, state.theta) if isinstance(state, PrimState) else state
    vb, ub, tb = (ref.v, ref.u, ref.theta) if isinstance(ref, PrimState) else ref
    tb = np.asarray(tb, dtype=float)
    if np.any(np.asarray(vb) <= 0) or np.any(tb <= 0):
        raise DomainError("reference state must be positive")
    out = (gas.R * phi(np.asarray(v) / vb) + gas.cv * phi(np.asarray(th) / tb)
           + (np.asarray(u) - ub) ** 2 / (2.0 * tb))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    X: float
    Xdot: float
    E_weighted: float
    E_plain: float
    G_S: float
    G_R: float
    D: float
    G_aprime: float
    sup_gap: float
    l2_gap: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_row(self) -> list[float]:
        return [getattr(self, c) for c in self.columns()]

    def to_dict(self) -> dict:
        return asdict(self)


def _trap(f, h):
    return float(np.trapezoid(f, dx=h))


def functionals_from_values(gas: GasParams, v, u, theta, abar, weight, sigma: float,
                            h: float, t: float, X: float, Xdot: float = 0.0) -> DiagnosticsRecord:
    vb, ub, tb = abar.vbar, abar.ubar, abar.thetabar
    dv, du, dth = v - vb, u - ub, theta - tb
    eta = relative_entropy_density(gas, (v, u, theta), (vb, ub, tb))
    vS, _, _, dvS, _, _ = abar.parts["shock"]
    a, ap = weight.from_shock_values(vS, dvS)
    dvR = abar.parts["rarefaction"][3]
    gap2 = dv * dv + du * du + dth * dth
    du_x = np.gradient(du, h)
    dth_x = np.gradient(dth, h)
    return DiagnosticsRecord(
        t=float(t), X=float(X), Xdot=float(Xdot),
        E_weighted=_trap(a * tb * eta, h),
        E_plain=_trap(eta, h),
        G_S=_trap(np.abs(dvS) * gap2, h),
        G_R=_trap(np.abs(dvR) * (dv * dv + dth * dth), h),
        D=_trap(a * (gas.mu / v * du_x ** 2 + gas.kappa / (v * theta) * dth_x ** 2), h),
        G_aprime=sigma * _trap(ap * tb * eta, h),
        sup_gap=float(max(np.max(np.abs(dv)), np.max(np.abs(du)), np.max(np.abs(dth)))),
        l2_gap=float(np.sqrt(_trap(gap2, h))),
    )


def functionals(gas: GasParams, fld, ansatz, weight, X: float, t: float, grid,
                Xdot: float = 0.0) -> DiagnosticsRecord:
    """All diagnostics of ``fld`` against the ansatz shifted by X at time t."""
    abar = ansatz.evaluate(t, grid.xi, X)
    return functionals_from_values(gas, fld.v, fld.u, fld.theta, abar, weight,
                                   ansatz.sigma, grid.h, t, X, Xdot)


def sup_gap(fld, ansatz, X: float, t: float, grid) -> float:
    a = ansatz.evaluate(t, grid.xi, X)
    return float(max(np.max(np.abs(fld.v - a.vbar)), np.max(np.abs(fld.u - a.ubar)),
                     np.max(np.abs(fld.theta - a.thetabar))))


def entropy_decay_check(records, source_budget: float = 0.0) -> dict:
    """Summarize the trend of a recorded run.

    Reports the change of the weighted entropy, the largest increase between
    consecutive records beyond ``source_budget``, the decay of |Xdot| and the
    mean drift X(T)/T.
    """
    if len(records) < 3:
        raise DomainError("entropy_decay_check needs at least three records")
    E = np.array([r.E_weighted for r in records])
    xd = np.abs(np.array([r.Xdot for r in records]))
    first, last = records[0], records[-1]
    rises = np.diff(E)
    violations = int(np.sum(rises > source_budget))
    return {
        "E_change": float(E[-1] - E[0]),
        "E_decreased": bool(E[-1] < E[0]) if E[0] > 0 else bool(E[-1] <= E[0]),
        "max_rise": float(max(rises.max(), 0.0)),
        "rise_violations": violations,
        "Xdot_final": float(xd[-1]),
        "Xdot_max": float(xd.max()),
        "Xdot_ratio": float(xd[-1] / xd.max()) if xd.max() > 0 else 0.0,
        "X_over_T": float(last.X / last.t) if last.t > first.t else 0.0,
        "sup_gap_ratio": float(last.sup_gap / max(r.sup_gap for r in records))
        if max(r.sup_gap for r in records) > 0 else 0.0,
    }


def poincare_check(f, y=None) -> tuple[float, float, float]:
    """Both sides of int_0^1 |f - mean f|^2 <= 1/2 int_0^1 y(1-y) |f'|^2 and their ratio.

    ``f`` is sampled on a uniform grid of [0, 1] (n >= 1001).  When the right
    side vanishes the ratio is reported as 0 if the left side is also
    negligible and inf otherwise.
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    if n < 1001:
        raise DomainError("poincare_check needs at least 1001 samples")
    y = np.linspace(0.0, 1.0, n) if y is None else np.asarray(y, dtype=float)
    h = y[1] - y[0]
    mean = np.trapezoid(f, dx=h)
    lhs = float(np.trapezoid((f - mean) ** 2, dx=h))
    fp = np.gradient(f, h, edge_order=2)
    rhs_ = float(0.5 * np.trapezoid(y * (1.0 - y) * fp * fp, dx=h))
    if rhs_ <= 1e-300:
        return lhs, rhs_, 0.0 if lhs <= 1e-12 else float("inf")
    return lhs, rhs_, lhs / rhs_
