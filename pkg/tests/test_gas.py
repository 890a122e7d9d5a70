import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import fsolve

from nsfwave.exceptions import ConstructionError, DomainError, PreconditionError
from nsfwave.gas import (EndStates, GasParams, PrimState, WaveStrengths, build_end_states,
                         check_end_states, contact2_curve, entropy_s, hugoniot_theta,
                         isentrope_constant, lambda1, lambda3, pressure,
                         rarefaction1_curve, rh_residual, riemann_invariant_z1,
                         shock3_curve)

strength = st.floats(min_value=1e-3, max_value=0.3)


def rh_oracle(gas, right, v):
    """Solve the three jump relations for (u, theta, sigma) by a generic root finder."""
    def eqs(z):
        u, th, s = z
        left = PrimState(v, u, th)
        return rh_residual(gas, left, right, s)
    sol = fsolve(eqs, [0.1, 1.05, 1.3], xtol=1e-14)
    return sol


@pytest.mark.parametrize("field", ["R", "gamma", "mu", "kappa"])
def test_gas_params_reject_bad_values(field):
    bad = {"R": 0.0, "gamma": 1.0, "mu": -1.0, "kappa": 0.0}[field]
    with pytest.raises(DomainError):
        GasParams(**{field: bad})


@pytest.mark.parametrize("v,theta", [(0.0, 1.0), (1.0, -1.0), (-2.0, 1.0)])
def test_thermodynamics_domain(gas, v, theta):
    with pytest.raises(DomainError):
        pressure(gas, v, theta)
    with pytest.raises(DomainError):
        entropy_s(gas, v, theta)


def test_reference_thermodynamics(gas):
    assert pressure(gas, 1.0, 1.0) == 1.0
    assert entropy_s(gas, 1.0, 1.0) == 0.0
    assert lambda3(gas, 1.0, 1.0) == pytest.approx(math.sqrt(5.0 / 3.0), rel=1e-15)
    assert lambda1(gas, 1.0, 1.0) == -lambda3(gas, 1.0, 1.0)


def test_shock_curve_matches_root_solve_oracle(gas, plus):
    left, sigma = shock3_curve(gas, plus, 0.9)
    u, th, s = rh_oracle(gas, plus, 0.9)
    assert sigma == pytest.approx(s, abs=1e-9)
    assert left.theta == pytest.approx(th, abs=1e-9)
    assert left.u == pytest.approx(u, abs=1e-9)
    # frozen values of the same oracle
    assert sigma == pytest.approx(1.386750, abs=1e-6)
    assert left.theta == pytest.approx(1.073077, abs=1e-6)
    assert left.u == pytest.approx(0.138675, abs=1e-6)


def test_shock_curve_degenerate_and_inadmissible(gas, plus):
    state, speed = shock3_curve(gas, plus, 1.0)
    assert state == plus
    assert speed == pytest.approx(lambda3(gas, 1.0, 1.0))
    with pytest.raises(ConstructionError):
        shock3_curve(gas, plus, 1.1)


def test_hugoniot_maximal_compression(gas, plus):
    # (gamma-1)/(gamma+1) v_R is the compression limit
    with pytest.raises(ConstructionError):
        hugoniot_theta(gas, plus, 0.2)


def test_z1_matches_quadrature(gas):
    s_bar = 0.3
    K = isentrope_constant(gas, s_bar)
    lam = lambda v: -math.sqrt(gas.gamma * K) * v ** (-(gas.gamma + 1) / 2)
    for v1, v2 in [(0.7, 1.0), (0.5, 2.0), (1.3, 0.9)]:
        integral, _ = quad(lam, v1, v2, epsabs=1e-13)
        diff = riemann_invariant_z1(gas, v2, 0.0, s_bar) - riemann_invariant_z1(gas, v1, 0.0, s_bar)
        assert diff == pytest.approx(integral, abs=1e-11)


def test_rarefaction_curve_oracle(gas, plus):
    left = rarefaction1_curve(gas, plus, 0.9)
    # isentrope: theta v^(gamma-1) fixed
    assert left.theta == pytest.approx(0.9 ** (-2.0 / 3.0), rel=1e-14)
    # z1 conserved, so u = int_{0.9}^{1} lambda1 dv along the isentrope
    lam = lambda v: -math.sqrt(gas.gamma * v ** (-2.0 / 3.0)) / v
    u_quad, _ = quad(lam, 0.9, 1.0, epsabs=1e-14)
    assert left.u == pytest.approx(u_quad, abs=1e-12)
    assert left.u == pytest.approx(-0.1384366, abs=1e-7)
    assert left.theta == pytest.approx(1.0727660, abs=1e-7)


def test_rarefaction_curve_preconditions(gas, plus):
    assert rarefaction1_curve(gas, plus, 1.0) == plus
    with pytest.raises(PreconditionError):
        rarefaction1_curve(gas, plus, 1.2)


def test_contact_curve_keeps_u_and_p(gas, plus):
    st_ = contact2_curve(gas, plus, 0.8)
    assert st_.u == plus.u
    assert pressure(gas, st_.v, st_.theta) == pytest.approx(pressure(gas, plus.v, plus.theta))


def test_baseline_end_states(gas, ends):
    rep = check_end_states(gas, ends)
    assert rep["rh_residual"] < 1e-10
    assert rep["lax"]
    assert ends.sigma == pytest.approx(1.386750490563073, abs=1e-12)
    assert ends.starstar.v == pytest.approx(0.9)
    assert ends.star.v == pytest.approx(0.8)
    assert ends.minus.v == pytest.approx(0.7)
    # default orientation puts the cooler state left of the contact
    assert ends.star.theta < ends.starstar.theta


def test_contact_sign_flips_orientation(gas, plus):
    e = build_end_states(gas, plus, WaveStrengths(0.1, 0.1, 0.1), contact_sign=-1)
    assert e.star.v == pytest.approx(1.0)
    assert e.star.theta > e.starstar.theta
    with pytest.raises(PreconditionError):
        build_end_states(gas, plus, WaveStrengths(0.1, 0.1, 0.1), contact_sign=0)


def test_zero_strengths_collapse(gas, plus):
    e = build_end_states(gas, plus, WaveStrengths())
    for st_ in (e.minus, e.star, e.starstar):
        assert st_ == plus


def test_flat_dict_round_trip(ends):
    again = EndStates.from_flat_dict(ends.to_flat_dict())
    assert again == ends


@pytest.mark.parametrize("bad", [-0.1, 0.31])
def test_strength_bounds(bad):
    with pytest.raises(PreconditionError):
        WaveStrengths(delta_S=bad)


@settings(max_examples=60, deadline=None)
@given(dR=strength, dC=strength, dS=strength,
       v=st.floats(1.0, 2.0), theta=st.floats(0.5, 2.0), u=st.floats(-1.0, 1.0))
def test_end_states_property(dR, dC, dS, v, theta, u):
    gas = GasParams()
    e = build_end_states(gas, PrimState(v, u, theta), WaveStrengths(dR, dC, dS))
    rep = check_end_states(gas, e)
    assert rep["rh_residual"] < 1e-10
    assert rep["contact_u_jump"] < 1e-12
    assert rep["contact_p_jump"] < 1e-12
    assert rep["rarefaction_s_jump"] < 1e-12
    assert rep["rarefaction_z1_jump"] < 1e-10
    assert rep["lax"]
