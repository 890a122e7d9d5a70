import numpy as np
import pytest

from nsfwave.exceptions import PreconditionError
from nsfwave.gas import PrimState, WaveStrengths, build_end_states
from nsfwave.profiles.shock import (check_sharp_diffusion, shock_scaling_report,
                                    first_integral_residual, sharp_diffusion_coefficient,
                                    shock_ode_jacobian, shock_ode_rhs, solve_shock_profile)


def profile_for(gas, plus, d):
    e = build_end_states(gas, plus, WaveStrengths(delta_S=d))
    return solve_shock_profile(gas, e.starstar, plus, e.sigma)


def test_end_states_are_rest_points(gas, ends):
    for s in (ends.starstar, ends.plus):
        fv, ft = shock_ode_rhs(gas, ends.plus, ends.sigma, s.v, s.theta)
        assert abs(fv) < 1e-14 and abs(ft) < 1e-14


def test_jacobian_matches_finite_differences(gas, ends):
    v, th, eps = 0.95, 1.03, 1e-7
    J = shock_ode_jacobian(gas, ends.plus, ends.sigma, v, th)
    fd = np.empty((2, 2))
    for j, (dv, dt) in enumerate([(eps, 0.0), (0.0, eps)]):
        hi = shock_ode_rhs(gas, ends.plus, ends.sigma, v + dv, th + dt)
        lo = shock_ode_rhs(gas, ends.plus, ends.sigma, v - dv, th - dt)
        fd[:, j] = (np.array(hi) - np.array(lo)) / (2 * eps)
    np.testing.assert_allclose(J, fd, atol=1e-7)


def test_rest_point_types(gas, ends):
    """Upstream state is a saddle and downstream is a stable node."""
    ev_l = np.linalg.eigvals(shock_ode_jacobian(gas, ends.plus, ends.sigma,
                                                ends.starstar.v, ends.starstar.theta)).real
    ev_r = np.linalg.eigvals(shock_ode_jacobian(gas, ends.plus, ends.sigma,
                                                ends.plus.v, ends.plus.theta)).real
    assert ev_l.min() < 0 < ev_l.max()
    assert np.all(ev_r < 0)


def test_profile_shape(shock, ends):
    assert np.all(shock.dvS > 0) and np.all(shock.duS < 0) and np.all(shock.dthetaS < 0)
    assert shock.vS[0] == pytest.approx(ends.starstar.v, abs=1e-12)
    assert shock.vS[-1] == pytest.approx(ends.plus.v, abs=1e-12)
    v0 = shock.evaluate(np.array([0.0]))[0][0]
    assert v0 == pytest.approx(0.5 * (ends.starstar.v + ends.plus.v), abs=1e-10)
    assert first_integral_residual(shock) < 1e-12


def test_clamped_outside_window(shock, ends):
    v, u, th, dv, du, dth = shock.evaluate(np.array([-1e4, 1e4]))
    assert (v[0], u[0], th[0]) == (ends.starstar.v, ends.starstar.u, ends.starstar.theta)
    assert (v[1], u[1], th[1]) == (ends.plus.v, ends.plus.u, ends.plus.theta)
    assert np.all(dv == 0) and np.all(dth == 0)


def test_interpolated_derivatives(shock):
    xi = np.linspace(-60, 60, 1201)
    eps = 1e-5
    vals = shock.evaluate(xi)
    hi, lo = shock.evaluate(xi + eps), shock.evaluate(xi - eps)
    for k in range(3):
        assert np.max(np.abs(vals[3 + k] - (hi[k] - lo[k]) / (2 * eps))) < 1e-9


def test_second_derivatives(shock):
    xi = np.linspace(-40, 40, 401)
    eps = 1e-5
    d2 = shock.evaluate_second(xi)
    hi, lo = shock.evaluate(xi + eps), shock.evaluate(xi - eps)
    for k in range(3):
        assert np.max(np.abs(d2[k] - (hi[3 + k] - lo[3 + k]) / (2 * eps))) < 1e-8


def test_ratios_scale_with_strength(gas, plus):
    rows = [shock_scaling_report(profile_for(gas, plus, d), gas) for d in (0.2, 0.1, 0.05)]
    for key in ("u_ratio", "theta_ratio"):
        for a, b in zip(rows, rows[1:]):
            assert 0.3 <= b[key] / a[key] <= 0.7
    for r, d in zip(rows, (0.2, 0.1, 0.05)):
        assert r["monotone"]
        # exponential tails with rate proportional to the strength
        assert 1.0 < r["tail_rate_left"] / d < 2.0
        assert 1.0 < r["tail_rate_right"] / d < 2.0


def test_sharp_diffusion_limit(gas, plus):
    assert sharp_diffusion_coefficient(gas, plus) == pytest.approx(20.0 / 9.0 * 15.0 / 19.0)
    rep = check_sharp_diffusion(gas, plus, (0.1, 0.05, 0.025))
    assert rep["limit"] == pytest.approx(1.754386, abs=1e-6)
    assert rep["monotone_error"]
    assert rep["rows"][1]["rel_error"] < 0.2
    # the deviation from the linear law is second order in the strength
    assert max(r["scaled_deviation"] for r in rep["rows"]) < 10.0


def test_degenerate_profile(gas, plus):
    prof = solve_shock_profile(gas, plus, plus, 1.0)
    assert prof.degenerate
    v = prof.evaluate(np.linspace(-3, 3, 7))[0]
    assert np.all(v == plus.v)


def test_rejects_bad_end_states(gas, plus, ends):
    with pytest.raises(PreconditionError):
        solve_shock_profile(gas, PrimState(1.1, 0.0, 1.0), plus, 1.0)
    with pytest.raises(PreconditionError):
        solve_shock_profile(gas, ends.starstar, plus, ends.sigma * 1.01)
