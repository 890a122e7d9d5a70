"""Property suites behind the ``check`` subcommand: each returns a pass flag plus details."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .diagnostics import poincare_check
from .gas import GasParams, PrimState, WaveStrengths, build_end_states
from .profiles.shock import check_sharp_diffusion, shock_scaling_report, solve_shock_profile
from .solver import Grid, Perturbation, perturbation_h1_norm


def random_trig_polys(rng: np.random.Generator, count: int, y: np.ndarray, kmax: int = 8):
    """Rows of sum_k c_k sin(k pi y) + d_k cos(k pi y) with coefficients uniform in [-1, 1]."""
    k = np.arange(1, kmax + 1)
    c = rng.uniform(-1.0, 1.0, size=(count, kmax))
    d = rng.uniform(-1.0, 1.0, size=(count, kmax))
    arg = np.pi * np.outer(k, y)
    return c @ np.sin(arg) + d @ np.cos(arg)


def poincare_suite(seed: int = 42, count: int = 1000, n: int = 2001,
                   reverse: bool = False) -> dict:
    """Equality case f = y plus ``count`` random trigonometric polynomials.

    ``reverse=True`` tests the opposite inequality and is expected to fail;
    it exists to show the harness can report a failure.
    """
    y = np.linspace(0.0, 1.0, n)
    lhs, rhs, ratio = poincare_check(y, y)
    eq_ok = abs(lhs - 1.0 / 12.0) < 1e-6 and abs(rhs - 1.0 / 12.0) < 1e-6
    ratios = np.array([poincare_check(f, y)[2]
                       for f in random_trig_polys(np.random.default_rng(seed), count, y)])
    if reverse:
        ok = bool(np.all(ratios >= 1.0 - 1e-6))
    else:
        ok = bool(np.all(ratios <= 1.0 + 1e-6))
    return {"passed": bool(eq_ok and ok), "equality_lhs": lhs, "equality_rhs": rhs,
            "max_ratio": float(ratios.max()), "count": count, "seed": seed}


def shock_scaling_suite(gas: GasParams | None = None, plus: PrimState | None = None,
                        deltas=(0.2, 0.1, 0.05), band=(0.3, 0.7)) -> dict:
    """Per-halving shrink factors of the two weak-shock ratios."""
    gas = gas or GasParams()
    plus = plus or PrimState(1.0, 0.0, 1.0)
    rows = []
    for d in deltas:
        ends = build_end_states(gas, plus, WaveStrengths(delta_S=d, delta_max=max(0.3, d)))
        prof = solve_shock_profile(gas, ends.starstar, plus, ends.sigma)
        rows.append({"delta_S": d, **shock_scaling_report(prof, gas)})
    factors = {}
    ok = all(r["monotone"] for r in rows)
    for key in ("u_ratio", "theta_ratio"):
        fs = [b[key] / a[key] for a, b in zip(rows, rows[1:])]
        factors[key] = fs
        ok = ok and all(band[0] <= f <= band[1] for f in fs)
    return {"passed": bool(ok), "rows": rows, "factors": factors}


def sharp_diffusion_suite(gas: GasParams | None = None, plus: PrimState | None = None,
                          deltas=(0.1, 0.05, 0.025), probe: float = 0.05,
                          tol: float = 0.2) -> dict:
    gas = gas or GasParams()
    plus = plus or PrimState(1.0, 0.0, 1.0)
    rep = check_sharp_diffusion(gas, plus, deltas)
    at = [r for r in rep["rows"] if r["delta_S"] == probe]
    ok = rep["monotone_error"] and bool(at) and at[0]["rel_error"] < tol
    return {"passed": bool(ok), **rep}


def quadrature_suite() -> dict:
    """Trapezoid-rule sanity: second-order Richardson ratio and the Gaussian H^1 closed form."""
    def trap(f, n):
        y = np.linspace(0.0, 1.0, n)
        return np.trapezoid(f(y), y)

    f = lambda y: np.exp(y) * y * y  # noqa: E731
    exact = math.e - 2.0
    errs = [abs(trap(f, n) - exact) for n in (101, 201, 401)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    pert = Perturbation((0.01, 0.01, 0.01), 0.0, 5.0)
    grid = Grid.from_spacing(-60.0, 60.0, 0.1)
    h1_quad = perturbation_h1_norm(pert, grid)
    h1_exact = pert.h1_norm_exact()
    ok = all(1.9 <= o <= 2.1 for o in orders) and abs(h1_quad - h1_exact) < 1e-10 * h1_exact
    return {"passed": bool(ok), "orders": orders, "h1_quadrature": h1_quad, "h1_exact": h1_exact}


SUITES = {
    "poincare": poincare_suite,
    "shock_scaling": shock_scaling_suite,
    "sharp_diffusion": sharp_diffusion_suite,
    "quadrature": quadrature_suite,
}


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("NSFWAVE_THREADS", "1")))
    except ValueError:
        return 1


def run_all(seed: int = 42, reverse_poincare: bool = False) -> dict:
    """Run every suite; results keep the declared suite order whatever the thread count."""
    jobs = {
        "poincare": lambda: poincare_suite(seed=seed, reverse=reverse_poincare),
        "shock_scaling": shock_scaling_suite,
        "sharp_diffusion": sharp_diffusion_suite,
        "quadrature": quadrature_suite,
    }
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        futures = {name: pool.submit(fn) for name, fn in jobs.items()}
        results = {name: futures[name].result() for name in jobs}
    return {"passed": all(r["passed"] for r in results.values()), "seed": seed,
            "suites": results}
