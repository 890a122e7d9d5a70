"""Command line front end: ``nsfwave {riemann,profile,simulate,check}``.

Exit codes: 0 success, 1 a check failed, 2 invalid configuration,
3 construction failure, 4 positivity failure, 5 boundary contamination.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .config import ConfigError, RunConfig
from .exceptions import (BoundaryContaminationError, ConstructionError, ConvergenceError,
                         DomainError, PositivityError, PreconditionError)
from .gas import build_end_states, check_end_states
from .profiles.contact import contact_from_end_states, contact_residual, self_similar_residual
from .profiles.rarefaction import RarefactionWave, exact_rarefaction_fan
from .profiles.shock import shock_scaling_report, first_integral_residual, solve_shock_profile
from .shift import alpha_star, m_constant, m_constant_alt

log = logging.getLogger("nsfwave")

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_CONSTRUCT, EXIT_POSITIVITY, EXIT_BOUNDARY = range(6)


def _meta(cfg: RunConfig, **extra) -> dict:
    return {"config_hash": io.config_hash(cfg.to_dict()), **extra}


def cmd_riemann(cfg: RunConfig, out: Path) -> int:
    ends = build_end_states(cfg.gas, cfg.plus_state, cfg.strengths, cfg.contact_sign)
    checks = check_end_states(cfg.gas, ends)
    ok = checks["rh_residual"] < 1e-10 and checks["lax"]
    payload = {
        "config_hash": io.config_hash(cfg.to_dict()),
        "end_states": ends.to_flat_dict(),
        "checks": checks,
        "alpha_star": alpha_star(cfg.gas, ends),
        "M": m_constant(cfg.gas, ends),
        "M_alt": m_constant_alt(cfg.gas, ends),
    }
    io.write_json(out / "end_states.json", payload)
    log.info("sigma=%.12g  RH residual=%.3e  Lax=%s", ends.sigma, checks["rh_residual"],
             checks["lax"])
    return EXIT_OK if ok else EXIT_CHECK


def _profile_shock(cfg, ends, out):
    prof = solve_shock_profile(cfg.gas, ends.starstar, ends.plus, ends.sigma)
    io.write_columns(out / "profile_shock.csv",
                     {"xi": prof.xi, "v": prof.vS, "u": prof.uS, "theta": prof.thetaS,
                      "v_xi": prof.dvS, "u_xi": prof.duS, "theta_xi": prof.dthetaS},
                     _meta(cfg, wave="shock", sigma=ends.sigma))
    rep = shock_scaling_report(prof, cfg.gas)
    rep["first_integral_residual"] = first_integral_residual(prof)
    rep["passed"] = bool(rep["monotone"] and rep["first_integral_residual"] < 1e-8)
    return rep


def _profile_contact(cfg, ends, out):
    prof = contact_from_end_states(cfg.gas, ends)
    cols = {"eta": prof.eta, "Theta": prof.Theta, "Theta_eta": prof.dTheta}
    io.write_columns(out / "profile_contact.csv", cols, _meta(cfg, wave="contact"))
    times = [5.0, 10.0, 20.0, 50.0]
    q = [contact_residual(cfg.gas, prof, t) for t in times]
    rep = {"bvp_residual": prof.bvp_residual,
           "self_similar_residual": self_similar_residual(prof),
           "times": times, "sup_Q1": [a for a, _ in q], "sup_Q2": [b for _, b in q],
           "degenerate": prof.degenerate}
    rep["passed"] = bool(prof.bvp_residual < 1e-8)
    return rep


def _profile_rarefaction(cfg, ends, out):
    wave = RarefactionWave.from_end_states(cfg.gas, ends)
    times = list(cfg.profile_times)
    tmax = max(times) if times else 0.0
    x = np.linspace(wave.w_minus * (1.0 + tmax) - 30.0, wave.w_star * (1.0 + tmax) + 30.0
                    if wave.w_star > 0 else 30.0, 4001)
    cols = {"x": x}
    sups = []
    for t in times:
        v, u, th, vx, ux, thx = wave.evaluate(t, x)
        cols[f"v_t{t:g}"], cols[f"u_t{t:g}"], cols[f"theta_t{t:g}"] = v, u, th
        sups.append(float(max(np.abs(vx).max(), np.abs(ux).max(), np.abs(thx).max())))
    io.write_columns(out / "profile_rarefaction.csv", cols, _meta(cfg, wave="rarefaction"))
    fan_gap = []
    for t in times:
        if t > 0:
            va = wave.evaluate(t, x)[:3]
            ve = exact_rarefaction_fan(cfg.gas, wave, t, x)
            fan_gap.append(float(max(np.abs(a - b).max() for a, b in zip(va, ve))))
    rep = {"times": times, "sup_derivative": sups, "fan_gap": fan_gap,
           "passed": bool(all(a >= b for a, b in zip(sups, sups[1:])))}
    return rep


def cmd_profile(cfg: RunConfig, out: Path, which: str) -> int:
    ends = build_end_states(cfg.gas, cfg.plus_state, cfg.strengths, cfg.contact_sign)
    fn = {"shock": _profile_shock, "contact": _profile_contact,
          "rarefaction": _profile_rarefaction}[which]
    rep = fn(cfg, ends, out)
    rep["config_hash"] = io.config_hash(cfg.to_dict())
    io.write_json(out / f"profile_{which}_report.json", rep)
    log.info("%s profile report: passed=%s", which, rep["passed"])
    return EXIT_OK if rep["passed"] else EXIT_CHECK


def cmd_simulate(cfg: RunConfig, out: Path) -> int:
    from .diagnostics import DiagnosticsRecord
    from .experiment import simulate, snapshot_columns

    outcome = simulate(cfg)
    meta = _meta(cfg)
    io.write_csv(out / "diagnostics.csv", DiagnosticsRecord.columns(),
                 [r.as_row() for r in outcome.records], meta)
    hist = outcome.result.shift.history
    io.write_csv(out / "shift.csv", ["t", "X", "Xdot"], hist, meta)
    for t, fld in sorted(outcome.result.snapshots.items()):
        X = float(np.interp(t, [h[0] for h in hist], [h[1] for h in hist]))
        io.write_columns(out / f"snapshot_t{t:g}.csv",
                         snapshot_columns(outcome.ansatz, outcome.grid, fld, X),
                         {**meta, "t": f"{t:.17g}", "X": f"{X:.17g}"})
    summary = {**outcome.summary, "config_hash": meta["config_hash"]}
    io.write_json(out / "summary.json", summary)
    log.info("T=%g steps=%d sup_gap=%.3e X=%.3e wall=%.1fs", outcome.records[-1].t,
             outcome.result.steps, outcome.records[-1].sup_gap, outcome.records[-1].X,
             outcome.result.wall_clock)
    return EXIT_OK


def cmd_check(cfg: RunConfig, out: Path, reverse: bool = False) -> int:
    from .checks import run_all

    rep = run_all(seed=cfg.seed, reverse_poincare=reverse)
    rep["config_hash"] = io.config_hash(cfg.to_dict())
    io.write_json(out / "check_report.json", rep)
    for name, r in rep["suites"].items():
        log.info("%-16s %s", name, "PASS" if r["passed"] else "FAIL")
    return EXIT_OK if rep["passed"] else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nsfwave", description=__doc__.splitlines()[0])
    p.add_argument("--config", type=Path, help="JSON run configuration")
    p.add_argument("--out", type=Path, help="output directory (default: config output_dir)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("riemann", help="construct the end states")
    prof = sub.add_parser("profile", help="compute one wave profile")
    prof.add_argument("which", choices=["shock", "contact", "rarefaction"])
    sub.add_parser("simulate", help="evolve the perturbed composite wave")
    chk = sub.add_parser("check", help="run the property suites")
    chk.add_argument("--reverse-poincare", action="store_true",
                     help="test the reversed inequality (expected to fail)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stdout)
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
    except (ConfigError, DomainError, PreconditionError) as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    out = args.out or Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "riemann":
            return cmd_riemann(cfg, out)
        if args.command == "profile":
            return cmd_profile(cfg, out, args.which)
        if args.command == "simulate":
            return cmd_simulate(cfg, out)
        return cmd_check(cfg, out, args.reverse_poincare)
    except (ConstructionError, ConvergenceError) as exc:
        log.error("construction failed: %s", exc)
        return EXIT_CONSTRUCT
    except PositivityError as exc:
        log.error("%s", exc)
        if exc.snapshot is not None:
            s = exc.snapshot
            io.write_columns(out / "positivity_failure.csv",
                             {"index": np.arange(s.v.size), "v": s.v, "u": s.u,
                              "theta": s.theta}, _meta(cfg, t=f"{s.t:.17g}"))
        return EXIT_POSITIVITY
    except BoundaryContaminationError as exc:
        log.error("%s", exc)
        return EXIT_BOUNDARY
    except (DomainError, PreconditionError) as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
