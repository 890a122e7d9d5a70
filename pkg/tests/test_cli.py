import json

import numpy as np
import pytest

from nsfwave import io
from nsfwave.checks import poincare_suite, quadrature_suite, run_all, worker_count
from nsfwave.cli import EXIT_CHECK, EXIT_CONFIG, EXIT_OK, main
from nsfwave.config import ConfigError, RunConfig
from nsfwave.experiment import simulate


def write_cfg(tmp_path, d, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return p


SHORT = {"solver": {"T_end": 1.0, "output_every": 0.25}, "grid": {"h": 0.2},
         "snapshot_times": [0.0, 1.0]}


def test_config_roundtrip():
    cfg = RunConfig()
    again = RunConfig.from_dict(json.loads(io.dumps(cfg.to_dict())))
    assert again == cfg
    assert cfg.seed == 42 and cfg.solver.T_end == 100.0


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown"):
        RunConfig.from_dict({"gass": {}})


@pytest.mark.parametrize("bad", [
    {"grid": {"h": -1.0}},
    {"grid": {"xi_min": -5.0}},
    {"solver": {"cfl_hyp": "x"}},
    [1, 2],
])
def test_config_rejects_invalid_values(bad):
    with pytest.raises((ConfigError, ValueError)):
        RunConfig.from_dict(bad)


def test_perturbation_accepted_at_top_level():
    cfg = RunConfig.from_dict({"perturbation": {"amplitude": [0.01, 0.0, 0.0], "width": 3.0}})
    assert cfg.solver.perturbation.amplitude == (0.01, 0.0, 0.0)
    assert cfg.solver.perturbation.width == 3.0


def test_config_hash_stable_and_sensitive():
    a = RunConfig().to_dict()
    b = RunConfig.from_dict({"seed": 7}).to_dict()
    assert io.config_hash(a) == io.config_hash(RunConfig().to_dict())
    assert io.config_hash(a) != io.config_hash(b)
    assert len(io.config_hash(a)) == 16


def test_csv_roundtrip(tmp_path):
    x = np.linspace(0.0, 1.0, 7) / 3.0
    io.write_columns(tmp_path / "a.csv", {"x": x, "y": x * x}, {"config_hash": "abc"})
    text = (tmp_path / "a.csv").read_text()
    assert text.startswith("# config_hash: abc\n")
    meta, cols, rows = io.read_csv(tmp_path / "a.csv")
    assert meta["config_hash"] == "abc" and cols == ["x", "y"]
    assert np.array_equal(np.asarray(rows)[:, 0], x)


def test_json_stable_key_order(tmp_path):
    io.write_json(tmp_path / "a.json", {"b": 1, "a": np.float64(2.5), "c": np.arange(2)})
    text = (tmp_path / "a.json").read_text(encoding="utf-8")
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert json.loads(text)["c"] == [0, 1]


def test_malformed_json_exits_2_without_output(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    out = tmp_path / "out"
    assert main(["--config", str(p), "--out", str(out), "riemann"]) == EXIT_CONFIG
    assert not out.exists()


def test_invalid_strength_exits_2(tmp_path):
    p = write_cfg(tmp_path, {"strengths": {"delta_S": -0.1}})
    assert main(["--config", str(p), "--out", str(tmp_path / "o"), "riemann"]) == EXIT_CONFIG


def test_riemann_baseline(tmp_path):
    assert main(["--out", str(tmp_path), "riemann"]) == EXIT_OK
    rep = json.loads((tmp_path / "end_states.json").read_text())
    assert rep["end_states"]["sigma"] == pytest.approx(1.386750, abs=1e-6)
    assert rep["checks"]["lax"] and rep["checks"]["rh_residual"] < 1e-10
    assert rep["M_alt"] == pytest.approx(2.0 / 3.0 * rep["M"])
    assert rep["config_hash"] == io.config_hash(RunConfig().to_dict())


def test_riemann_zero_strengths(tmp_path):
    p = write_cfg(tmp_path, {"strengths": {"delta_R": 0.0, "delta_C": 0.0, "delta_S": 0.0}})
    assert main(["--config", str(p), "--out", str(tmp_path), "riemann"]) == EXIT_OK
    es = json.loads((tmp_path / "end_states.json").read_text())["end_states"]
    for name in ("minus", "star", "starstar"):
        assert es[f"v_{name}"] == 1.0 and es[f"theta_{name}"] == 1.0 and es[f"u_{name}"] == 0.0


@pytest.mark.parametrize("which", ["shock", "contact", "rarefaction"])
def test_profile_commands(tmp_path, which):
    assert main(["--out", str(tmp_path), "profile", which]) == EXIT_OK
    rep = json.loads((tmp_path / f"profile_{which}_report.json").read_text())
    assert rep["passed"]
    meta, cols, rows = io.read_csv(tmp_path / f"profile_{which}.csv")
    assert meta["config_hash"] == rep["config_hash"]
    if which == "shock":
        v = np.asarray(rows)[:, cols.index("v")]
        assert np.all(np.diff(v) >= 0.0)
    if which == "rarefaction":
        s = rep["sup_derivative"]
        assert all(a > b for a, b in zip(s, s[1:]))


def test_profile_degenerate_contact(tmp_path):
    p = write_cfg(tmp_path, {"strengths": {"delta_R": 0.1, "delta_C": 0.0, "delta_S": 0.1}})
    assert main(["--config", str(p), "--out", str(tmp_path), "profile", "contact"]) == EXIT_OK
    _, cols, rows = io.read_csv(tmp_path / "profile_contact.csv")
    theta = np.asarray(rows)[:, cols.index("Theta")]
    assert np.ptp(theta) == 0.0


def test_simulate_zero_perturbation(tmp_path):
    null = {**SHORT, "strengths": {"delta_R": 0.0, "delta_C": 0.0, "delta_S": 0.0}}
    p = write_cfg(tmp_path, null)
    assert main(["--config", str(p), "--out", str(tmp_path), "simulate"]) == EXIT_OK
    summary = json.loads((tmp_path / "summary.json").read_text())
    meta, cols, rows = io.read_csv(tmp_path / "diagnostics.csv")
    assert cols == ["t", "X", "Xdot", "E_weighted", "E_plain", "G_S", "G_R", "D", "G_aprime",
                    "sup_gap", "l2_gap"]
    assert meta["config_hash"] == summary["config_hash"]
    arr = np.asarray(rows)
    assert np.allclose(arr[:, 0], [0.0, 0.25, 0.5, 0.75, 1.0])
    assert np.all(np.abs(arr[:, 1]) <= 1e-10)
    assert np.all(arr[:, cols.index("sup_gap")] <= 1e-10)
    assert (tmp_path / "snapshot_t1.csv").exists() and (tmp_path / "shift.csv").exists()
    assert summary["config"]["solver"]["T_end"] == 1.0
    assert "wall_clock_s" in summary and "trend" in summary


def test_simulate_unperturbed_composite_stays_close(tmp_path):
    out = simulate(RunConfig.from_dict(SHORT))
    # the composite ansatz is only an approximate solution: its residual
    # drives a small gap and shift even without a perturbation
    assert 0.0 < out.records[-1].sup_gap < 5e-2
    assert abs(out.records[-1].X) < 1e-2


def test_simulate_dt_halving(tmp_path):
    base = {**SHORT, "perturbation": {"amplitude": [0.01, 0.01, 0.01]},
            "solver": {"T_end": 1.0, "output_every": 0.5, "dt_fixed": 0.01}}
    a = simulate(RunConfig.from_dict(base))
    b = simulate(RunConfig.from_dict({**base, "solver": {**base["solver"], "dt_fixed": 0.005}}))
    ra, rb = a.records[-1], b.records[-1]
    for name in ("X", "Xdot", "E_weighted", "sup_gap", "l2_gap"):
        assert abs(getattr(ra, name) - getattr(rb, name)) <= 1e-6


def test_simulate_bitwise_reproducible(tmp_path):
    cfg = {**SHORT, "perturbation": {"amplitude": [0.01, 0.0, 0.0]}}
    p = write_cfg(tmp_path, cfg)
    for sub in ("a", "b"):
        assert main(["--config", str(p), "--out", str(tmp_path / sub), "simulate"]) == EXIT_OK
    assert (tmp_path / "a" / "diagnostics.csv").read_bytes() == \
        (tmp_path / "b" / "diagnostics.csv").read_bytes()


def test_simulate_boundary_contamination_exit(tmp_path):
    cfg = {"solver": {"T_end": 2.0, "output_every": 1.0},
           "perturbation": {"amplitude": [0.01, 0.01, 0.01], "center": -14.0},
           "grid": {"h": 0.2, "xi_min": -20.0, "xi_max": 20.0}}
    p = write_cfg(tmp_path, cfg)
    assert main(["--config", str(p), "--out", str(tmp_path), "simulate"]) == 5


def test_check_passes_and_reverse_fails(tmp_path):
    assert main(["--out", str(tmp_path), "check"]) == EXIT_OK
    rep = json.loads((tmp_path / "check_report.json").read_text())
    assert set(rep["suites"]) == {"poincare", "shock_scaling", "sharp_diffusion", "quadrature"}
    assert all(r["passed"] for r in rep["suites"].values())
    assert main(["--out", str(tmp_path / "rev"), "check", "--reverse-poincare"]) == EXIT_CHECK


@pytest.mark.parametrize("seed", range(10))
def test_poincare_suite_seeds(seed):
    assert poincare_suite(seed=seed, count=200)["passed"]


def test_quadrature_suite():
    rep = quadrature_suite()
    assert rep["passed"]
    assert rep["h1_quadrature"] == pytest.approx(0.0442173049, abs=1e-9)


def test_threaded_checks_match_serial(monkeypatch):
    serial = run_all()
    monkeypatch.setenv("NSFWAVE_THREADS", "4")
    assert worker_count() == 4
    assert io.dumps(run_all()) == io.dumps(serial)
    monkeypatch.setenv("NSFWAVE_THREADS", "junk")
    assert worker_count() == 1
