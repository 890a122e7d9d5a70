"""JSON run configuration with every default made explicit."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .exceptions import NSFWaveError
from .gas import GasParams, PrimState, WaveStrengths
from .solver import Perturbation, SolverConfig


class ConfigError(NSFWaveError, ValueError):
    """Malformed or invalid run configuration."""


@dataclass(frozen=True)
class GridSpec:
    h: float = 0.1
    xi_min: float | None = None
    xi_max: float | None = None

    def __post_init__(self):
        if not self.h > 0:
            raise ConfigError("grid spacing must be positive")
        if (self.xi_min is None) != (self.xi_max is None):
            raise ConfigError("give both xi_min and xi_max or neither")


@dataclass(frozen=True)
class RunConfig:
    gas: GasParams = field(default_factory=GasParams)
    plus_state: PrimState = field(default_factory=lambda: PrimState(1.0, 0.0, 1.0))
    strengths: WaveStrengths = field(default_factory=lambda: WaveStrengths(0.1, 0.1, 0.1))
    contact_sign: int = 1
    lambda_weight: float | None = None
    grid: GridSpec = field(default_factory=GridSpec)
    solver: SolverConfig = field(default_factory=lambda: SolverConfig(T_end=100.0))
    snapshot_times: tuple = (0.0,)
    profile_times: tuple = (0.0, 10.0, 100.0)
    output_dir: str = "out"
    seed: int = 42

    def to_dict(self) -> dict:
        d = asdict(self)
        d["snapshot_times"] = list(self.snapshot_times)
        d["profile_times"] = list(self.profile_times)
        d["solver"]["perturbation"]["amplitude"] = list(self.solver.perturbation.amplitude)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {"gas", "plus_state", "strengths", "contact_sign", "lambda_weight", "grid",
                 "solver", "perturbation", "snapshot_times", "profile_times", "output_dir",
                 "seed"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown configuration keys: {sorted(extra)}")
        try:
            solver = dict(d.get("solver", {}))
            pert = solver.pop("perturbation", None) or d.get("perturbation", {})
            if "amplitude" in pert:
                pert = {**pert, "amplitude": tuple(float(a) for a in pert["amplitude"])}
            solver.setdefault("T_end", 100.0)
            return cls(
                gas=GasParams(**d.get("gas", {})),
                plus_state=PrimState(**d.get("plus_state", {"v": 1.0, "u": 0.0, "theta": 1.0})),
                strengths=WaveStrengths(**d.get("strengths", {"delta_R": 0.1, "delta_C": 0.1,
                                                             "delta_S": 0.1})),
                contact_sign=int(d.get("contact_sign", 1)),
                lambda_weight=d.get("lambda_weight"),
                grid=GridSpec(**d.get("grid", {})),
                solver=SolverConfig(perturbation=Perturbation(**pert), **solver),
                snapshot_times=tuple(float(t) for t in d.get("snapshot_times", (0.0,))),
                profile_times=tuple(float(t) for t in d.get("profile_times", (0.0, 10.0, 100.0))),
                output_dir=str(d.get("output_dir", "out")),
                seed=int(d.get("seed", 42)),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
        return cls.from_dict(data)
