"""Numerical laboratory for the rarefaction + viscous contact + viscous shock composite
wave of the one-dimensional compressible Navier-Stokes-Fourier system."""
from .ansatz import AnsatzEval, CompositeAnsatz, ansatz_residual, eval_ansatz
from .exceptions import (BoundaryContaminationError, ConstructionError, ConvergenceError,
                         DomainError, NSFWaveError, PositivityError, PreconditionError)
from .gas import (EndStates, GasParams, PrimState, WaveStrengths, build_end_states,
                  check_end_states)

__version__ = "0.1.0"

__all__ = [
    "AnsatzEval", "BoundaryContaminationError", "CompositeAnsatz", "ConstructionError",
    "ConvergenceError", "DomainError", "EndStates", "GasParams", "NSFWaveError",
    "PositivityError", "PreconditionError", "PrimState", "WaveStrengths", "ansatz_residual",
    "build_end_states", "check_end_states", "eval_ansatz",
]
