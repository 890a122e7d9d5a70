"""Exception hierarchy for nsfwave."""


class NSFWaveError(Exception):
    """Base class for all package errors."""


class DomainError(NSFWaveError, ValueError):
    """A thermodynamic argument is outside its domain (v <= 0, theta <= 0, ...)."""


class PreconditionError(NSFWaveError, ValueError):
    """An operation was called outside its admissible parameter range."""


class ConstructionError(NSFWaveError, RuntimeError):
    """A wave or end-state construction failed (no admissible solution, monotonicity lost)."""


class ConvergenceError(NSFWaveError, RuntimeError):
    """An iterative solver did not converge within its budget."""


class PositivityError(NSFWaveError, RuntimeError):
    """Specific volume or temperature became nonpositive during a time step.

    The offending field is attached as ``snapshot`` so callers can dump it.
    """

    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = snapshot


class BoundaryContaminationError(NSFWaveError, RuntimeError):
    """Waves reached the Dirichlet boundary of the truncated domain."""
