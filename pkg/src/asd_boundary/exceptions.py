"""asd-boundary exceptions."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Any


class AsdBoundaryError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InvalidArgumentError(AsdBoundaryError, ValueError):
    """Argument outside the operation's domain."""

    exit_code = 2


class SingularGaugeError(InvalidArgumentError):
    """Evaluation at the singular point of a radial gauge."""


class OutOfPatchError(InvalidArgumentError):
    """Point outside the background coordinate patch."""


class ScaleValidationError(InvalidArgumentError):
    """Cutoff scales violate the scale-separation inequalities."""


class DegenerateInputError(AsdBoundaryError):
    """Curvature matrix spectrum is not generic."""

    exit_code = 3
    message = "{0}: spectrum class {1} (gap {2:.3e})"

    def __init__(self, reason: str, spectrum: Any) -> None:
        super().__init__(reason, spectrum.kind.value, spectrum.gap)
        self.spectrum = spectrum

    def __str__(self) -> str:
        """String representation."""
        return self.message.format(*self.args)


class InfiniteSolutionsError(DegenerateInputError):
    """Matrix is a multiple of SO(3): every rotation axis gives a root."""


class AlreadyReducibleError(DegenerateInputError):
    """Matrix already has rank at most one."""


class IndeterminateSignError(AsdBoundaryError):
    """Jacobian too ill-conditioned to read off an orientation sign."""

    exit_code = 3


class CertificateError(AsdBoundaryError):
    """A numerical certificate (count, residual, monotonicity) failed."""

    exit_code = 3


class ConvergenceError(AsdBoundaryError):
    """Nonlinear solver did not converge."""

    exit_code = 4


class IncompleteCountError(ConvergenceError):
    """Multistart budget exhausted before every branch pair produced a solution."""

    def __init__(self, message: str, solutions: list[Any]) -> None:
        super().__init__(message)
        self.solutions = solutions


class NonContractionError(ConvergenceError):
    """Fixed-point iteration failed to contract."""


class ContinuationError(ConvergenceError):
    """A tracked solution left the plateau, crossed another path or stalled."""

    def __init__(self, message: str, diagnostics: dict[str, Any]) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics


class ExperimentValidationError(AsdBoundaryError):
    """Experiment parameters do not match the command schema."""

    exit_code = 2


class SchemaVersionError(ExperimentValidationError):
    """Document was written with an incompatible schema version."""
