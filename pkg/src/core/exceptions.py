from typing import List, Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from src.circuit_ir.validation import Violation


class MeasureLessError(Exception):
    """Base class for all errors raised by the optimizer."""


class CircuitError(MeasureLessError):
    """A circuit could not be read or is not well formed."""


class CircuitSyntaxError(CircuitError):
    """Raised when circuit source text does not follow the grammar."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class CircuitValidationError(CircuitError):
    """Raised when a circuit violates one or more structural rules."""

    def __init__(self, violations: List["Violation"]):
        self.violations = list(violations)
        details = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid circuit: {details}")


class ResourceLimitError(MeasureLessError):
    """Raised when an operation would exceed a configured size limit."""


class PreconditionError(MeasureLessError):
    """Raised when a rewrite is requested on an instruction it does not apply to."""


class NotSeparableError(MeasureLessError):
    """Raised when factoring a qubit that is entangled with its group."""


class EnsembleShapeError(MeasureLessError):
    """Raised when composing ensembles or comparing outputs of incompatible shapes."""
