"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` used by the CLI to
emit single-line ``error[Code]: message`` diagnostics.
"""


class PolyflowError(Exception):
    """Base class for all polyflow errors."""

    code = "Error"


class DomainError(PolyflowError, ValueError):
    """A parameter lies outside its documented domain."""

    code = "Domain"


class DimensionMismatchError(PolyflowError):
    """Operands disagree in vertex count or ambient dimension."""

    code = "DimensionMismatch"


class SingularBoundaryError(PolyflowError):
    """Two-point data cannot determine a mode: its boundary weight vanishes."""

    code = "SingularBoundary"

    def __init__(self, mode: int, message: str | None = None):
        self.mode = mode
        super().__init__(message or f"mode {mode}: boundary weight vanishes, "
                         "two-point data cannot determine this mode")


class NoSuchSolutionError(PolyflowError):
    """The requested special solution does not exist."""

    code = "NoSuchSolution"


class SpanViolationError(PolyflowError):
    """A polygon lies outside the mode span required by the construction."""

    code = "SpanViolation"


class AllModesZeroError(PolyflowError):
    """Every oscillatory mode coefficient vanishes (point polygon)."""

    code = "AllModesZero"


class TimeRangeError(PolyflowError):
    """Requested evaluation time would overflow double precision."""

    code = "TimeRange"


class QuadratureStepError(PolyflowError):
    """Quadrature step too coarse for the requested integral."""

    code = "QuadratureStep"


class NonFiniteStateError(PolyflowError):
    """The integrator state stopped being finite."""

    code = "NonFiniteState"

    def __init__(self, time: float):
        self.time = time
        super().__init__(f"integration produced a non-finite state at t={time:.6g}")


class ParseError(PolyflowError):
    """Malformed polygon, frame, or trajectory file."""

    code = "Parse"
