"""Exceptions raised by the solver library."""

from typing import (
    Any,
    Optional,
    Sequence,
)

######################################################################

class EmdenError(Exception):
    """Base class of all the errors raised by the package."""

######################################################################

class ExpressionSyntaxError(EmdenError):
    """Malformed potential expression."""

    def __init__(self, message: str, source: str, position: int):
        """Initialize with the offending position (0-based)."""
        super().__init__(f"{message} at position {position} in {source!r}")
        self.source = source
        self.position = position

class UnknownIdentifierError(ExpressionSyntaxError):
    """Identifier that is neither the variable nor a known function."""

class PotentialEvaluationError(EmdenError):
    """Evaluation of a potential left its domain (e.g. log of a negative)."""

######################################################################

class InvalidProblemError(EmdenError):
    """Problem instance that fails validation."""

    def __init__(self, report: Any):
        """Initialize with the validation report."""
        super().__init__(str(report))
        self.report = report

class UnsupportedInstanceError(EmdenError):
    """Problem instance outside what the radial machinery can handle."""

######################################################################

class DivergentPotentialError(EmdenError):
    """The decay integral of the majorant is not known to converge."""

    def __init__(self, verdict: Any):
        """Initialize with the integrability verdict."""
        super().__init__(f"decay condition not established: {verdict}")
        self.verdict = verdict

class CrossCheckError(EmdenError):
    """The two evaluations of the barrier constant disagree."""

class BarrierInvariantError(EmdenError):
    """A sampled barrier profile violates one of its invariants."""

class SupersolutionViolationError(EmdenError):
    """The barrier is not a discrete supersolution."""

    def __init__(self, report: Any):
        """Initialize with the verification report."""
        super().__init__(str(report))
        self.report = report

######################################################################

class EigenNonconvergenceError(EmdenError):
    """Inverse iteration did not settle within the iteration cap."""

class EpsilonUnderflowError(EmdenError):
    """No positive subsolution scale was found above the underflow floor."""

class SubsolutionViolationError(EmdenError):
    """The chosen scale does not make a discrete subsolution."""

######################################################################

class NonpositiveIterateError(EmdenError):
    """An iterate has a nonpositive value where the equation is singular."""

    def __init__(self, node: int, value: float):
        """Initialize with the first offending node."""
        super().__init__(f"nonpositive iterate u[{node}] = {value!r}")
        self.node = node
        self.value = value

class BracketCollapseError(EmdenError):
    """The subsolution lies above the supersolution somewhere."""

    def __init__(self, node: int, low: float, high: float):
        """Initialize with the first offending node."""
        super().__init__(
            f"bracket collapse at node {node}: low={low!r} > high={high!r}"
        )
        self.node = node

class MaxIterationsError(EmdenError):
    """Newton iteration stopped at the iteration cap."""

    def __init__(self, report: Any):
        """Initialize with the report of the failed run."""
        super().__init__(f"no convergence: {report}")
        self.report = report

class StalledLineSearchError(MaxIterationsError):
    """The line search found no step that reduces the residual."""

class MonotonicityViolationError(EmdenError):
    """Ball solutions are not ordered as the comparison principle demands."""

    def __init__(self, what: str, node: int, values: Sequence[float]):
        """Initialize with the offending node and the compared values."""
        shown = ", ".join(repr(value) for value in values)
        super().__init__(f"{what} violated at node {node}: {shown}")
        self.node = node
        self.values = list(values)

######################################################################

class ConfigError(EmdenError):
    """Problem with a configuration file."""

    def __init__(self, message: str, line: Optional[int] = None):
        """Initialize with an optional 1-based line number."""
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

class MissingFileError(ConfigError):
    """The configuration file does not exist."""

class ConfigParseError(ConfigError):
    """The configuration file is not well-formed."""

class UnknownKeyError(ConfigError):
    """The configuration file contains a key that is not recognized."""

class MissingKeyError(ConfigError):
    """A required configuration key is absent."""
