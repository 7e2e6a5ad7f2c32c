"""Exception types shared across the package."""


class TropicalError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(TropicalError):
    """Matrix operands have incompatible shapes."""


class NotSquare(TropicalError):
    """A square matrix was required."""


class ZeroMatrix(TropicalError):
    """The operation is undefined for an all-zero matrix."""


class NotAVector(TropicalError):
    """A one-column matrix was required."""


class StarDiverges(TropicalError):
    """The Kleene star series does not converge (some cycle mean is positive)."""

    def __init__(self, message: str, trace_value=None):
        super().__init__(message)
        self.trace_value = trace_value


class InverseOfZero(TropicalError):
    """The zero element has no multiplicative inverse."""


class ZeroToNonpositivePower(TropicalError):
    """zero ** e is undefined for e <= 0."""


class NotColumnRegular(TropicalError):
    """A matrix with no all-zero column was required."""


class NotRegularVector(TropicalError):
    """A vector with no zero entries was required."""


class InternalConsistency(TropicalError):
    """An invariant that should hold by construction was violated."""


class InvalidInstance(TropicalError):
    """A problem instance violates its structural requirements."""


class StageOneInfeasible(TropicalError):
    """The first-stage problem has no regular solution."""


class StageTwoInfeasible(TropicalError):
    """The second-stage problem has no regular solution."""


class ParameterOutOfBox(TropicalError):
    """A solution parameter lies outside its admissible box."""


class GridTooLarge(TropicalError):
    """A brute-force grid would exceed the evaluation budget."""


class ParseError(TropicalError):
    """An instance or report file could not be parsed."""
