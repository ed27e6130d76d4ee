"""Exception types shared across the library."""


class InnerPaveError(Exception):
    """Base class for all library errors."""


class ShapeError(InnerPaveError):
    """Dimension mismatch between operands."""


class EmptyIntervalError(InnerPaveError):
    """A metric or arithmetic operation was applied to the empty interval."""


class DivisionByZeroInterval(InnerPaveError):
    """Division by an interval containing zero."""


class DomainError(InnerPaveError):
    """Argument outside the domain of an elementary function."""


class SingularDiagonalError(InnerPaveError):
    """A diagonal interval entry contains zero where the contraction step
    requires its inverse."""


class NumericallySingularError(InnerPaveError):
    """A real matrix whose pivots fall below the singularity tolerance."""


class InvalidScalingError(InnerPaveError):
    """Scaling vector for the H-matrix test is not strictly positive."""


class InvalidInputError(InnerPaveError):
    """Input violates a documented precondition (e.g. negative entry where a
    nonnegative matrix is required)."""


class InvalidParamsError(InnerPaveError):
    """Invalid generator or configuration parameters."""


class InternalCertificationError(InnerPaveError):
    """A selection returned by an extraction LP failed its post-verification
    regularity test; indicates big-M numerics tighter than the slack mu."""


class RankProfileMismatch(InnerPaveError):
    """A rank profile is structurally incompatible with the function it is
    applied to (duplicate or out-of-range indices)."""


class ProfileUnavailableError(InnerPaveError):
    """No sub-matrix of rank >= 1 could be certified; nothing is provable."""


class DegenerateBoxError(InnerPaveError):
    """Bisection requested on a box of zero width."""


class SoundnessError(InnerPaveError):
    """Internal soundness failure: two enclosures of the same set turned out
    disjoint.  Always a bug, never a recoverable condition."""


class ExprSyntaxError(InnerPaveError):
    """Syntax error while parsing a function description.

    Carries 1-based ``line`` and ``column`` of the offending token.
    """

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
