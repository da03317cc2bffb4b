"""Exception hierarchy.

Every error raised on purpose by the package derives from ``UnitdiscError``
so callers (the CLI in particular) can map failures to exit codes.
"""


class UnitdiscError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(UnitdiscError, ValueError):
    pass


class ParseError(UnitdiscError, ValueError):
    pass


class NotUnitary(UnitdiscError, ValueError):
    pass


class NotHermitian(UnitdiscError, ValueError):
    pass


class NotADensityMatrix(UnitdiscError, ValueError):
    pass


class NotNormalized(UnitdiscError, ValueError):
    pass


class ConvergenceFailure(UnitdiscError, ArithmeticError):
    pass


class OriginInHull(UnitdiscError, ValueError):
    pass


class InvalidEpsilon(UnitdiscError, ValueError):
    pass


class ParamOutOfRange(UnitdiscError, ValueError):
    pass


class SingularValueTooLarge(UnitdiscError, ValueError):
    pass


class NotUnitaryAfterConstruction(UnitdiscError, ArithmeticError):
    pass


class NotAnEigenstate(UnitdiscError, ValueError):
    pass


class NotAReflection(UnitdiscError, ValueError):
    pass


class WrongCase(UnitdiscError, ValueError):
    pass


class IndexOutOfRange(UnitdiscError, IndexError):
    pass


class BoundViolation(UnitdiscError, ArithmeticError):
    """A proven inequality failed numerically; indicates a bug, not bad input."""
