"""Exception types shared across the package."""


class ValueSetError(Exception):
    """Base class for all package-specific errors."""


class NotPrimeError(ValueSetError):
    """A number required to be prime is not."""


class OrderTooLargeError(ValueSetError):
    """The field order exceeds the exhaustive-enumeration cap."""


class NotMonicError(ValueSetError):
    """A polynomial required to be monic is not."""


class SingularMatrixError(ValueSetError):
    """A linear system has no unique solution."""


class FieldMismatchError(ValueSetError):
    """Operands belong to different fields, or a coefficient is out of range."""


class ParseError(ValueSetError):
    """Input text does not conform to the expected grammar."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class DegreeCapExceededError(ValueSetError):
    """A representation is too large to expand into dense form."""


class ZeroPolynomialError(ValueSetError):
    """The zero polynomial was passed where a root test is ambiguous."""


class NonIntegralResultError(ValueSetError):
    """An exact computation produced a non-integer; signals an internal bug."""


class PrimeTooSmallError(ValueSetError):
    """The supplied prime is below the bound a construction requires."""


class DeskScaleExceededError(ValueSetError):
    """An exhaustive construction or oracle exceeds the desk-scale limits."""


class EvenCharacteristicError(ValueSetError):
    """A quadratic-character operation was requested in characteristic 2."""


class ClauseTooLongError(ValueSetError):
    """A CNF clause has more than three literals."""
