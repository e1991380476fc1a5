"""Exception hierarchy shared by every module of the package."""


class FEFError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FEFError, ValueError):
    """An input matrix, vector or parameter failed validation."""


class NonSquare(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DimensionTooSmall(ValidationError):
    pass


class WrongDimension(ValidationError):
    pass


class ParamOutOfRange(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


class ParseError(FEFError):
    """A state file could not be parsed."""


class ConsistencyError(FEFError):
    """An internal consistency check failed; indicates a bug, never bad user input."""


class HermiticityViolation(ConsistencyError):
    """An internally constructed matrix that must be Hermitian is not."""
