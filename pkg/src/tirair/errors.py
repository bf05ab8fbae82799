"""Exception types raised across the package."""


class TirairError(Exception):
    """Base class for all package errors."""


class ConfigurationError(TirairError, ValueError):
    """Invalid or missing configuration (parameters, flags, sizes)."""


class DomainError(TirairError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PreconditionError(TirairError, ValueError):
    """Input violates a documented precondition (e.g. series not centered)."""


class DegenerateInputError(DomainError):
    """Input carries no usable information for the requested statistic."""


class NumericOverflowError(TirairError, ArithmeticError):
    """A generator produced a non-finite value."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InputFormatError(DomainError):
    """Malformed numeric input file."""

    def __init__(self, message, path=None, line=None):
        where = f"{path}:{line}: " if path is not None and line is not None else ""
        super().__init__(where + message)
        self.path = path
        self.line = line
