"""Exception hierarchy shared by every module."""


class CgicError(Exception):
    """Base class for all library errors."""


class InvalidInputError(CgicError, ValueError):
    """Malformed channel, spec, direction or rate vector."""


class SpecParseError(InvalidInputError):
    """Channel spec file rejected; carries the source position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class InvalidDirectionError(InvalidInputError):
    """Support direction with a negative component."""


class NumericalDegeneracyError(CgicError, ArithmeticError):
    """A covariance or entropy computation left its tolerance band."""


class InvariantViolation(CgicError, AssertionError):
    """An internal invariant that construction should guarantee was broken."""


class ResourceLimitError(CgicError):
    """A configured size cap would be exceeded."""


class PreconditionError(CgicError):
    """An operation was called on an input outside its domain."""


class InfeasibleError(CgicError):
    """Linear program has no feasible point."""


class UnboundedError(CgicError):
    """Linear program objective is unbounded."""
