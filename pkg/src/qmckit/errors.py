"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: parameter, parse and representation
problems exit with 2, capacity guards with 3.
"""


class QmcError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(QmcError, ValueError):
    """An argument is outside the documented domain."""


class CapacityError(QmcError):
    """A requested enumeration or construction exceeds its guard."""


class RepresentationError(QmcError, ValueError):
    """Input lacks the exact representation an operation needs."""


class DegenerateOrbitError(ParameterError):
    """A linear congruential recursion sits on its fixed point."""


class NumericalConsistencyError(QmcError, ArithmeticError):
    """A computed quantity violated an identity beyond rounding slack."""


class ParseError(QmcError, ValueError):
    """Malformed point-set, matrix or report file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
