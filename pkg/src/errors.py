# src/errors.py

"""
Exception hierarchy shared by the arithmetic, expansion and evaluation code.

Every error carries the process exit code used by `run_cf.py`:

    0  success
    2  precondition (bad field, bad literal, unsupported pairing, ...)
    3  precision exhausted
    4  enumeration budget exceeded
"""

from typing import Any, Optional


class PadicCFError(Exception):
    """Base class for every library error."""

    exit_code = 1


class PreconditionViolated(PadicCFError, ValueError):
    exit_code = 2


class BrowkinEvenPrime(PreconditionViolated):
    pass


class BadRamifier(PreconditionViolated):
    pass


class NoIrreducibleFound(PreconditionViolated):
    pass


class UnsupportedField(PreconditionViolated):
    pass


class NotIntegrable(PreconditionViolated):
    pass


class LiteralSyntaxError(PreconditionViolated):
    """
    Raised by the element-literal parser. `diagnostic` holds the source line
    with a caret under the offending position.
    """

    def __init__(self, message: str, source: str, position: int):
        self.source = source
        self.position = position
        self.diagnostic = f"{source}\n{' ' * position}^"
        super().__init__(f"{message}\n{self.diagnostic}")


class DivisionByZero(PadicCFError, ZeroDivisionError):
    exit_code = 2


class PrecisionExhausted(PadicCFError, ArithmeticError):
    exit_code = 3


class BudgetExceeded(PadicCFError):
    exit_code = 4


class IdentityViolated(PadicCFError, AssertionError):
    """An exact identity that must hold by construction failed."""


class NonTermination(PadicCFError):
    """
    The expansion did not terminate within `max_steps`. The partial
    certificate is attached so a batch can report the input for review.
    """

    exit_code = 0

    def __init__(self, message: str, certificate: Optional[Any] = None):
        self.certificate = certificate
        super().__init__(message)
