"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class SonovacError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SonovacError, ValueError):
    """Arguments violate a precondition (bad ranges, malformed files, NaNs)."""


class UnsupportedOperationError(SonovacError):
    """The requested observable has no implementation for this input kind."""


class QuadratureError(SonovacError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    The best available estimate and its error are kept on the exception so
    callers can decide whether the result is still usable.
    """

    def __init__(self, message: str, estimate: complex | float, error: float, subdivisions: int):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.subdivisions = subdivisions


class NumericalQualityError(SonovacError):
    """A numerically derived quantity is too inaccurate to be reported."""

    def __init__(self, message: str, relative_error: float):
        super().__init__(message)
        self.relative_error = relative_error
