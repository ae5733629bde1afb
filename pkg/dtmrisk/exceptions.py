"""Error hierarchy shared by every dtmrisk module."""

from __future__ import annotations


class DTMError(Exception):
    """Base class for all dtmrisk errors."""


class DomainError(DTMError, ValueError):
    """An argument lies outside the domain of the requested function."""


class UnsupportedOrderError(DTMError, ValueError):
    """Family parameters do not support the requested generator, normalizer or moment."""


class DegenerateWindowError(DTMError, ValueError):
    """The truncation window carries numerically no probability mass."""


class AccuracyError(DTMError, ArithmeticError):
    """A quadrature or series evaluation missed its accuracy bar."""

    def __init__(self, message: str, estimate: float, secondary: float | None = None) -> None:
        super().__init__(message)
        self.estimate = estimate
        self.secondary = secondary


class DataFormatError(DTMError, ValueError):
    """Malformed return-series input."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
