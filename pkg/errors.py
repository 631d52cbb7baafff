# Author: Ozy
"""
Exception hierarchy shared by the q-series kernel, the catalog and the CLI.
"""

from typing import Optional


class QSeriesError(Exception):
    """Base class for every error raised by the verification toolkit."""


class CycloZeroDivisionError(QSeriesError, ZeroDivisionError):
    """Inverse of the zero element of Q(w) was requested."""


class ZeroDenominatorError(QSeriesError, ZeroDivisionError):
    """A rational function was built (or divided) with a zero denominator."""


class NearPoleError(QSeriesError):
    """A floating evaluation landed too close to a pole."""

    def __init__(self, message: str, magnitude: float = 0.0):
        super().__init__(message)
        self.magnitude = magnitude


class NonUnitSeriesError(QSeriesError):
    """Series inversion was requested for a series with no known nonzero coefficient."""


class PoleFactorError(QSeriesError):
    """The geometric factor 1 - w was requested with w identically 1."""


class UnboundedSeriesError(QSeriesError):
    """An expansion would need unbounded negative q-exponents."""


class UnsupportedFieldError(QSeriesError):
    """A root-of-unity phase outside Q(w) reached the exact engine."""


class DegenerateSpecializationError(QSeriesError):
    """A specialization makes a denominator vanish identically."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class ExpressionSyntaxError(QSeriesError):
    """Malformed identity text."""

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        if position is not None:
            message = f"{message} at column {position + 1}: {text!r}"
        super().__init__(message)
        self.text = text
        self.position = position


class CatalogError(QSeriesError):
    """Catalog document failed to parse or validate."""

    def __init__(self, message: str, record_id: Optional[str] = None, field: Optional[str] = None):
        prefix = ""
        if record_id:
            prefix += f"[{record_id}] "
        if field:
            prefix += f"{field}: "
        super().__init__(prefix + message)
        self.record_id = record_id
        self.field = field


class NonConvergenceError(QSeriesError):
    """A numeric sum did not meet its tail bound within the iteration cap."""


class ConfigError(QSeriesError):
    """Invalid run configuration."""
