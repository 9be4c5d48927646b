"""Exception hierarchy shared by every ramasum module."""

from __future__ import annotations


class RamasumError(Exception):
    """Base class for all library errors."""


class PrecisionError(RamasumError):
    """Working precision is invalid (for example fewer than 64 bits)."""


class DomainError(RamasumError, ValueError):
    """Argument outside the real domain of a function."""


class PoleError(DomainError):
    """Evaluation at (or too close to) a pole."""


class ConvergenceError(RamasumError):
    """An iterative or asymptotic procedure failed to reach its tolerance."""


class InadmissibleError(RamasumError):
    """Term grows too fast (exponential rate >= pi) for Ramanujan summation."""


class InternalConsistencyError(RamasumError):
    """Two independent computation paths disagree beyond their error bounds."""


class TailBoundError(RamasumError):
    """A declared growth model cannot bound an integral tail below tolerance."""


class ContinuationError(RamasumError):
    """The analytic continuation of a Borel transform is unusable on [0, A]."""


class InsufficientCoefficientsError(RamasumError):
    """Too few Taylor coefficients for the requested Pade order."""


class DegenerateDenominatorError(RamasumError):
    """Pade denominator system is singular at every admissible order."""


class TruncationError(RamasumError):
    """A formal series was truncated below the requested coefficient."""


class UnknownCheckError(RamasumError, KeyError):
    """No identity check is registered under the given id."""


class PrecisionInsufficientError(RamasumError):
    """The requested tolerance cannot be reached at the working precision."""


class MissingParameterError(RamasumError):
    """The expression references ``z`` but no value was supplied."""


class UnknownFunctionError(RamasumError):
    """The expression calls a function outside the grammar."""

    def __init__(self, name: str, column: int) -> None:
        super().__init__(f"unknown function {name!r} at column {column}")
        self.name = name
        self.column = column


class SeriesSyntaxError(RamasumError, SyntaxError):
    """Malformed series-term text; ``column`` is 1-based."""

    def __init__(self, message: str, column: int, text: str = "") -> None:
        super().__init__(f"{message} at column {column}")
        self.msg = message
        self.column = column
        self.text = text
        self.offset = column

    def __str__(self) -> str:
        return f"{self.msg} at column {self.column}"
