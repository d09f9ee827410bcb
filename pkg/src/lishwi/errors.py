"""Exception types raised by the numerical core."""

from __future__ import annotations


class LisHwiError(Exception):
    """Base class for lishwi failures."""


class NumericalFailure(LisHwiError):
    """A numerical procedure did not reach its tolerance."""

    def __init__(self, message: str, error_estimate: float = float("nan")) -> None:
        super().__init__(message)
        self.error_estimate = error_estimate


class BracketError(NumericalFailure):
    """The function has no sign change on the requested bracket."""

    def __init__(self, message: str, bracket: tuple[float, float]) -> None:
        super().__init__(message)
        self.bracket = bracket


class OffAxisUserError(ValueError, LisHwiError):
    """A closed-form path received a user off the central perpendicular line."""


class SnrLossUndefined(ZeroDivisionError, LisHwiError):
    """The SNR loss Ñ/N0 was requested with N0 = 0."""
