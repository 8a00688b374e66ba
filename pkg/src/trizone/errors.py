"""Exception hierarchy shared by all trizone modules."""

from __future__ import annotations


class TrizoneError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateZone(TrizoneError):
    """A zone matrix is singular where an equilibrium is required."""


class NonFocusZone(TrizoneError):
    """A zone needs complex eigenvalues (focus/center) but has real ones."""


class UnsupportedZoneType(TrizoneError):
    """A half-map was requested outside its admissible trace sign."""


class NoCrossing(TrizoneError):
    """The orbit provably never reaches the requested switching line."""


class BracketFailure(TrizoneError):
    """No sign change found inside the admissible angle window."""


class TangentialCrossing(TrizoneError):
    """The first crossing grazes the line; excluded from map composition."""


class DomainError(TrizoneError):
    """Half-map input lies outside the map's domain."""


class ConvergenceError(TrizoneError):
    """An iterative solve failed to converge; carries the bracket."""


class MissingLandmark(TrizoneError):
    """A landmark constant is undefined in this parameter regime."""


class UnsupportedRegime(TrizoneError):
    """The parameter regime does not support the requested composition."""


class NoBracket(TrizoneError):
    """No displacement sign change in the searched range.

    Carries the sampled displacement table for diagnosis.
    """

    def __init__(self, message: str, table: list[tuple[float, float]] | None = None):
        super().__init__(message)
        self.table = table or []


class InvalidFamily(TrizoneError):
    """A two-parameter family constraint is violated; names the constraint."""


class InconclusiveSign(TrizoneError):
    """Constant and first-order displacement terms both vanish."""


class StepUnderflow(TrizoneError):
    """The adaptive integrator stalled; carries the failure location."""


class ConfigError(TrizoneError):
    """Malformed run configuration; names the offending key."""
