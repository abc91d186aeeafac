"""Exception hierarchy shared across the solver.

Everything derives from :class:`AlphaWkbError` so callers can catch the
package's failures with a single except clause.  Subclasses additionally
derive from the closest builtin (ValueError, RuntimeError, OverflowError)
so generic handling keeps working.
"""

from __future__ import annotations


class AlphaWkbError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AlphaWkbError, ValueError):
    """An input lies outside the declared validity domain (x range, alpha range)."""


class ConfigError(AlphaWkbError, ValueError):
    """A run configuration failed schema validation."""


class UnsupportedOrderError(AlphaWkbError, ValueError):
    """A derivative order beyond what the potential representation supports."""


class ForbiddenRegionError(AlphaWkbError, ValueError):
    """Evaluation requested in a classically forbidden region (E < V) where
    the quantity is only defined on the allowed side."""


class NearTurningPointError(AlphaWkbError, ValueError):
    """Evaluation too close to a classical turning point for the requested
    quantity to be numerically meaningful."""


class UseUniformError(AlphaWkbError, ValueError):
    """Piecewise WKB form requested inside a connection region; the uniform
    (Airy-based) form must be used there instead."""


class DegenerateTurningPointError(AlphaWkbError, ValueError):
    """The potential slope vanishes at a turning point, so the linear-ramp
    connection analysis does not apply."""


class TurningPointTopologyError(AlphaWkbError, ValueError):
    """The energy does not produce the turning-point structure the operation
    requires (e.g. exactly one allowed interval)."""


class NoBoundStateError(AlphaWkbError, RuntimeError):
    """The requested bound-state index does not exist below the confining
    ceiling of the potential on its domain."""


class StepTooCoarseError(AlphaWkbError, ValueError):
    """Grid spacing violates the stability precondition of the integrator."""


class ConvergenceError(AlphaWkbError, RuntimeError):
    """An iterative solve failed to reach its tolerance."""


class RangeOverflowError(AlphaWkbError, OverflowError):
    """Function argument outside the supported range; the dominant exponent
    scale is carried for diagnosis."""

    def __init__(self, message: str, exponent_scale: float | None = None):
        super().__init__(message)
        self.exponent_scale = exponent_scale
