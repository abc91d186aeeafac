"""Screening configuration for the scaled quantum of action.

A screening fraction ``alpha`` in (0, 1] multiplies Planck's constant
everywhere it appears in the dynamics, so the effective quantum of action
is ``alpha * hbar``.  ``alpha = 1`` recovers ordinary quantum mechanics and
``alpha -> 0`` is the classical limit.  The same fraction splits a total
mass into a screened part ``alpha * M`` and an unscreened remainder.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

#: Planck's constant over 2*pi in SI units (J*s), for unit-carrying callers.
HBAR_SI = 1.05457e-34


@dataclass(frozen=True)
class ScreeningParams:
    """Immutable bundle of the physical constants of a run.

    alpha:      screening fraction in (0, 1]; scales hbar wherever the
                quantum of action enters.
    mass_total: total mass M > 0 of the particle.
    hbar:       unscreened quantum of action > 0 (default 1.0, natural units).
    """

    alpha: float
    mass_total: float = 1.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.mass_total > 0.0:
            raise DomainError(f"mass_total must be positive, got {self.mass_total}")
        if not self.hbar > 0.0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")

    @property
    def mass_screened(self) -> float:
        """Screened portion alpha * M of the total mass."""
        return self.alpha * self.mass_total

    @property
    def mass_rest(self) -> float:
        """Unscreened remainder (1 - alpha) * M."""
        return (1.0 - self.alpha) * self.mass_total


def effective_hbar(params: ScreeningParams) -> float:
    """Effective quantum of action alpha * hbar."""
    return params.alpha * params.hbar


def screening_size(alpha: float) -> float:
    """Linear screening fraction sigma = 1 - (1 - alpha)**(1/3).

    For a uniform sphere, screening a volume fraction ``alpha`` of the mass
    corresponds to screening the fraction ``sigma`` of the radius.  Accepts
    the closed interval [0, 1]: the endpoints are the unscreened and fully
    screened limits.
    """
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must lie in [0, 1] for screening_size, got {alpha}")
    return 1.0 - (1.0 - alpha) ** (1.0 / 3.0)


def uncertainty_bound(params: ScreeningParams) -> float:
    """Lower bound alpha * hbar / 2 of the position-momentum uncertainty
    product under the scaled quantum of action."""
    return 0.5 * params.alpha * params.hbar
