"""Bohr-Sommerfeld quantization with the screened action scale.

A bound level of index n solves

    2 * integral_{x1}^{x2} sqrt(2 M (E - V)) dx = 2 pi alpha hbar nu(n),

where nu = n + 1/2 for two smooth turning points (the connection-formula
offset), nu = n for the old-quantum-theory convention, and for a hard
wall on the left nu = n - 1/4 (half-offset rule) or nu = n with 1-based
n.  The action map E -> A(E) is strictly increasing on a confining well,
so levels come from bracketing plus a safeguarded hybrid root-finder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DomainError,
    NoBoundStateError,
    TurningPointTopologyError,
)
from .params import ScreeningParams, effective_hbar
from .potentials import Potential, turning_points
from .quadrature import integrate

#: relative tolerance for quantized energies.
ENERGY_RTOL = 1e-10


@dataclass(frozen=True)
class QuantizationRule:
    """Maslov offset choice: 0.5 (connection formula) or 0.0 (old rule)."""

    maslov_offset: float = 0.5
    description: str = ""

    def __post_init__(self) -> None:
        if self.maslov_offset not in (0.0, 0.5):
            raise DomainError(
                f"maslov_offset must be 0.0 or 0.5, got {self.maslov_offset}"
            )


HALF_RULE = QuantizationRule(0.5, "connection-formula offset n + 1/2")
OLD_RULE = QuantizationRule(0.0, "old-quantum-theory offset n")


@dataclass(frozen=True)
class EnergySpectrum:
    """Ordered bound levels (n, E_n) under one rule and parameter set."""

    levels: tuple[tuple[int, float], ...]
    rule: QuantizationRule
    params: ScreeningParams
    potential: Potential

    def __post_init__(self) -> None:
        es = [e for _, e in self.levels]
        ns = [n for n, _ in self.levels]
        if any(b <= a for a, b in zip(es, es[1:])):
            raise DomainError("spectrum energies must increase strictly")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise DomainError("spectrum indices must increase strictly")

    def energies(self) -> np.ndarray:
        return np.array([e for _, e in self.levels])


def effective_nu(rule: QuantizationRule, n: int, hard_wall: bool) -> float:
    """Quantization count nu for level n under the rule.

    Smooth wells index from n = 0; hard-wall wells from n = 1, where the
    wall replaces one connection phase: nu = n - 1/4 under the half rule.
    """
    if hard_wall:
        if n < 1:
            raise DomainError("hard-wall wells index levels from n = 1")
        return n - 0.25 if rule.maslov_offset == 0.5 else float(n)
    if n < 0:
        raise DomainError("level index must be >= 0")
    return n + rule.maslov_offset


def _well_extent(potential: Potential, energy: float) -> tuple[float, float]:
    """Turning-point pair (x1, x2) for the action; a hard wall stands in
    for the left turning point."""
    tps = turning_points(potential, energy)
    if potential.hard_wall_left:
        if len(tps) != 1:
            raise TurningPointTopologyError(
                f"hard-wall action needs exactly one smooth turning point, "
                f"E={energy} has {len(tps)}"
            )
        if energy <= potential.value(potential.x_min):
            raise TurningPointTopologyError(
                f"E={energy} does not clear the potential at the wall"
            )
        return potential.x_min, tps[0]
    if len(tps) != 2:
        raise TurningPointTopologyError(
            f"action integral needs exactly two turning points, E={energy} "
            f"has {len(tps)}"
        )
    return tps[0], tps[1]


def action_integral(potential: Potential, energy: float, params: ScreeningParams) -> float:
    """A(E) = 2 * integral sqrt(2 M (E - V)) dx across the allowed region.

    The substitution x = mid + half * sin(theta) absorbs the square-root
    vanishing of the integrand at both ends, leaving a smooth integrand
    for adaptive quadrature at relative 1e-10.
    """
    x1, x2 = _well_extent(potential, energy)
    mid = 0.5 * (x1 + x2)
    half = 0.5 * (x2 - x1)
    two_m = 2.0 * params.mass_total

    def integrand(theta: float) -> float:
        x = mid + half * math.sin(theta)
        gap = energy - potential.value(x)
        if gap <= 0.0:
            return 0.0  # roundoff at the endpoints only
        return math.sqrt(two_m * gap) * half * math.cos(theta)

    return 2.0 * integrate(integrand, -0.5 * math.pi, 0.5 * math.pi)


def _domain_floor_ceiling(potential: Potential) -> tuple[float, float]:
    xs = np.linspace(potential.x_min, potential.x_max, 4097)
    v_min = float(np.min(potential.value(xs)))
    if potential.hard_wall_left:
        ceiling = float(potential.value(potential.x_max))
    else:
        ceiling = float(
            min(potential.value(potential.x_min), potential.value(potential.x_max))
        )
    if ceiling <= v_min:
        raise NoBoundStateError("potential has no confining range on this domain")
    return v_min, ceiling


def _action_or_none(potential: Potential, energy: float, params: ScreeningParams):
    """Action if the topology supports it; None for energies so close to
    the well bottom that the turning-point scan cannot resolve a pair."""
    try:
        return action_integral(potential, energy, params)
    except TurningPointTopologyError:
        return None


def quantize(
    potential: Potential,
    n: int,
    params: ScreeningParams,
    rule: QuantizationRule = HALF_RULE,
    _floor: float | None = None,
) -> float:
    """Energy of level n: the root of A(E) = 2 pi alpha hbar nu(n).

    Brackets by exponential expansion upward from the well bottom (or
    from `_floor`, a known lower level, when reusing spectra brackets),
    then refines with a bisection/secant safeguarded hybrid to relative
    1e-10.  A target above the confining ceiling raises a
    no-bound-state error.
    """
    nu = effective_nu(rule, n, potential.hard_wall_left)
    target = 2.0 * math.pi * effective_hbar(params) * nu
    if target <= 0.0:
        raise NoBoundStateError(
            f"rule {rule.maslov_offset} gives level n={n} zero enclosed "
            "action; no such bound state"
        )

    v_min, ceiling = _domain_floor_ceiling(potential)
    span = ceiling - v_min
    # stop a sliver below the ceiling: exactly at it the outer turning
    # point degenerates into the domain edge (flat tails even produce
    # spurious root clusters there)
    e_top = ceiling - 1e-9 * span
    lo = _floor if _floor is not None else v_min + 1e-9 * span
    a_lo = _action_or_none(potential, lo, params)
    if a_lo is not None and a_lo >= target:
        raise DomainError(
            f"bracket floor E={lo} already exceeds the target action for n={n}"
        )

    step = 1e-6 * span
    hi = lo
    while True:
        hi = min(hi + step, e_top)
        a_hi = _action_or_none(potential, hi, params)
        if a_hi is not None and a_hi >= target:
            break
        if hi >= e_top:
            raise NoBoundStateError(
                f"action target for n={n} not reached below the confining "
                f"ceiling {ceiling:g}"
            )
        if a_hi is not None:
            lo = hi
        step *= 2.0

    return float(
        brentq(
            lambda e: action_integral(potential, e, params) - target,
            lo,
            hi,
            rtol=ENERGY_RTOL,
        )
    )


def spectrum(
    potential: Potential,
    n_max: int,
    params: ScreeningParams,
    rule: QuantizationRule = HALF_RULE,
) -> EnergySpectrum:
    """Levels up to n_max under the rule, reusing each converged level as
    the bracket floor for the next.

    Smooth wells start at n = 0 (n = 1 under the old rule, whose n = 0
    target is the empty orbit); hard-wall wells start at n = 1.  On a
    per-level failure the raised error carries the levels already found
    in its `partial` attribute.
    """
    if potential.hard_wall_left or rule.maslov_offset == 0.0:
        n_start = 1
    else:
        n_start = 0
    levels: list[tuple[int, float]] = []
    floor: float | None = None
    for n in range(n_start, n_max + 1):
        try:
            e_n = quantize(potential, n, params, rule, _floor=floor)
        except (NoBoundStateError, TurningPointTopologyError) as err:
            err.partial = EnergySpectrum(tuple(levels), rule, params, potential)
            raise
        levels.append((n, e_n))
        floor = e_n
    return EnergySpectrum(tuple(levels), rule, params, potential)
