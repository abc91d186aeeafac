"""Series terms of the screened semiclassical expansion.

The log-derivative phase density y(x) of an exponential ansatz for the
wavefunction satisfies the Riccati equation

    (alpha*hbar/i) y' = p**2 - y**2,        p**2 = 2 M (E - V(x)),

and is expanded in powers of (alpha/i):  y = sum_n (alpha/i)**n y_n.
Matching powers gives y_0 = +/- p and the recursion

    hbar * y_{n-1}' = - sum_{m=0..n} y_{n-m} y_m,     n >= 1,

whose first closed-form solutions are

    y_1 = hbar V' / (4 (E - V)),
    y_2 = -/+ (hbar**2/32) (5 V'**2 + 4 V'' (E-V)) / ((2M)^{1/2} (E-V)^{5/2}),
    y_3 = - hbar * d/dx [ y_2 / (2 y_0) ].

The +/- branch of y_0 fixes the sign of y_2 (and of y_3 through y_0).
y_3 is evaluated by finite differencing the closed-form ratio, with a
step tied to the local classical length scale p**2/(M |V'|).

Everything here works at points strictly inside the classically allowed
region (or, for y_1, anywhere with E != V).  Near turning points the
guard |E - V| < 1e-12 * max(|E|, 1) raises NearTurningPointError; the
connection machinery in `wavefunction` takes over there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from . import quadrature
from .errors import (
    DegenerateTurningPointError,
    ForbiddenRegionError,
    NearTurningPointError,
    UnsupportedOrderError,
)
from .numdiff import richardson_derivative
from .params import ScreeningParams, effective_hbar
from .potentials import Potential, turning_points

#: validity_metric value defining the edge of a connection region.
CONNECTION_METRIC = 10.0
#: floor of the connection half-width, as a fraction of the domain width.
CONNECTION_FLOOR_FRACTION = 1e-6


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise UnsupportedOrderError(f"branch sign must be +1 or -1, got {sign}")
    return sign


@dataclass(frozen=True)
class LocalMomentum:
    """Local classical momentum data for one (potential, E, M) triple.

    Caches the turning points; all series terms below take one of these
    as their first argument.
    """

    potential: Potential
    energy: float
    mass: float

    def __post_init__(self) -> None:
        if self.mass <= 0.0:
            raise ForbiddenRegionError(f"mass must be positive, got {self.mass}")

    @classmethod
    def for_params(
        cls, potential: Potential, energy: float, params: ScreeningParams
    ) -> "LocalMomentum":
        return cls(potential=potential, energy=float(energy), mass=params.mass_total)

    @cached_property
    def turning_points(self) -> tuple[float, ...]:
        return tuple(turning_points(self.potential, self.energy))

    @property
    def near_tolerance(self) -> float:
        """Absolute |E - V| threshold below which a point counts as a
        turning point for guard purposes."""
        return 1e-12 * max(abs(self.energy), 1.0)

    def gap(self, x):
        """E - V(x); positive in the allowed region."""
        return self.energy - self.potential.value(x)

    def p_squared(self, x):
        """Squared local momentum 2 M (E - V(x)); sign marks allowed/forbidden."""
        return 2.0 * self.mass * self.gap(x)

    def momentum(self, x):
        """Local momentum magnitude sqrt(2 M (E - V)); allowed region only."""
        p2 = self.p_squared(x)
        if np.any(np.asarray(p2) < 0.0):
            raise ForbiddenRegionError(
                f"momentum requested at E < V (E={self.energy})"
            )
        return np.sqrt(p2)

    def distance_to_turning_point(self, x: float) -> float:
        tps = self.turning_points
        if not tps:
            return math.inf
        return min(abs(x - t) for t in tps)

    def _require_away_from_tp(self, x: float) -> float:
        g = float(self.gap(x))
        if abs(g) < self.near_tolerance:
            raise NearTurningPointError(
                f"x={x} is within {self.near_tolerance:.2e} of a turning point"
            )
        return g


def y0(lm: LocalMomentum, x: float, sign: int = 1) -> float:
    """Leading term: the classical momentum on the chosen branch."""
    _check_sign(sign)
    return sign * float(lm.momentum(x))


def y1(lm: LocalMomentum, x: float, params: ScreeningParams) -> float:
    """First correction hbar V' / (4 (E - V)); branch-independent.

    Defined on both sides of a turning point (only E != V is required).
    """
    g = lm._require_away_from_tp(x)
    vp = float(lm.potential.slope(x))
    return params.hbar * vp / (4.0 * g)


def y2(lm: LocalMomentum, x: float, params: ScreeningParams, sign: int = 1) -> float:
    """Second correction; requires the allowed region (E > V)."""
    _check_sign(sign)
    g = lm._require_away_from_tp(x)
    if g < 0.0:
        raise ForbiddenRegionError("y2 is defined only where E > V")
    vp = float(lm.potential.slope(x))
    vpp = float(lm.potential.curvature(x))
    numer = 5.0 * vp * vp + 4.0 * vpp * g
    denom = math.sqrt(2.0 * lm.mass) * g**2.5
    return -sign * (params.hbar**2 / 32.0) * numer / denom


def fd_step(lm: LocalMomentum, x: float) -> float:
    """Finite-difference step for derivatives of series terms at x.

    1e-4 of the local classical scale p**2 / (M |V'|) (floored at 1),
    capped at a tenth of the distance to the nearest turning point, at
    half the distance to each domain edge, at half the slope's own
    variation scale |V'| / |V''|, and at a twentieth of the curvature
    length sqrt(|E - V| / |V''|).  The last two matter near a flat
    bottom or a stationary point: the classical scale diverges there
    while the series terms still vary over a short distance.
    """
    p2 = float(lm.p_squared(x))
    vp = abs(float(lm.potential.slope(x)))
    char = p2 / (lm.mass * vp) if vp > 0.0 else math.inf
    h = 1e-4 * max(char, 1.0)
    pot = lm.potential
    caps = [
        lm.distance_to_turning_point(x) / 10.0,
        (x - pot.x_min) / 2.0,
        (pot.x_max - x) / 2.0,
        pot.width / 100.0,
    ]
    vpp = abs(float(pot.curvature(x)))
    if vpp > 0.0:
        caps.append(0.05 * math.sqrt(abs(p2) / (2.0 * lm.mass * vpp)))
    if vp > 0.0 and vpp > 0.0:
        # floored: near a stationary point of V' the ratio goes to zero
        # while the quotient rule keeps the actual derivative well posed
        caps.append(max(0.5 * vp / vpp, 1e-12 * max(1.0, abs(x))))
    h = min([h] + caps)
    if not h > 1e-13 * max(1.0, abs(x)):
        raise NearTurningPointError(
            f"no usable finite-difference step at x={x} (h={h:.3e})"
        )
    return h


def _term_callable(lm: LocalMomentum, params: ScreeningParams, n: int, sign: int):
    """The closed-form y_n as a function of x (y_3 itself via FD)."""
    if n == 0:
        return lambda t: y0(lm, t, sign)
    if n == 1:
        return lambda t: y1(lm, t, params)
    if n == 2:
        return lambda t: y2(lm, t, params, sign)
    if n == 3:
        return lambda t: y3(lm, t, params, sign)
    raise UnsupportedOrderError(f"series terms available up to order 3, got {n}")


def y3(lm: LocalMomentum, x: float, params: ScreeningParams, sign: int = 1) -> float:
    """Third correction -hbar * d/dx [ y2 / (2 y0) ], by finite differences."""
    _check_sign(sign)
    h = fd_step(lm, x)

    def ratio(t: float) -> float:
        return y2(lm, t, params, sign) / (2.0 * y0(lm, t, sign))

    return -params.hbar * float(richardson_derivative(ratio, x, h).real)


def recursion_defect(
    lm: LocalMomentum, x: float, params: ScreeningParams, n: int, sign: int = 1
) -> float:
    """Residual of the order-n recursion relation at x.

    Returns hbar * y_{n-1}'(x) + sum_{m=0..n} y_{n-m}(x) y_m(x) with the
    derivative taken by finite differences of the closed form.  Exact
    closed forms make this vanish; the returned value measures their
    mutual consistency (and the FD noise floor).  n in {1, 2, 3}.
    """
    if n not in (1, 2, 3):
        raise UnsupportedOrderError(f"recursion defect defined for n in 1..3, got {n}")
    _check_sign(sign)
    h = fd_step(lm, x)
    dprev = float(richardson_derivative(_term_callable(lm, params, n - 1, sign), x, h).real)
    terms = [_term_callable(lm, params, m, sign)(x) for m in range(n + 1)]
    quadratic = sum(terms[n - m] * terms[m] for m in range(n + 1))
    return params.hbar * dprev + quadratic


def recursion_scale(
    lm: LocalMomentum, x: float, params: ScreeningParams, n: int, sign: int = 1
) -> float:
    """Magnitude scale of the order-n recursion terms, for relative defects.

    The derivative term contributes hbar * |y_{n-1}| / h rather than the
    derivative value itself: the defect's stencil combines samples of
    that magnitude, so it is the size against which its cancellation
    error is meaningful.  At a flat-bottom point every true term can
    vanish simultaneously and the value-based scale would collapse to
    the finite-difference noise floor.
    """
    if n not in (1, 2, 3):
        raise UnsupportedOrderError(f"recursion scale defined for n in 1..3, got {n}")
    _check_sign(sign)
    h = fd_step(lm, x)
    terms = [_term_callable(lm, params, m, sign)(x) for m in range(n + 1)]
    stencil_mag = abs(terms[n - 1]) / h
    quad_mag = sum(abs(terms[n - m] * terms[m]) for m in range(n + 1))
    return params.hbar * stencil_mag + quad_mag


def series_sum(
    lm: LocalMomentum, x: float, params: ScreeningParams, order: int, sign: int = 1
) -> complex:
    """Truncated series sum_{n=0..order} (alpha/i)**n y_n(x).

    (alpha/i) = -i*alpha, so even orders contribute to the real part and
    odd orders to the imaginary part.  order in 0..3.
    """
    if order not in (0, 1, 2, 3):
        raise UnsupportedOrderError(f"series order must be 0..3, got {order}")
    _check_sign(sign)
    factor = -1j * params.alpha
    total = 0.0 + 0.0j
    for n in range(order + 1):
        total += factor**n * _term_callable(lm, params, n, sign)(x)
    return total


def riccati_residual(
    lm: LocalMomentum, x: float, params: ScreeningParams, order: int, sign: int = 1
) -> complex:
    """Residual (alpha*hbar/i) y' - p**2 + y**2 of the truncated series.

    y and y' use the same truncation; the derivative of each term is a
    finite difference with the shared local step.  For a correct series
    the magnitude scales as alpha**(order+1).
    """
    if order not in (0, 1, 2, 3):
        raise UnsupportedOrderError(f"series order must be 0..3, got {order}")
    _check_sign(sign)
    h = fd_step(lm, x)
    factor = -1j * params.alpha
    y = 0.0 + 0.0j
    dy = 0.0 + 0.0j
    for n in range(order + 1):
        fn = _term_callable(lm, params, n, sign)
        y += factor**n * fn(x)
        dy += factor**n * richardson_derivative(fn, x, h)
    p2 = float(lm.p_squared(x))
    return -1j * effective_hbar(params) * dy - p2 + y * y


def validity_metric(lm: LocalMomentum, x, params: ScreeningParams):
    """Dimensionless breakdown measure alpha*hbar*M*|V'| / p**3.

    Small values mean the leading WKB form is locally accurate; the
    metric diverges at turning points.  Allowed region only.
    """
    p2 = np.asarray(lm.p_squared(x), dtype=float)
    if np.any(p2 <= 0.0):
        raise ForbiddenRegionError("validity_metric requires E > V")
    vp = np.abs(np.asarray(lm.potential.slope(x), dtype=float))
    metric = effective_hbar(params) * lm.mass * vp / p2**1.5
    if np.ndim(x) == 0:
        return float(metric)
    return metric


def exclusion_radius(lm: LocalMomentum, params: ScreeningParams, tp: float) -> float:
    """Half-width of the connection region around the turning point tp.

    The larger of 1e-6 * (domain width) and the distance, on the allowed
    side, at which validity_metric falls to 10.  Requires V'(tp) != 0.
    """
    pot = lm.potential
    floor = CONNECTION_FLOOR_FRACTION * pot.width
    slope = float(pot.slope(tp))
    scale = max(abs(float(lm.energy)), 1.0)
    if abs(slope) < 1e-12 * scale / max(pot.width, 1.0):
        raise DegenerateTurningPointError(
            f"V'({tp}) vanishes; connection analysis needs a simple turning point"
        )
    direction = -1.0 if slope > 0.0 else 1.0

    # Furthest the search may go: next turning point (half way) or domain edge.
    limit = pot.x_max - tp if direction > 0 else tp - pot.x_min
    for other in lm.turning_points:
        d = (other - tp) * direction
        if d > 1e-12 * pot.width:
            limit = min(limit, d / 2.0)
    limit *= 0.999999

    def metric_at(r: float) -> float:
        return validity_metric(lm, tp + direction * r, params)

    r_lo = floor
    if r_lo >= limit:
        return floor
    try:
        m_lo = metric_at(r_lo)
    except (ForbiddenRegionError, NearTurningPointError):
        return floor
    if m_lo <= CONNECTION_METRIC:
        return floor

    r_hi = r_lo
    while r_hi < limit:
        r_hi = min(2.0 * r_hi, limit)
        if metric_at(r_hi) <= CONNECTION_METRIC:
            break
        r_lo = r_hi
    else:
        # metric never drops to the threshold before the limit
        return max(limit, floor)
    if metric_at(r_hi) > CONNECTION_METRIC:
        return max(limit, floor)

    root = brentq(
        lambda r: metric_at(r) - CONNECTION_METRIC,
        r_lo,
        r_hi,
        rtol=1e-10,
        xtol=1e-14 * max(1.0, abs(tp)),
    )
    return max(float(root), floor)


def _interval_in_allowed_region(
    lm: LocalMomentum, params: ScreeningParams, x_from: float, x_to: float
) -> None:
    lo, hi = min(x_from, x_to), max(x_from, x_to)
    for endpoint in (x_from, x_to):
        if float(lm.gap(endpoint)) < 0.0:
            raise ForbiddenRegionError(
                f"interval endpoint {endpoint} lies in the forbidden region"
            )
        lm._require_away_from_tp(endpoint)
    for tp in lm.turning_points:
        eps = exclusion_radius(lm, params, tp)
        if lo - eps < tp < hi + eps:
            raise NearTurningPointError(
                f"interval [{lo}, {hi}] comes within {eps:.3e} of turning point {tp}"
            )


def phase_integral(
    lm: LocalMomentum,
    x_from: float,
    x_to: float,
    params: ScreeningParams,
    order: int,
    sign: int = 1,
) -> complex:
    """Term-by-term integral of the truncated series over [x_from, x_to].

    Orders 0..2 are integrated by adaptive quadrature of their closed
    forms; the order-3 term integrates exactly to -hbar * [y2/(2 y0)]
    evaluated at the endpoints, since y3 is that ratio's derivative.
    The interval must lie inside one allowed region with both endpoints
    outside every connection region.
    """
    if order not in (0, 1, 2, 3):
        raise UnsupportedOrderError(f"series order must be 0..3, got {order}")
    _check_sign(sign)
    _interval_in_allowed_region(lm, params, x_from, x_to)

    factor = -1j * params.alpha
    total = complex(quadrature.integrate(lambda t: y0(lm, t, sign), x_from, x_to))
    if order >= 1:
        total += factor * quadrature.integrate(lambda t: y1(lm, t, params), x_from, x_to)
    if order >= 2:
        total += factor**2 * quadrature.integrate(
            lambda t: y2(lm, t, params, sign), x_from, x_to
        )
    if order >= 3:
        def ratio(t: float) -> float:
            return y2(lm, t, params, sign) / (2.0 * y0(lm, t, sign))

        exact = -params.hbar * (ratio(x_to) - ratio(x_from))
        total += factor**3 * exact
    return total


def decay_extension(
    lm: LocalMomentum, params: ScreeningParams, tp: float, direction: int, efolds: float = 12.0
) -> float:
    """Distance past the turning point, on the forbidden side, at which the
    accumulated decay integral (1/alpha*hbar) int |p| dx reaches `efolds`.

    Capped at the domain edge.  Used to size grids so that truncating the
    wavefunction there keeps eigenvalue errors far below the matching
    tolerances.
    """
    pot = lm.potential
    ah = effective_hbar(params)
    limit = (pot.x_max - tp) if direction > 0 else (tp - pot.x_min)
    if limit <= 0.0:
        return 0.0

    def kappa(t: float) -> float:
        p2 = float(lm.p_squared(t))
        return math.sqrt(max(-p2, 0.0)) / ah

    def folded(d: float) -> float:
        return quadrature.integrate(lambda u: kappa(tp + direction * u), 0.0, d)

    d = min(limit, max(1e-6 * pot.width, 1e-12))
    total = folded(d)
    while total < efolds and d < limit:
        d = min(2.0 * d, limit)
        total = folded(d)
    if total <= efolds:
        return limit
    tiny = 1e-12 * max(1.0, limit)
    root = brentq(lambda t: folded(t) - efolds, tiny, d, rtol=1e-6)
    return float(root)
