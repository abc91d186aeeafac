"""Quantitative classical limit: the deformed action equation

    (dS_a/dx)^2 + (alpha hbar / i) d^2 S_a/dx^2 - 2 M (E - V) = 0

reduces, as alpha -> 0, to the Hamilton-Jacobi equation
(dS_0/dx)^2 = 2 M (E - V).  Two measurable statements operationalize the
limit: the residual of the deformed equation under the truncated series
vanishes with alpha, and the truncated phase S_alpha converges to the
classical action S_0 with a power law.  The leading deviation is the
(alpha/i) y_1 term, linear in alpha; on a symmetric interval of a
symmetric well that term integrates to zero (y_1 is odd) and the
quadratic term takes over, doubling the log-log slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numdiff import richardson_derivative
from .params import ScreeningParams, effective_hbar
from .potentials import Potential
from .quadrature import integrate
from .wkb_series import LocalMomentum, fd_step, phase_integral, series_sum

#: deviations below this are quadrature noise, not signal.
DEVIATION_FLOOR = 1e-14
#: unclamped points needed for a slope estimate deemed reliable.
MIN_RELIABLE_POINTS = 5


def action_s0(
    potential: Potential, energy: float, mass: float, x_from: float, x_to: float
) -> float:
    """Hamilton-Jacobi action integral of sqrt(2 M (E - V)) over the
    interval (signed), adaptive quadrature at relative 1e-10.  The
    interval must stay inside the classically allowed region."""
    if mass <= 0.0:
        raise DomainError(f"mass must be positive, got {mass}")
    lo, hi = min(x_from, x_to), max(x_from, x_to)
    probes = np.linspace(lo, hi, 65)
    if np.any(energy - np.asarray(potential.value(probes), dtype=float) <= 0.0):
        raise DomainError(
            f"interval [{lo}, {hi}] leaves the allowed region at E={energy}"
        )

    def integrand(x: float) -> float:
        gap = energy - potential.value(x)
        return math.sqrt(2.0 * mass * gap) if gap > 0.0 else 0.0

    return integrate(integrand, x_from, x_to)


def hj_defect(
    potential: Potential,
    energy: float,
    params: ScreeningParams,
    x: float,
    order: int,
) -> complex:
    """Residual of the deformed action equation with S' truncated at
    `order`: y^2 - i alpha hbar y' - 2M(E - V), y = series_sum(order) and
    y' its finite-difference derivative.

    At order 0 this is exactly -i alpha hbar y0' (the whole quantum
    correction); truncations at order N leave O(alpha^(N+1)).
    """
    lm = LocalMomentum.for_params(potential, energy, params)
    y = series_sum(lm, x, params, order)
    h = fd_step(lm, x)
    y_prime = richardson_derivative(
        lambda t: series_sum(lm, t, params, order), x, h
    )
    ah = effective_hbar(params)
    return y * y - 1j * ah * y_prime - lm.p_squared(x)


@dataclass(frozen=True)
class LimitScan:
    """Convergence record |S_alpha - S_0| over a decreasing alpha grid."""

    alphas: tuple[float, ...]
    deviations: tuple[float, ...]
    re_deviations: tuple[float, ...]
    im_deviations: tuple[float, ...]
    clamped: tuple[bool, ...]
    fitted_slope: float
    intercept: float
    interval: tuple[float, float]
    energy: float

    def __post_init__(self) -> None:
        a = self.alphas
        if any(not (0.0 < v <= 1.0) for v in a):
            raise DomainError("scan alphas must lie in (0, 1]")
        if any(b >= c for c, b in zip(a, a[1:])):
            raise DomainError("scan alphas must decrease strictly")
        if any(d < 0.0 for d in self.deviations):
            raise DomainError("deviations must be nonnegative")

    @property
    def n_unclamped(self) -> int:
        return sum(1 for c in self.clamped if not c)

    @property
    def reliable(self) -> bool:
        return self.n_unclamped >= MIN_RELIABLE_POINTS


def _fit_loglog(alphas, values, clamped) -> tuple[float, float]:
    xs = [math.log(a) for a, c in zip(alphas, clamped) if not c]
    ys = [math.log(v) for v, c in zip(values, clamped) if not c]
    if len(xs) < 2:
        return float("nan"), float("nan")
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)


def convergence_scan(
    potential: Potential,
    energy: float,
    params_template: ScreeningParams,
    interval: tuple[float, float],
    alphas,
) -> LimitScan:
    """|S_alpha(order 3) - S_0| per alpha, with a log-log slope fit.

    params_template supplies mass and hbar; its own alpha is ignored.
    Deviations at or below the 1e-14 floor are clamped to the floor,
    flagged, and excluded from the regression.
    """
    alphas = tuple(float(a) for a in alphas)
    x_from, x_to = interval
    s0 = action_s0(potential, energy, params_template.mass_total, x_from, x_to)

    devs: list[float] = []
    re_devs: list[float] = []
    im_devs: list[float] = []
    clamped: list[bool] = []
    for a in alphas:
        p = ScreeningParams(
            alpha=a,
            mass_total=params_template.mass_total,
            hbar=params_template.hbar,
        )
        lm = LocalMomentum.for_params(potential, energy, p)
        s_a = phase_integral(lm, x_from, x_to, p, order=3)
        d = abs(s_a - s0)
        clamped.append(d <= DEVIATION_FLOOR)
        devs.append(max(d, DEVIATION_FLOOR))
        re_devs.append(max(abs(s_a.real - s0), DEVIATION_FLOOR))
        im_devs.append(max(abs(s_a.imag), DEVIATION_FLOOR))

    slope, intercept = _fit_loglog(alphas, devs, clamped)
    return LimitScan(
        alphas=alphas,
        deviations=tuple(devs),
        re_deviations=tuple(re_devs),
        im_deviations=tuple(im_devs),
        clamped=tuple(clamped),
        fitted_slope=slope,
        intercept=intercept,
        interval=(float(x_from), float(x_to)),
        energy=float(energy),
    )
