"""Airy functions Ai, Bi and first derivatives, implemented in-house.

Two regimes, switched at the empirically measured accuracy crossover:

* Maclaurin series.  Ai(x) = c1 f(x) - c2 g(x), Bi = sqrt(3)(c1 f + c2 g)
  with f, g the two standard power-series solutions of w'' = x w.  The
  series terms satisfy the simple ratios t_k/t_{k-1} = x^3/((3k)(3k-1))
  (for f) and x^3/((3k+1)(3k)) (for g), and similarly for the derivative
  series.  Cancellation grows like exp(|2 zeta|) towards |x| ~ 5-7, so the
  accumulation runs in extended (long double) precision; on x86 this keeps
  roughly 3 extra decimal digits past float64, enough for ~1e-13 relative
  accuracy at the crossover.

* Asymptotic expansions in zeta = (2/3)|x|^{3/2} with the u_k / v_k
  coefficient recursions, truncated at the smallest term.

The supported argument range is |x| <= 30; beyond that the exponential
factors dwarf float64 for Bi and the caller is told the exponent scale.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .errors import RangeOverflowError

#: Ai(0) = 3**(-2/3) / Gamma(2/3)
_C1 = np.longdouble("0.3550280538878172392600632")
#: -Ai'(0) = 3**(-1/3) / Gamma(1/3)
_C2 = np.longdouble("0.2588194037928067984051836")
_SQRT3 = np.longdouble(3.0) ** np.longdouble(0.5)

#: accuracy crossovers between Maclaurin series and asymptotics, measured
#: against a high-precision reference: on the positive axis the series
#: loses to cancellation past ~5.5 while the asymptotic error still falls;
#: on the negative axis the series stays accurate until ~8.
SERIES_LIMIT_POS = 5.5
SERIES_LIMIT_NEG = 8.0
#: hard range bound; Bi overflow territory is further out but the
#: asymptotic error model is only validated inside this.
RANGE_LIMIT = 30.0

_SQRT_PI = math.sqrt(math.pi)


def _maclaurin(x: float) -> tuple[float, float, float, float]:
    """(f, g, f', g') at x by direct summation in extended precision."""
    xl = np.longdouble(x)
    x3 = xl * xl * xl
    # f = 1 + x^3/6 + ..., g = x + x^4/12 + ...
    tf = np.longdouble(1.0)
    tg = xl
    f, g = tf, tg
    # derivative series: f' = x^2/2 + ..., g' = 1 + x^3/3 + ...
    # the f' sum starts at its k=1 term, added inside the loop
    tfp = xl * xl / np.longdouble(2.0)
    tgp = np.longdouble(1.0)
    fp, gp = np.longdouble(0.0), tgp
    eps = np.longdouble(1e-25)
    for k in range(1, 400):
        k3 = np.longdouble(3 * k)
        tf = tf * x3 / (k3 * (k3 - 1.0))
        tg = tg * x3 / ((k3 + 1.0) * k3)
        f += tf
        g += tg
        if k >= 2:
            tfp = tfp * x3 / ((k3 - 3.0) * (k3 - 1.0))
        gp_k = tgp * x3 / (k3 * (k3 - 2.0)) if k >= 1 else tgp
        tgp = gp_k
        fp += tfp
        gp += tgp
        scale = abs(f) + abs(g) + abs(fp) + abs(gp) + np.longdouble(1.0)
        if abs(tf) < eps * scale and abs(tg) < eps * scale and abs(tfp) < eps * scale and abs(tgp) < eps * scale:
            break
    return float(f), float(g), float(fp), float(gp)


def _asymptotic_sums(zeta: float, alternating: bool) -> tuple[float, float]:
    """sum u_k z^-k and sum v_k z^-k, optimally truncated.

    alternating=True inserts (-1)^k (the Ai-side expansions).
    """
    u = 1.0
    v = 1.0
    su, sv = u, v
    term_u, term_v = u, v
    sign = 1.0
    prev = abs(term_u)
    for k in range(1, 60):
        u = u * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        v = u * (6 * k + 1) / (1.0 - 6.0 * k)
        term_u = u / zeta**k
        term_v = v / zeta**k
        if abs(term_u) >= prev:
            break  # divergent tail reached
        prev = abs(term_u)
        sign = -sign if alternating else 1.0
        su += sign * term_u
        sv += sign * term_v
        if abs(term_u) < 1e-18 * abs(su):
            break
    return su, sv


def _asymptotic_oscillatory(zeta: float) -> tuple[float, float, float, float]:
    """P, Q, R, S sums for the negative-x trigonometric expansions."""
    u = 1.0
    v = 1.0
    us = [u]
    vs = [v]
    for k in range(1, 60):
        u = u * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        v = u * (6 * k + 1) / (1.0 - 6.0 * k)
        us.append(u)
        vs.append(v)
    P = Q = R = S = 0.0
    sign = 1.0
    prev = math.inf
    for j in range(30):
        t_even = us[2 * j] / zeta ** (2 * j)
        if abs(t_even) >= prev:
            break
        P += sign * t_even
        R += sign * vs[2 * j] / zeta ** (2 * j)
        t_odd = us[2 * j + 1] / zeta ** (2 * j + 1)
        Q += sign * t_odd
        S += sign * vs[2 * j + 1] / zeta ** (2 * j + 1)
        prev = abs(t_even)
        sign = -sign
    return P, Q, R, S


def _check_range(x: float) -> None:
    if abs(x) > RANGE_LIMIT:
        zeta = (2.0 / 3.0) * abs(x) ** 1.5
        raise RangeOverflowError(
            f"|x|={abs(x):.3g} outside supported range {RANGE_LIMIT}; "
            f"exponent scale zeta={zeta:.3g}",
            exponent_scale=zeta,
        )


def _airy_all(x: float) -> tuple[float, float, float, float]:
    """(Ai, Ai', Bi, Bi') at scalar x."""
    _check_range(x)
    if -SERIES_LIMIT_NEG <= x <= SERIES_LIMIT_POS:
        f, g, fp, gp = _maclaurin(x)
        ai = float(_C1 * np.longdouble(f) - _C2 * np.longdouble(g))
        aip = float(_C1 * np.longdouble(fp) - _C2 * np.longdouble(gp))
        bi = float(_SQRT3 * (_C1 * np.longdouble(f) + _C2 * np.longdouble(g)))
        bip = float(_SQRT3 * (_C1 * np.longdouble(fp) + _C2 * np.longdouble(gp)))
        return ai, aip, bi, bip
    if x > 0.0:
        zeta = (2.0 / 3.0) * x**1.5
        q = x**0.25
        su_a, sv_a = _asymptotic_sums(zeta, alternating=True)
        su_b, sv_b = _asymptotic_sums(zeta, alternating=False)
        e_neg = math.exp(-zeta)
        e_pos = math.exp(zeta)
        ai = e_neg * su_a / (2.0 * _SQRT_PI * q)
        aip = -q * e_neg * sv_a / (2.0 * _SQRT_PI)
        bi = e_pos * su_b / (_SQRT_PI * q)
        bip = q * e_pos * sv_b / _SQRT_PI
        return ai, aip, bi, bip
    t = -x
    zeta = (2.0 / 3.0) * t**1.5
    q = t**0.25
    P, Q, R, S = _asymptotic_oscillatory(zeta)
    c = math.cos(zeta - 0.25 * math.pi)
    s = math.sin(zeta - 0.25 * math.pi)
    ai = (c * P + s * Q) / (_SQRT_PI * q)
    bi = (-s * P + c * Q) / (_SQRT_PI * q)
    aip = q * (s * R - c * S) / _SQRT_PI
    bip = q * (c * R + s * S) / _SQRT_PI
    return ai, aip, bi, bip


def airy_ai(x: float) -> float:
    """Airy function of the first kind."""
    return _airy_all(float(x))[0]


def airy_ai_deriv(x: float) -> float:
    """Derivative Ai'(x)."""
    return _airy_all(float(x))[1]


def airy_bi(x: float) -> float:
    """Airy function of the second kind."""
    return _airy_all(float(x))[2]


def airy_bi_deriv(x: float) -> float:
    """Derivative Bi'(x)."""
    return _airy_all(float(x))[3]


def airy_wronskian(x: float) -> float:
    """Ai(x) Bi'(x) - Ai'(x) Bi(x); identically 1/pi for the true functions."""
    ai, aip, bi, bip = _airy_all(float(x))
    return ai * bip - aip * bi


def airy_ai_zero(k: int) -> float:
    """k-th negative zero a_k of Ai (k >= 1), bracketed from the standard
    asymptotic estimate and polished with Brent's method on airy_ai."""
    if k < 1:
        raise ValueError(f"zero index must be >= 1, got {k}")
    t = 3.0 * math.pi * (4.0 * k - 1.0) / 8.0
    guess = -(t ** (2.0 / 3.0)) * (
        1.0 + 5.0 / (48.0 * t * t) - 5.0 / (36.0 * t**4)
    )
    lo, hi = guess - 0.3, guess + 0.3
    flo, fhi = airy_ai(lo), airy_ai(hi)
    widen = 0
    while flo * fhi > 0.0 and widen < 8:
        lo -= 0.2
        hi += 0.2
        flo, fhi = airy_ai(lo), airy_ai(hi)
        widen += 1
    return float(brentq(airy_ai, lo, hi, rtol=1e-14, xtol=1e-14))
