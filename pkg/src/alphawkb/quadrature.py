"""Thin adaptive-quadrature wrapper with the package-wide tolerances.

Integrals of smooth real or complex integrands on finite intervals,
evaluated by adaptive Gauss-Kronrod refinement to relative tolerance
1e-10 and absolute floor 1e-12.  Signed intervals are respected:
integrate(f, b, a) == -integrate(f, a, b).
"""

from __future__ import annotations

from typing import Callable

from scipy.integrate import quad

from .errors import ConvergenceError

REL_TOL = 1e-10
ABS_TOL = 1e-12


#: quad() accepts at most ~100 break points; stay safely below.
_MAX_BREAKPOINTS = 80


def integrate(
    f: Callable[[float], float], a: float, b: float, breakpoints=()
) -> float:
    """Definite integral of a real-valued integrand.

    breakpoints lists interior abscissas where the integrand loses
    smoothness (spline knots of tabulated potentials); the adaptive rule
    is restarted there so piecewise-smooth integrands still converge to
    full tolerance instead of stalling on a derivative kink.
    """
    if a == b:
        return 0.0
    lo, hi = (a, b) if a < b else (b, a)
    inner = sorted(p for p in breakpoints if lo < p < hi)
    if len(inner) > _MAX_BREAKPOINTS:
        # quad caps the break-point list; chunk the interval instead
        edges = [lo] + inner + [hi]
        total = 0.0
        i = 0
        while i < len(edges) - 1:
            j = min(i + _MAX_BREAKPOINTS, len(edges) - 1)
            total += integrate(f, edges[i], edges[j], breakpoints=edges[i + 1 : j])
            i = j
        return total if a < b else -total
    value, estimate = quad(
        f, a, b, epsabs=ABS_TOL, epsrel=REL_TOL, limit=200, points=inner or None
    )
    if estimate > 10.0 * max(ABS_TOL, REL_TOL * abs(value)) + 1e-300:
        # QUADPACK met its own stopping rule but not ours; only trip when
        # the reported error is far outside the requested band.
        if estimate > 1e-6 * max(1.0, abs(value)):
            raise ConvergenceError(
                f"quadrature error estimate {estimate:.3e} too large on [{a}, {b}]"
            )
    return value


def integrate_complex(f: Callable[[float], complex], a: float, b: float) -> complex:
    """Definite integral of a complex-valued integrand (componentwise)."""
    re = integrate(lambda x: f(x).real, a, b)
    im = integrate(lambda x: f(x).imag, a, b)
    return complex(re, im)
