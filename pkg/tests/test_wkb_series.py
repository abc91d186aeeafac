"""Series terms of the screened phase expansion.

The Y_REFERENCE table freezes values of y0..y3 for the default harmonic
well at E = 1 (M = hbar = 1, upper branch), obtained by running the
recursion symbolically in a computer-algebra system and evaluating at
the sample points; nothing in the package shares code with that route.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphawkb import (
    ForbiddenRegionError,
    HarmonicPotential,
    LocalMomentum,
    NearTurningPointError,
    ScreeningParams,
    UnsupportedOrderError,
    exclusion_radius,
    phase_integral,
    recursion_defect,
    recursion_scale,
    riccati_residual,
    series_sum,
    validity_metric,
    y0,
    y1,
    y2,
    y3,
)

# columns: x, y0, y1, y2, y3  (harmonic E=1, M=1, hbar=1, sign=+1)
Y_REFERENCE = [
    (-1.1, 0.8888194417315589, -0.6962025316455697, -1.719360015235051, -8.917182996358852),
    (-0.62, 1.2710625476348518, -0.19187917801436, -0.19415670805508456, -0.23099323510357947),
    (-0.15, 1.4062361110425232, -0.03792667509481669, -0.09245839372524367, -0.022235805334041802),
    (0.08, 1.4119490075778232, 0.020064205457463884, -0.0895271105984189, 0.011419469087717266),
    (0.47, 1.333829074506925, 0.1320892586139059, -0.13805323486304483, 0.1133273997048598),
    (0.93, 1.065410718924866, 0.4096555369570963, -0.600509313804511, 1.6238502584172496),
    (1.24, 0.68, 1.3408304498269896, -7.404739966771301, 92.3076843011176),
]


@pytest.fixture
def lm(harmonic, unit_params):
    return LocalMomentum.for_params(harmonic, 1.0, unit_params)


@pytest.mark.parametrize("row", Y_REFERENCE, ids=lambda r: f"x={r[0]}")
def test_terms_match_symbolic_recursion(row, lm, unit_params):
    x, r0, r1, r2, r3 = row
    assert y0(lm, x) == pytest.approx(r0, rel=1e-13)
    assert y1(lm, x, unit_params) == pytest.approx(r1, rel=1e-13)
    assert y2(lm, x, unit_params) == pytest.approx(r2, rel=1e-13)
    # y3 goes through finite differences; its own noise floor applies
    assert y3(lm, x, unit_params) == pytest.approx(r3, rel=1e-7)


def test_branch_signs(lm, unit_params):
    # the minus branch is the complex conjugate solution, so the terms
    # alternate: y_n -> (-1)**(n+1) y_n.  y0 and y2 flip; y1 and y3 do
    # not (in y3 = -hbar (y2/(2 y0))' the flips cancel in the ratio).
    x = 0.4
    assert y0(lm, x, sign=-1) == -y0(lm, x, sign=+1)
    assert y2(lm, x, unit_params, sign=-1) == -y2(lm, x, unit_params, sign=+1)
    assert y3(lm, x, unit_params, sign=-1) == pytest.approx(
        y3(lm, x, unit_params, sign=+1), rel=1e-9
    )
    # y1 carries no branch dependence at all (no sign argument)
    assert y1(lm, x, unit_params) == y1(lm, x, unit_params)
    with pytest.raises(UnsupportedOrderError):
        y0(lm, x, sign=2)


def test_y1_defined_on_forbidden_side(lm, unit_params):
    # only E != V is required
    val = y1(lm, 1.9, unit_params)
    assert math.isfinite(val) and val < 0.0
    with pytest.raises(ForbiddenRegionError):
        y2(lm, 1.9, unit_params)
    with pytest.raises(ForbiddenRegionError):
        y0(lm, 1.9)


def test_turning_point_guards(lm, unit_params):
    tp = math.sqrt(2.0)
    with pytest.raises(NearTurningPointError):
        y1(lm, tp + 1e-16, unit_params)


def test_series_sum_parity(lm):
    # even orders land in the real part, odd orders in the imaginary part
    params = ScreeningParams(alpha=0.3)
    x = 0.5
    s0 = series_sum(lm, x, params, 0)
    s1 = series_sum(lm, x, params, 1)
    s2 = series_sum(lm, x, params, 2)
    assert s0.imag == 0.0
    assert s1.real == s0.real
    assert s1.imag == pytest.approx(-params.alpha * y1(lm, x, params), rel=1e-13)
    assert s2.imag == s1.imag
    assert s2.real == pytest.approx(
        s0.real - params.alpha**2 * y2(lm, x, params), rel=1e-13
    )
    with pytest.raises(UnsupportedOrderError):
        series_sum(lm, x, params, 4)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_recursion_defect_small(lm, unit_params, order):
    for x in (-0.9, -0.2, 0.6, 1.0):
        defect = abs(recursion_defect(lm, x, unit_params, order))
        scale = recursion_scale(lm, x, unit_params, order)
        assert defect <= 1e-5 * scale


def test_recursion_defect_rejects_bad_order(lm, unit_params):
    for bad in (0, 4):
        with pytest.raises(UnsupportedOrderError):
            recursion_defect(lm, 0.1, unit_params, bad)


@pytest.mark.parametrize("order", [0, 1, 2, 3])
def test_riccati_residual_alpha_scaling(lm, order):
    """Halving alpha divides the residual by ~2**(order+1)."""
    x = 0.35
    alphas = [1e-1 / 2**k for k in range(8)]  # down to ~7.8e-4
    mags = []
    for a in alphas:
        p = ScreeningParams(alpha=a)
        mags.append(abs(riccati_residual(lm, x, p, order)))
    expected = 2.0 ** (order + 1)
    for hi, lo in zip(mags, mags[1:]):
        assert hi / lo == pytest.approx(expected, rel=0.2)


def test_riccati_residual_order_zero_identity(lm, harmonic):
    # order 0: residual = -i alpha hbar y0', purely imaginary, equal to
    # i alpha hbar M V' / p up to FD error
    x = 0.35
    p = ScreeningParams(alpha=0.05)
    res = riccati_residual(lm, x, p, 0)
    exact = 0.05 * float(harmonic.slope(x)) / (2.0 * y0(lm, x)) * 2.0 * lm.mass
    assert res.real == pytest.approx(0.0, abs=1e-12)
    assert res.imag == pytest.approx(exact, rel=1e-8)


def test_validity_metric_scaling(lm, harmonic):
    x = 0.8
    m1 = validity_metric(lm, x, ScreeningParams(alpha=1.0))
    m2 = validity_metric(lm, x, ScreeningParams(alpha=0.5))
    assert m1 == pytest.approx(2.0 * m2, rel=1e-13)
    p = math.sqrt(2.0 * (1.0 - 0.5 * x * x))
    assert m1 == pytest.approx(abs(float(harmonic.slope(x))) / p**3, rel=1e-13)
    arr = validity_metric(lm, np.array([0.1, 0.8]), ScreeningParams(alpha=1.0))
    assert arr.shape == (2,)
    with pytest.raises(ForbiddenRegionError):
        validity_metric(lm, 1.9, ScreeningParams(alpha=1.0))


def test_validity_metric_diverges_towards_turning_point(lm, unit_params):
    tp = math.sqrt(2.0)
    vals = [validity_metric(lm, tp - d, unit_params) for d in (0.5, 0.2, 0.05, 0.01)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_exclusion_radius_shrinks_with_alpha(lm, harmonic):
    tp = math.sqrt(2.0)
    r1 = exclusion_radius(lm, ScreeningParams(alpha=1.0), tp)
    r2 = exclusion_radius(lm, ScreeningParams(alpha=0.125), tp)
    assert 0.0 < r2 < r1
    # metric exactly 10 at the boundary radius
    m = validity_metric(lm, tp - r1, ScreeningParams(alpha=1.0))
    assert m == pytest.approx(10.0, rel=1e-6)


def test_phase_integral_order0_matches_action(lm, unit_params, harmonic):
    val = phase_integral(lm, -0.5, 0.7, unit_params, order=0)
    from alphawkb.quadrature import integrate

    direct = integrate(lambda t: math.sqrt(2.0 * (1.0 - 0.5 * t * t)), -0.5, 0.7)
    assert val.imag == 0.0
    assert val.real == pytest.approx(direct, rel=1e-11)


def test_phase_integral_order3_endpoint_form(lm):
    # the order-3 contribution is a pure endpoint difference of
    # y2/(2 y0); check against direct quadrature of y3
    from alphawkb.quadrature import integrate

    params = ScreeningParams(alpha=0.2)
    a, b = -0.4, 0.6
    full = phase_integral(lm, a, b, params, order=3)
    upto2 = phase_integral(lm, a, b, params, order=2)
    contrib = (full - upto2) / (-1j * 0.2) ** 3
    direct = integrate(lambda t: y3(lm, t, params), a, b)
    assert contrib.real == pytest.approx(direct, rel=1e-6)


def test_phase_integral_interval_guards(lm, unit_params):
    with pytest.raises(NearTurningPointError):
        phase_integral(lm, -1.41, 1.41, unit_params, order=1)
    with pytest.raises(ForbiddenRegionError):
        phase_integral(lm, 0.0, 1.9, unit_params, order=1)


@settings(max_examples=30, deadline=None)
@given(
    st.floats(min_value=-1.0, max_value=1.0),
    st.floats(min_value=-1.0, max_value=1.0),
    st.integers(min_value=0, max_value=3),
)
def test_phase_integral_antisymmetry(a, b, order):
    pot = HarmonicPotential()
    params = ScreeningParams(alpha=0.4)
    lm = LocalMomentum.for_params(pot, 1.0, params)
    fwd = phase_integral(lm, a, b, params, order)
    back = phase_integral(lm, b, a, params, order)
    assert abs(fwd + back) < 1e-9 * max(1.0, abs(fwd))


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-1.3, max_value=1.3), st.integers(min_value=1, max_value=3))
def test_recursion_defect_property(x, n):
    pot = HarmonicPotential()
    params = ScreeningParams(alpha=1.0)
    lm = LocalMomentum.for_params(pot, 1.0, params)
    defect = abs(recursion_defect(lm, x, params, n))
    scale = recursion_scale(lm, x, params, n)
    assert defect <= 1e-5 * scale
