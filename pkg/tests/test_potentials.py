"""Potential catalog: values, analytic derivatives, turning points and
the dict-based constructor."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphawkb import (
    DomainError,
    HarmonicPotential,
    LinearWellPotential,
    MorsePotential,
    QuarticPotential,
    TabulatedPotential,
    UnsupportedOrderError,
    from_config,
    turning_points,
)
from alphawkb.potentials import eval as pot_eval


def _fd4(f, x, h):
    """Fourth-order central difference, for derivative cross-checks."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def test_harmonic_closed_forms():
    pot = HarmonicPotential(omega=2.0, x0=0.5, mass=3.0)
    x = 1.7
    d = x - 0.5
    assert math.isclose(float(pot.value(x)), 0.5 * 3.0 * 4.0 * d * d, rel_tol=1e-15)
    assert math.isclose(float(pot.slope(x)), 3.0 * 4.0 * d, rel_tol=1e-15)
    assert math.isclose(float(pot.curvature(x)), 12.0, rel_tol=1e-15)
    assert float(pot.third(x)) == 0.0


def test_quartic_closed_forms():
    pot = QuarticPotential(lam=0.7)
    x = -1.3
    assert math.isclose(float(pot.value(x)), 0.7 * x**4, rel_tol=1e-15)
    assert math.isclose(float(pot.slope(x)), 2.8 * x**3, rel_tol=1e-15)
    assert math.isclose(float(pot.curvature(x)), 8.4 * x**2, rel_tol=1e-15)
    assert math.isclose(float(pot.third(x)), 16.8 * x, rel_tol=1e-15)


def test_morse_dissociation_limit():
    pot = MorsePotential(depth=4.0, a=1.2)
    assert float(pot.value(0.0)) == 0.0
    assert math.isclose(float(pot.value(pot.x_max)), 4.0, rel_tol=1e-9)
    assert float(pot.slope(0.0)) == 0.0
    # curvature at the minimum is 2 D a^2
    assert math.isclose(float(pot.curvature(0.0)), 2 * 4.0 * 1.2**2, rel_tol=1e-12)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_derivatives_match_finite_differences(catalog, order):
    for kind, pot in catalog.items():
        if kind == "tabulated" and order == 3:
            continue  # spline is C2; third derivative unsupported
        lo, hi = pot.x_min, pot.x_max
        span = hi - lo
        for frac in (0.31, 0.5, 0.62):
            x = lo + frac * span
            h = 1e-3 * max(1.0, abs(x))
            h = min(h, 0.25 * (hi - x), 0.25 * (x - lo))
            if kind == "tabulated":
                # keep the whole stencil inside one polynomial piece; the
                # spline's third derivative jumps at every knot
                knots = np.asarray(pot.xs)
                piece = np.searchsorted(knots, x, side="right") - 1
                x = 0.5 * (knots[piece] + knots[piece + 1])
                h = 0.2 * (knots[piece + 1] - knots[piece])
            fd = _fd4(lambda t: float(pot_eval(pot, t, order - 1)), x, h)
            exact = float(pot_eval(pot, x, order))
            scale = max(abs(exact), 1.0)
            assert abs(fd - exact) / scale < 5e-6, (kind, order, x)


def test_eval_order_and_domain_guards(harmonic):
    with pytest.raises(UnsupportedOrderError):
        pot_eval(harmonic, 0.0, 4)
    with pytest.raises(DomainError):
        pot_eval(harmonic, harmonic.x_max + 1.0, 0)
    arr = pot_eval(harmonic, np.array([0.0, 1.0]), 0)
    assert arr.shape == (2,)


def test_hard_wall_flags(catalog):
    assert catalog["linear"].hard_wall_left
    for kind in ("harmonic", "quartic", "morse", "tabulated"):
        assert not catalog[kind].hard_wall_left


def test_linear_well_domain_is_pinned_to_wall():
    with pytest.raises(DomainError):
        LinearWellPotential(force=1.0, wall=0.0, domain=(-1.0, 5.0))
    pot = LinearWellPotential(force=2.0, wall=1.0)
    assert pot.x_min == 1.0
    assert math.isclose(float(pot.value(2.5)), 3.0)


def test_turning_points_harmonic(harmonic):
    tps = turning_points(harmonic, 2.0)
    assert len(tps) == 2
    assert math.isclose(tps[0], -2.0, rel_tol=1e-10)
    assert math.isclose(tps[1], 2.0, rel_tol=1e-10)


def test_turning_points_sorted_and_deduplicated(quartic):
    tps = turning_points(quartic, 1.0)
    assert tps == sorted(tps)
    assert len(tps) == 2
    assert math.isclose(tps[1], 1.0, rel_tol=1e-10)


def test_turning_points_below_minimum(harmonic):
    assert turning_points(harmonic, -1.0) == []


def test_tabulated_tracks_generator(tabulated):
    f = lambda x: 0.5 * x**2 + 0.15 * x**3 + 0.05 * x**4
    fp = lambda x: x + 0.45 * x**2 + 0.2 * x**3
    for x in (-2.4, -0.7, 0.9, 3.1):
        assert abs(float(tabulated.value(x)) - f(x)) < 1e-9
        assert abs(float(tabulated.slope(x)) - fp(x)) < 1e-6
    with pytest.raises(UnsupportedOrderError):
        tabulated.third(0.3)


def test_tabulated_validation():
    with pytest.raises(DomainError):
        TabulatedPotential(xs=(0.0, 1.0, 2.0), vs=(0.0, 1.0, 4.0))  # too few
    with pytest.raises(DomainError):
        TabulatedPotential(xs=(0.0, 1.0, 1.0, 2.0), vs=(0.0, 1.0, 1.0, 4.0))


def test_from_config_roundtrip():
    pot = from_config({"kind": "harmonic", "omega": 2.0, "domain": [-5, 5]})
    assert isinstance(pot, HarmonicPotential)
    assert pot.omega == 2.0
    assert pot.domain == (-5.0, 5.0)


def test_from_config_rejections():
    with pytest.raises(DomainError):
        from_config({"kind": "nosuch"})
    with pytest.raises(DomainError):
        from_config({"omega": 1.0})
    with pytest.raises(DomainError):
        from_config({"kind": "harmonic", "bogus": 1.0})
    with pytest.raises(DomainError):
        from_config({"kind": "harmonic", "domain": [1.0]})


@settings(max_examples=40, deadline=None)
@given(
    st.floats(min_value=0.3, max_value=3.0),
    st.floats(min_value=-1.0, max_value=1.0),
    st.floats(min_value=0.05, max_value=8.0),
)
def test_harmonic_turning_points_symmetric(omega, x0, energy):
    pot = HarmonicPotential(omega=omega, x0=x0, domain=(x0 - 30.0, x0 + 30.0))
    tps = turning_points(pot, energy)
    assert len(tps) == 2
    half = math.sqrt(2.0 * energy) / omega
    assert math.isclose(tps[0], x0 - half, rel_tol=1e-8, abs_tol=1e-10)
    assert math.isclose(tps[1], x0 + half, rel_tol=1e-8, abs_tol=1e-10)
