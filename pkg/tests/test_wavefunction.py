"""Piecewise WKB wavefunctions, turning-point connection and assembly."""

import cmath
import math

import numpy as np
import pytest

from alphawkb import (
    DomainError,
    ForbiddenRegionError,
    LocalMomentum,
    NearTurningPointError,
    Region,
    ScreeningParams,
    TabulatedPotential,
    UseUniformError,
    WkbWavefunction,
    airy_ai,
    airy_argument,
    amplitude_identity_defect,
    assemble_bound_state,
    connect_at_turning_point,
    connection_inverse,
    eigenvalue_solve,
    evaluate,
    quantize,
    sample_wavefunction,
    uniform_amplitude,
    uniform_wavefunction,
)
from alphawkb.oracle import Grid, numerov_sweep


def _flat_potential():
    xs = np.linspace(-2.0, 2.0, 9)
    return TabulatedPotential(xs=tuple(xs), vs=tuple(np.zeros(9)))


def _ramp_potential(force=1.0, lo=-8.0, hi=4.0):
    xs = np.linspace(lo, hi, 33)
    return TabulatedPotential(xs=tuple(xs), vs=tuple(force * xs))


def test_free_particle_plane_wave():
    # V = 0, M = 1/2, E = 1 gives p = 1, so psi = e^{i(x - anchor)} exactly
    pot = _flat_potential()
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    region = Region(-2.0, 2.0, "allowed", anchor=0.0, c1=1.0, phase_sign=1.0)
    wf = WkbWavefunction(pot, 1.0, params, (region,))
    for x in (-1.5, -0.3, 0.9, 2.0):
        got = evaluate(wf, x)
        assert abs(got - cmath.exp(1j * x)) < 1e-10


def test_standing_wave_coefficients():
    pot = _flat_potential()
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    region = Region(-2.0, 2.0, "allowed", anchor=0.0, c1=0.5, c2=0.5, phase_sign=1.0)
    wf = WkbWavefunction(pot, 1.0, params, (region,))
    for x in (-1.2, 0.4, 1.7):
        assert abs(evaluate(wf, x) - math.cos(x)) < 1e-10


def test_forbidden_region_decay_orientation():
    # anchor on the left, growing exponent away from it: the c2 term decays
    pot = _ramp_potential()
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    region = Region(0.5, 3.5, "forbidden", anchor=0.5, c2=1.0, phase_sign=1.0)
    wf = WkbWavefunction(pot, 0.0, params, (region,))
    vals = [abs(evaluate(wf, x)) for x in (0.8, 1.5, 2.5, 3.4)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_region_validation():
    with pytest.raises(DomainError):
        Region(0.0, 1.0, "mystery", anchor=0.0)
    with pytest.raises(DomainError):
        Region(1.0, 1.0, "allowed", anchor=0.0)
    with pytest.raises(DomainError):
        Region(0.0, 1.0, "allowed", anchor=0.0, phase_sign=0.5)


def test_wavefunction_adjacency_validated():
    pot = _flat_potential()
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    r1 = Region(-2.0, 0.0, "allowed", anchor=0.0, c1=1.0)
    r2 = Region(0.5, 2.0, "allowed", anchor=0.5, c1=1.0)
    with pytest.raises(DomainError):
        WkbWavefunction(pot, 1.0, params, (r1, r2))


def test_region_lookup_boundaries():
    pot = _flat_potential()
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    r1 = Region(-2.0, 0.0, "allowed", anchor=0.0, c1=1.0)
    r2 = Region(0.0, 2.0, "allowed", anchor=0.0, c1=1.0)
    wf = WkbWavefunction(pot, 1.0, params, (r1, r2))
    assert wf.region_at(-2.0) is r1
    assert wf.region_at(0.0) is r2  # half-open internal boundaries
    assert wf.region_at(2.0) is r2  # last region closed on the right
    with pytest.raises(DomainError):
        wf.region_at(2.5)


def test_airy_argument_orientation():
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    rising = _ramp_potential(force=2.0)
    # rising slope: forbidden side is x > tp, so s grows with x
    assert airy_argument(rising, params, 0.0, 0.5) > 0.0
    assert airy_argument(rising, params, 0.0, -0.5) < 0.0
    sigma = (2.0 * 0.5 * 2.0 / 1.0) ** (1.0 / 3.0)
    assert airy_argument(rising, params, 0.0, 0.5) == pytest.approx(0.5 * sigma, rel=1e-9)

    falling_xs = np.linspace(-4.0, 8.0, 33)
    falling = TabulatedPotential(xs=tuple(falling_xs), vs=tuple(-2.0 * falling_xs))
    # falling slope: forbidden side is x < tp
    assert airy_argument(falling, params, 0.0, -0.5) > 0.0
    assert airy_argument(falling, params, 0.0, 0.5) < 0.0


def test_uniform_matches_exact_airy_solution():
    """On a pure linear ramp the uniform form is the exact solution, so an
    independent Numerov integration must reproduce it pointwise."""
    pot = _ramp_potential(force=1.0, lo=-8.0, hi=8.0)
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    energy = 0.0  # turning point at x = 0, psi'' = x psi exactly
    grid = Grid(-8.0, 8.0, 16001)
    psi = numerov_sweep(pot, energy, params, grid, direction="right-to-left")
    xs = grid.points()
    # the edge-clamped start mixes in a trace of the growing solution;
    # it has decayed away two units below the top, so compare up to x = 6
    keep = xs <= 6.0
    uni = np.array([uniform_wavefunction(pot, energy, params, 0.0, x) for x in xs[keep]])
    # match amplitudes at the turning point
    k = int(np.argmin(np.abs(xs[keep])))
    scaled = psi[keep] * (uni[k] / psi[keep][k])
    dev = np.max(np.abs(scaled - uni)) / np.max(np.abs(uni))
    assert dev < 1e-6


def test_uniform_is_scaled_airy():
    pot = _ramp_potential(force=3.0)
    params = ScreeningParams(alpha=0.5, mass_total=2.0)
    sigma = (2.0 * 2.0 * 3.0 / 0.25) ** (1.0 / 3.0)
    tp = 0.7
    for x in (0.2, 0.7, 1.3):
        want = airy_ai(sigma * (x - tp))
        assert uniform_wavefunction(pot, 3.0 * tp, params, tp, x) == pytest.approx(want, rel=1e-12)


def test_connection_matrix_decaying_input():
    m = connect_at_turning_point("allowed-left")
    c1, c2 = m @ np.array([1.0, 0.0])
    assert c1 == pytest.approx(cmath.exp(-0.25j * math.pi), abs=1e-15)
    assert c2 == pytest.approx(cmath.exp(0.25j * math.pi), abs=1e-15)
    # C1 e^{i Phi} + C2 e^{-i Phi} = 2 cos(Phi - pi/4)
    phi = 0.83
    val = c1 * cmath.exp(1j * phi) + c2 * cmath.exp(-1j * phi)
    assert val.imag == pytest.approx(0.0, abs=1e-15)
    assert val.real == pytest.approx(2.0 * math.cos(phi - 0.25 * math.pi), abs=1e-14)


def test_connection_matrix_determinant_and_inverse():
    m = connect_at_turning_point("allowed-right")
    inv = connection_inverse("allowed-right")
    det = np.linalg.det(m)
    assert det == pytest.approx(-1j, abs=1e-14)
    assert np.max(np.abs(m @ inv - np.eye(2))) < 1e-14
    with pytest.raises(DomainError):
        connect_at_turning_point("sideways")
    with pytest.raises(DomainError):
        connection_inverse("sideways")


def test_uniform_amplitude_formula():
    pot = _ramp_potential(force=1.0)
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    n = uniform_amplitude(pot, params, 0.0, decaying=1.0)
    assert n == pytest.approx(2.0 * math.sqrt(math.pi), rel=1e-9)


def test_amplitude_identity_tiny_and_reversible(harmonic, unit_params):
    lm = LocalMomentum.for_params(harmonic, 1.0, unit_params)
    d1 = amplitude_identity_defect(lm, -0.8, 0.9)
    d2 = amplitude_identity_defect(lm, 0.9, -0.8)
    assert d1 <= 1e-10
    assert d2 <= 1e-10
    lm2 = LocalMomentum.for_params(harmonic, 2.0, unit_params)
    with pytest.raises(ForbiddenRegionError):
        amplitude_identity_defect(lm2, -2.1, 1.0)  # left endpoint has E < V


def test_amplitude_identity_rejects_straddling_interval(unit_params):
    # double well: both endpoints allowed, two inner turning points between
    xs = np.linspace(-2.2, 2.2, 89)
    pot = TabulatedPotential(xs=tuple(xs), vs=tuple((xs**2 - 1.0) ** 2))
    lm = LocalMomentum.for_params(pot, 0.5, unit_params)
    with pytest.raises(NearTurningPointError):
        amplitude_identity_defect(lm, -1.2, 1.2)


def test_assembled_smooth_state_structure(harmonic):
    params = ScreeningParams(alpha=0.5)
    energy = quantize(harmonic, 3, params)
    wf = assemble_bound_state(harmonic, energy, params)
    kinds = [r.kind for r in wf.regions]
    assert kinds == ["forbidden", "connection", "allowed", "connection", "forbidden"]
    # composite norm stays unity when resampled independently
    xs = np.linspace(wf.x_min, wf.x_max, 30001)
    psi = sample_wavefunction(wf, xs)
    norm = np.trapezoid(np.abs(psi) ** 2, xs)
    assert norm == pytest.approx(1.0, rel=5e-3)


def test_assembled_parity(harmonic):
    params = ScreeningParams(alpha=0.5)
    for n, sign in ((2, +1.0), (3, -1.0)):
        energy = quantize(harmonic, n, params)
        wf = assemble_bound_state(harmonic, energy, params)
        for x in (0.31, 0.67):
            a = evaluate(wf, x)
            b = evaluate(wf, -x)
            assert b.real == pytest.approx(sign * a.real, rel=1e-6)


def test_assembled_connection_rejects_piecewise_form(harmonic):
    params = ScreeningParams(alpha=0.5)
    energy = quantize(harmonic, 1, params)
    wf = assemble_bound_state(harmonic, energy, params)
    conn = [r for r in wf.regions if r.kind == "connection"][1]
    with pytest.raises(UseUniformError):
        evaluate(wf, conn.turning_point)


def test_assembled_wall_state(bouncer):
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    energy = quantize(bouncer, 2, params)
    wf = assemble_bound_state(bouncer, energy, params)
    kinds = [r.kind for r in wf.regions]
    assert kinds == ["allowed", "connection", "forbidden"]
    # the n - 1/4 action offset makes the standing wave vanish at the wall
    xs = np.linspace(wf.x_min, wf.x_max, 4001)
    psi = sample_wavefunction(wf, xs)
    assert abs(psi[0]) < 1e-6 * np.max(np.abs(psi))


def test_sampling_agrees_with_pointwise(harmonic):
    params = ScreeningParams(alpha=0.5)
    energy = quantize(harmonic, 4, params)
    wf = assemble_bound_state(harmonic, energy, params)
    allowed = [r for r in wf.regions if r.kind == "allowed"][0]
    xs = np.linspace(allowed.lo + 0.05, allowed.hi - 0.05, 7)
    table = sample_wavefunction(wf, xs, airy_patch=False)
    for x, got in zip(xs, table):
        want = evaluate(wf, float(x))
        assert abs(got - want) < 1e-6 * max(1.0, abs(want))


def test_sampling_patches_turning_point_zone(harmonic):
    # by default the sampler swaps in the uniform form near a turning
    # point, where the piecewise 1/sqrt(p) spike is an artifact
    params = ScreeningParams(alpha=0.5)
    energy = quantize(harmonic, 4, params)
    wf = assemble_bound_state(harmonic, energy, params)
    conn = [r for r in wf.regions if r.kind == "connection"][1]
    tp = conn.turning_point
    x = np.array([tp - 0.3])  # outside the connection region, inside the patch
    assert wf.region_at(float(x[0])).kind == "allowed"
    patched = sample_wavefunction(wf, x)[0]
    want = conn.amplitude * airy_ai(airy_argument(harmonic, params, tp, float(x[0])))
    assert patched == pytest.approx(want, rel=1e-12)
    raw = sample_wavefunction(wf, x, airy_patch=False)[0]
    assert raw != pytest.approx(want, rel=1e-6)


def test_sampling_outside_span_rejected(harmonic):
    params = ScreeningParams(alpha=0.5)
    energy = quantize(harmonic, 0, params)
    wf = assemble_bound_state(harmonic, energy, params)
    with pytest.raises(DomainError):
        sample_wavefunction(wf, np.array([wf.x_max + 1.0]))


def test_assembled_tracks_oracle_shape(harmonic):
    """Independent check of the whole chain: overlap of the assembled n=2
    state with the Numerov eigenfunction exceeds 99.9%."""
    params = ScreeningParams(alpha=1.0)
    report = eigenvalue_solve(harmonic, 2, params)
    wf = assemble_bound_state(harmonic, report.energy, params)
    xs = report.grid.points()
    inside = (xs >= wf.x_min) & (xs <= wf.x_max)
    psi_w = sample_wavefunction(wf, xs[inside]).real
    psi_o = report.psi[inside]
    psi_o = psi_o / math.sqrt(float(np.trapezoid(psi_o**2, xs[inside])))
    overlap = abs(float(np.trapezoid(psi_w * psi_o, xs[inside])))
    assert overlap > 0.999
