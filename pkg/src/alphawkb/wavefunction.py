"""Two-term WKB wavefunctions and Airy turning-point connection.

In a classically allowed region the wavefunction is assembled as

    psi(x) = C1/sqrt(p) exp(+i Phi) + C2/sqrt(p) exp(-i Phi),
    Phi(x) = sign * (1/(alpha hbar)) * integral_anchor^x p dx',

with p = sqrt(2 M (E - V)).  In forbidden regions p -> i|p| turns the
two terms into growing/decaying real exponentials.  Each region carries
its own anchor (a turning point, for assembled bound states) and a phase
orientation chosen so that the C1 exponent always grows away from the
anchor; with that convention a single connection matrix serves both
turning-point orientations.

Near a simple turning point the potential is linearized and the exact
solution of the linearized equation is Ai(s) with

    s = (2 M |F| / (alpha hbar)^2)^(1/3) * (distance into the forbidden side),

which both regularizes the 1/sqrt(p) divergence and fixes the standing
wave's pi/4 phase through the Airy asymptotics.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .airy import airy_ai
from .errors import (
    DegenerateTurningPointError,
    DomainError,
    NearTurningPointError,
    UseUniformError,
)
from .params import ScreeningParams, effective_hbar
from .potentials import Potential, turning_points
from .quadrature import integrate
from .wkb_series import LocalMomentum, decay_extension, exclusion_radius

#: fine-grid points per region for array sampling of phase integrals.
_PHASE_GRID = 20001
#: Airy patch half-width in s units.  Sits near the error handoff: the
#: WKB amplitude error falls off like |s|^(-3/2) away from the turning
#: point while the linearization error underneath the uniform form grows
#: with distance, and oracle-overlap scans put the fidelity plateau at
#: roughly 1 <= |s| <= 1.5 across low and high levels alike.
_PATCH_S = 1.2


def amplitude_identity_defect(lm: LocalMomentum, x_from: float, x_to: float) -> float:
    """|integral V'/(4(E-V)) dx + (1/2)(log p(x_to) - log p(x_from))|.

    The two sides are a quadrature and a closed form of the same
    quantity, so the defect is pure numerical error (<= 1e-10 scale).
    Reversing the interval negates both sides and leaves it unchanged.
    """
    for x in (x_from, x_to):
        lm.momentum(x)  # forbidden-region guard
        lm._require_away_from_tp(x)
    inner_lo, inner_hi = min(x_from, x_to), max(x_from, x_to)
    if any(inner_lo < tp < inner_hi for tp in lm.turning_points):
        raise NearTurningPointError(
            "amplitude identity interval must not straddle a turning point"
        )

    def integrand(x: float) -> float:
        return lm.potential.slope(x) / (4.0 * lm.gap(x))

    lhs = integrate(
        integrand, x_from, x_to, breakpoints=lm.potential.interior_breakpoints()
    )
    rhs = -0.5 * (math.log(lm.momentum(x_to)) - math.log(lm.momentum(x_from)))
    return abs(lhs - rhs)


@dataclass(frozen=True)
class Region:
    """One piece of an assembled wavefunction.

    kind: "allowed", "forbidden", or "connection".  phase_sign orients
    the phase integral so the C1 exponent grows away from the anchor.
    Connection regions are evaluated through the uniform (Airy) form and
    carry the turning point plus a real amplitude instead of C1/C2.
    """

    lo: float
    hi: float
    kind: str
    anchor: float
    c1: complex = 0.0
    c2: complex = 0.0
    phase_sign: float = 1.0
    turning_point: float | None = None
    amplitude: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("allowed", "forbidden", "connection"):
            raise DomainError(f"unknown region kind {self.kind!r}")
        if not (self.hi > self.lo):
            raise DomainError(f"empty region [{self.lo}, {self.hi}]")
        if self.phase_sign not in (-1.0, 1.0):
            raise DomainError("phase_sign must be +1 or -1")


@dataclass(frozen=True)
class WkbWavefunction:
    """Piecewise semiclassical wavefunction at a fixed energy."""

    potential: Potential
    energy: float
    params: ScreeningParams
    regions: tuple[Region, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.regions, self.regions[1:]):
            if not math.isclose(a.hi, b.lo, rel_tol=0.0, abs_tol=1e-9 * self.potential.width):
                raise DomainError("adjacent regions must share endpoints")

    @property
    def x_min(self) -> float:
        return self.regions[0].lo

    @property
    def x_max(self) -> float:
        return self.regions[-1].hi

    def region_at(self, x: float) -> Region:
        if not (self.x_min <= x <= self.x_max):
            raise DomainError(
                f"x={x} outside the assembled span [{self.x_min}, {self.x_max}]"
            )
        for region in self.regions:
            if x < region.hi or region is self.regions[-1]:
                return region
        raise DomainError(f"x={x} matched no region")  # pragma: no cover

    def local_momentum(self) -> LocalMomentum:
        return LocalMomentum.for_params(self.potential, self.energy, self.params)


def _abs_momentum(lm: LocalMomentum, x: float) -> float:
    """sqrt(2M|E - V|): real magnitude on either side of a turning point."""
    return math.sqrt(2.0 * lm.mass * abs(lm.gap(x)))


def evaluate(wf: WkbWavefunction, x: float) -> complex:
    """Two-term WKB value at a single point (adaptive-quadrature phases).

    Allowed region: C1/sqrt(p) e^{+i Phi} + C2/sqrt(p) e^{-i Phi}.
    Forbidden region: C1/sqrt|p| e^{+Xi} + C2/sqrt|p| e^{-Xi}, the C2
    term decaying away from the anchor turning point.  Connection
    regions defer to uniform_wavefunction.
    """
    region = wf.region_at(x)
    if region.kind == "connection":
        raise UseUniformError(
            f"x={x} lies in the connection region around "
            f"{region.turning_point}; use uniform_wavefunction"
        )
    lm = wf.local_momentum()
    ah = effective_hbar(wf.params)
    u = region.phase_sign / ah * integrate(lambda t: _abs_momentum(lm, t), region.anchor, x)
    if region.kind == "allowed":
        p = lm.momentum(x)
        return (region.c1 * cmath.exp(1j * u) + region.c2 * cmath.exp(-1j * u)) / math.sqrt(p)
    q = _abs_momentum(lm, x)
    if q == 0.0:
        raise NearTurningPointError(f"|p| vanishes at x={x}")
    out = 0.0 + 0.0j
    if region.c1 != 0.0:
        out += region.c1 * math.exp(u)
    if region.c2 != 0.0:
        out += region.c2 * math.exp(-u)
    return out / math.sqrt(q)


def _airy_scale(potential: Potential, params: ScreeningParams, tp: float) -> tuple[float, float]:
    """(slope F at the turning point, Airy coordinate scale sigma)."""
    slope = float(potential.slope(tp))
    v_scale = max(abs(float(potential.value(tp))), 1.0)
    if abs(slope) * potential.width < 1e-10 * v_scale:
        raise DegenerateTurningPointError(
            f"V'({tp}) = {slope:g} is degenerate; linear connection does not apply"
        )
    ah = effective_hbar(params)
    sigma = (2.0 * params.mass_total * abs(slope) / (ah * ah)) ** (1.0 / 3.0)
    return slope, sigma


def airy_argument(
    potential: Potential, params: ScreeningParams, tp: float, x: float
) -> float:
    """Linearized coordinate s at x for the turning point tp; positive on
    the forbidden side regardless of orientation."""
    slope, sigma = _airy_scale(potential, params, tp)
    return sigma * (x - tp) if slope > 0.0 else sigma * (tp - x)


def uniform_wavefunction(
    potential: Potential,
    energy: float,
    params: ScreeningParams,
    tp: float,
    x: float,
) -> float:
    """Ai(s) for the potential linearized at the turning point, up to a
    caller-supplied amplitude.

    s = (2 M F/(alpha hbar)^2)^(1/3) (x - tp) when the allowed side is on
    the left (F = V'(tp) > 0); mirrored when it is on the right.  Valid
    wherever the linearization holds; exact for a linear potential.
    """
    del energy  # the turning point already pins E = V(tp)
    return airy_ai(airy_argument(potential, params, tp, x))


_IN = cmath.exp(-0.25j * math.pi)
_OUT = cmath.exp(0.25j * math.pi)
#: (C1, C2) in the allowed region from (D, G) on the forbidden side,
#: D the decaying and G the growing amplitude; derived by matching both
#: sides to the Ai/Bi asymptotic forms of the linearized equation.
_CONNECTION = np.array(
    [[_IN, 0.5 * _OUT], [_OUT, 0.5 * _IN]], dtype=complex
)
#: closed-form inverse (determinant is -i).
_CONNECTION_INVERSE = 1j * np.array(
    [[0.5 * _IN, -0.5 * _OUT], [-_OUT, _IN]], dtype=complex
)

_SIDES = ("allowed-left", "allowed-right")


def connect_at_turning_point(side: str) -> np.ndarray:
    """Coefficient transfer (D, G) -> (C1, C2) across a simple turning
    point.

    With phases oriented to grow away from the turning point on both
    sides, one matrix serves either orientation; `side` only validates
    the caller's geometry.  A pure decaying input D maps to the standing
    wave 2D/sqrt(p) cos(Phi - pi/4).
    """
    if side not in _SIDES:
        raise DomainError(f"side must be one of {_SIDES}, got {side!r}")
    return _CONNECTION.copy()


def connection_inverse(side: str) -> np.ndarray:
    """Inverse transfer (C1, C2) -> (D, G); exact closed form."""
    if side not in _SIDES:
        raise DomainError(f"side must be one of {_SIDES}, got {side!r}")
    return _CONNECTION_INVERSE.copy()


def uniform_amplitude(
    potential: Potential, params: ScreeningParams, tp: float, decaying: float
) -> float:
    """Amplitude N making N*Ai(s) match D/sqrt|p| e^{-Xi} asymptotically:
    N = 2 sqrt(pi) D / (2 M |F| alpha hbar)^(1/6)."""
    slope, _ = _airy_scale(potential, params, tp)
    ah = effective_hbar(params)
    return (
        2.0
        * math.sqrt(math.pi)
        * decaying
        / (2.0 * params.mass_total * abs(slope) * ah) ** (1.0 / 6.0)
    )


def _phases_from_anchor(
    wf: WkbWavefunction, region: Region, xs: np.ndarray
) -> np.ndarray:
    """Cumulative |p| integral from the region anchor to each sample.

    Tabulated in u = sqrt(|t - anchor|): when the anchor is a turning
    point |p| has a square-root cusp there, and the substitution turns
    the integrand into a smooth 2u|p(anchor +- u^2)| that Simpson
    cumulants resolve to near machine accuracy."""
    two_m = 2.0 * wf.params.mass_total
    out = np.zeros(xs.shape, dtype=float)
    for sgn in (-1.0, 1.0):
        if sgn < 0.0:
            span = region.anchor - min(region.lo, region.anchor)
            mask = xs < region.anchor
        else:
            span = max(region.hi, region.anchor) - region.anchor
            mask = xs >= region.anchor
        if span <= 0.0 or not np.any(mask):
            continue
        us = np.linspace(0.0, math.sqrt(span), _PHASE_GRID)
        ts = region.anchor + sgn * us * us
        gap = wf.energy - np.asarray(wf.potential.value(ts), dtype=float)
        q = np.sqrt(two_m * np.abs(gap))
        cum = cumulative_simpson(2.0 * us * q, x=us, initial=0.0)
        out[mask] = sgn * np.interp(np.sqrt(np.abs(xs[mask] - region.anchor)), us, cum)
    return out


def _sample_region(
    wf: WkbWavefunction, region: Region, xs: np.ndarray
) -> np.ndarray:
    """Vectorized evaluation inside one region via a cumulative phase
    table (the anchor is always an endpoint of the tabulated span)."""
    ah = effective_hbar(wf.params)
    if region.kind == "connection":
        vals = [
            region.amplitude
            * uniform_wavefunction(wf.potential, wf.energy, wf.params, region.turning_point, x)
            for x in xs
        ]
        return np.asarray(vals, dtype=complex)

    u = region.phase_sign * _phases_from_anchor(wf, region, xs) / ah

    gap_x = wf.energy - np.asarray(wf.potential.value(xs), dtype=float)
    q_x = np.sqrt(2.0 * wf.params.mass_total * np.abs(gap_x))
    if np.any(q_x == 0.0):
        raise NearTurningPointError("sample coincides with a turning point")
    amp = 1.0 / np.sqrt(q_x)
    if region.kind == "allowed":
        return amp * (region.c1 * np.exp(1j * u) + region.c2 * np.exp(-1j * u))
    out = np.zeros(xs.shape, dtype=complex)
    if region.c1 != 0.0:
        out += region.c1 * np.exp(np.minimum(u, 700.0))
    if region.c2 != 0.0:
        out += region.c2 * np.exp(np.minimum(-u, 700.0))
    return amp * out


def sample_wavefunction(wf: WkbWavefunction, xs, airy_patch: bool = True) -> np.ndarray:
    """Array evaluation across regions.

    Connection regions always return their amplitude-scaled uniform
    (Airy) values rather than raising.  With airy_patch=True (the
    default) the uniform form also replaces samples in the wider patch
    zone around each turning point, where the piecewise 1/sqrt(p)
    factor spikes unphysically; bound states are normalized against
    this patched composite.  Pass airy_patch=False for the strict
    piecewise form that matches evaluate() pointwise."""
    xs = np.asarray(xs, dtype=float)
    flat = xs.ravel()
    if flat.size and (flat.min() < wf.x_min or flat.max() > wf.x_max):
        raise DomainError("samples outside the assembled span")
    out = np.empty(flat.shape, dtype=complex)
    for i, region in enumerate(wf.regions):
        if i == len(wf.regions) - 1:
            mask = (flat >= region.lo) & (flat <= region.hi)
        else:
            mask = (flat >= region.lo) & (flat < region.hi)
        if np.any(mask):
            out[mask] = _sample_region(wf, region, flat[mask])
    if airy_patch:
        out = _patch_with_airy(wf, flat, out)
    return out.reshape(xs.shape)


def _patch_with_airy(
    wf: WkbWavefunction, xs: np.ndarray, psi: np.ndarray
) -> np.ndarray:
    """Replace samples near each turning point (|s| <= _PATCH_S, capped at
    a fraction of the well) with the uniform form: the piecewise WKB value
    is least accurate exactly there, and the patch keeps the norm honest."""
    out = psi.copy()
    for region in wf.regions:
        if region.kind != "connection":
            continue
        tp = region.turning_point
        _, sigma = _airy_scale(wf.potential, wf.params, tp)
        others = [
            r.turning_point
            for r in wf.regions
            if r.kind == "connection" and r is not region
        ]
        w = _PATCH_S / sigma
        for other in others:
            w = min(w, 0.45 * abs(other - tp))
        if wf.potential.hard_wall_left:
            w = min(w, 0.45 * abs(tp - wf.potential.x_min))
        zone = np.abs(xs - tp) <= w
        for idx in np.nonzero(zone)[0]:
            out[idx] = region.amplitude * uniform_wavefunction(
                wf.potential, wf.energy, wf.params, tp, xs[idx]
            )
    return out


def assemble_bound_state(
    potential: Potential, energy: float, params: ScreeningParams
) -> WkbWavefunction:
    """Piecewise bound state at a quantized energy, unit-normalized.

    Builds forbidden/connection/allowed regions around the turning
    points (connection half-widths from the validity-metric exclusion
    radius), anchors the allowed phase at the right turning point with
    the decay-both-sides coefficients, and rescales so the Airy-patched
    composite has unit L2 norm on the decay-extended span.  The energy
    is assumed to satisfy the half-offset quantization condition; the
    left-side decaying amplitude is then (-1)^n times the right one.
    """
    lm = LocalMomentum.for_params(potential, energy, params)
    tps = lm.turning_points
    ah = effective_hbar(params)
    wall = potential.hard_wall_left

    # quantization count fixes the parity linking the two decay amplitudes
    from .quantization import action_integral

    action = action_integral(potential, energy, params)
    nu = action / (2.0 * math.pi * ah)

    regions: list[Region] = []
    matrix = _CONNECTION
    if wall:
        tp = tps[-1]
        eps = exclusion_radius(lm, params, tp)
        d_right = 1.0
        c1, c2 = matrix @ np.array([d_right, 0.0], dtype=complex)
        regions.append(
            Region(potential.x_min, tp - eps, "allowed", anchor=tp, c1=c1, c2=c2, phase_sign=-1.0)
        )
        regions.append(
            Region(
                tp - eps, tp + eps, "connection", anchor=tp,
                turning_point=tp,
                amplitude=uniform_amplitude(potential, params, tp, d_right),
            )
        )
        hi_ext = min(tp + decay_extension(lm, params, tp, +1), potential.x_max)
        regions.append(
            Region(tp + eps, hi_ext, "forbidden", anchor=tp, c2=d_right, phase_sign=1.0)
        )
    else:
        if len(tps) != 2:
            raise DomainError(
                f"bound-state assembly needs a two-turning-point well, "
                f"E={energy} has {len(tps)}"
            )
        tp1, tp2 = tps
        eps1 = exclusion_radius(lm, params, tp1)
        eps2 = exclusion_radius(lm, params, tp2)
        n = int(round(nu - 0.5))
        d_right = 1.0
        d_left = (-1.0) ** n * d_right
        c1, c2 = matrix @ np.array([d_right, 0.0], dtype=complex)
        lo_ext = max(tp1 - decay_extension(lm, params, tp1, -1), potential.x_min)
        hi_ext = min(tp2 + decay_extension(lm, params, tp2, +1), potential.x_max)
        regions.append(
            Region(lo_ext, tp1 - eps1, "forbidden", anchor=tp1, c2=d_left, phase_sign=-1.0)
        )
        regions.append(
            Region(
                tp1 - eps1, tp1 + eps1, "connection", anchor=tp1,
                turning_point=tp1,
                amplitude=uniform_amplitude(potential, params, tp1, d_left),
            )
        )
        regions.append(
            Region(
                tp1 + eps1, tp2 - eps2, "allowed", anchor=tp2, c1=c1, c2=c2, phase_sign=-1.0
            )
        )
        regions.append(
            Region(
                tp2 - eps2, tp2 + eps2, "connection", anchor=tp2,
                turning_point=tp2,
                amplitude=uniform_amplitude(potential, params, tp2, d_right),
            )
        )
        regions.append(
            Region(tp2 + eps2, hi_ext, "forbidden", anchor=tp2, c2=d_right, phase_sign=1.0)
        )

    raw = WkbWavefunction(potential, energy, params, tuple(regions))
    xs = np.linspace(raw.x_min, raw.x_max, 40001)
    psi = sample_wavefunction(raw, xs)
    norm = math.sqrt(float(np.trapezoid((psi.real**2 + psi.imag**2), xs)))
    scale = 1.0 / norm
    scaled = tuple(
        Region(
            r.lo, r.hi, r.kind, r.anchor,
            c1=r.c1 * scale, c2=r.c2 * scale, phase_sign=r.phase_sign,
            turning_point=r.turning_point, amplitude=r.amplitude * scale,
        )
        for r in raw.regions
    )
    return WkbWavefunction(potential, energy, params, scaled)
