"""Independent ground truth: direct integration of the screened equation.

The stationary equation solved here is

    psi'' + (2 M / (alpha**2 hbar**2)) (E - V(x)) psi = 0,

i.e. psi'' = -k(x) psi with k = (2M/(alpha*hbar)**2)(E - V).  A Numerov
three-term recursion (fourth order) sweeps from each boundary; bound
states are located by node-count bisection on E followed by root
refinement of a normalized Wronskian mismatch at an interior matching
point.  Nothing here uses the semiclassical series: eigenvalues and
wavefunctions from this module are an independent check on it.  (The
matching POSITION is chosen where the series' validity metric is
smallest, which affects conditioning only, not values.)

Deep forbidden regions make the growing solution overflow for small
alpha; sweeps therefore rescale on the fly and record per-sample log
scale factors, from which true relative values are reconstructed in log
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ConvergenceError,
    DomainError,
    NoBoundStateError,
    StepTooCoarseError,
)
from .params import ScreeningParams, effective_hbar
from .potentials import Potential, turning_points
from .wkb_series import LocalMomentum, decay_extension

try:  # pragma: no cover - exercised implicitly
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


_trapz = getattr(np, "trapezoid", np.trapz)

DEFAULT_GRID_POINTS = 8001
#: |psi| threshold triggering a rescale during a sweep.
_RESCALE_AT = 1e250
#: acceptable normalized Wronskian mismatch at a converged eigenvalue.
MATCH_TOLERANCE = 1e-7


@dataclass(frozen=True)
class Grid:
    """Uniform sample grid [x_min, x_max] with n_points samples."""

    x_min: float
    x_max: float
    n_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self) -> None:
        if not (self.x_max > self.x_min):
            raise DomainError(f"grid needs x_max > x_min, got {self}")
        if self.n_points < 16:
            raise DomainError(f"grid needs at least 16 points, got {self.n_points}")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self) -> "Grid":
        """Same span with the step halved (for convergence checks)."""
        return Grid(self.x_min, self.x_max, 2 * (self.n_points - 1) + 1)


@dataclass(frozen=True)
class SolverReport:
    """Converged eigenpair with solver diagnostics."""

    energy: float
    n_nodes: int
    grid: Grid
    psi: np.ndarray
    match_defect: float
    iterations: int
    n_requested: int


@_njit(cache=True)
def _numerov_kernel(f: np.ndarray, seed: float):  # pragma: no cover - jitted
    """psi'' = -k psi recursion with f = 1 + h^2 k / 12, from (0, seed).

    Returns stored values and per-sample accumulated log scale factors:
    the true value at sample j is psi[j] * exp(logs[j]) up to overall
    normalization.
    """
    n = f.shape[0]
    psi = np.zeros(n)
    logs = np.zeros(n)
    psi[0] = 0.0
    psi[1] = seed
    running = 0.0
    for i in range(1, n - 1):
        nxt = ((12.0 - 10.0 * f[i]) * psi[i] - f[i - 1] * psi[i - 1]) / f[i + 1]
        mag = abs(nxt)
        if mag > _RESCALE_AT:
            s = 1.0 / mag
            psi[i] *= s
            nxt *= s
            running += math.log(mag)
            logs[i] = running
        psi[i + 1] = nxt
        logs[i + 1] = running
    return psi, logs


def _check_stability(k: np.ndarray, h: float) -> None:
    worst = float(np.max(np.abs(k))) * h * h
    if worst >= 1.0:
        raise StepTooCoarseError(
            f"grid step violates k*h^2 < 1 (max {worst:.3g}); refine the grid"
        )


def _to_shape(psi: np.ndarray, logs: np.ndarray) -> np.ndarray:
    """True relative values, normalized to max |psi| = 1, reconstructed in
    log space so that rescale events cannot overflow."""
    mag = np.abs(psi)
    with np.errstate(divide="ignore"):
        logmag = np.where(mag > 0.0, np.log(np.where(mag > 0.0, mag, 1.0)) + logs, -np.inf)
    top = float(np.max(logmag))
    if not np.isfinite(top):
        return np.zeros_like(psi)
    return np.sign(psi) * np.exp(logmag - top)


def numerov_sweep(
    potential: Potential,
    energy: float,
    params: ScreeningParams,
    grid: Grid,
    direction: str = "left-to-right",
) -> np.ndarray:
    """Single Numerov sweep across the grid; returns the sampled solution
    normalized to unit maximum magnitude (the ODE fixes it only up to
    scale).  direction is "left-to-right" or "right-to-left"."""
    if direction in ("left-to-right", "ltr"):
        reverse = False
    elif direction in ("right-to-left", "rtl"):
        reverse = True
    else:
        raise DomainError(f"unknown sweep direction {direction!r}")
    xs = grid.points()
    ah = effective_hbar(params)
    k = (2.0 * params.mass_total / (ah * ah)) * (
        energy - np.asarray(potential.value(xs), dtype=float)
    )
    h = grid.h
    _check_stability(k, h)
    f = 1.0 + (h * h / 12.0) * k
    if reverse:
        psi, logs = _numerov_kernel(f[::-1].copy(), h)
        return _to_shape(psi, logs)[::-1].copy()
    psi, logs = _numerov_kernel(f, h)
    return _to_shape(psi, logs)


def node_count(psi: np.ndarray) -> int:
    """Strict sign changes, ignoring samples below 1e-12 of the maximum."""
    a = np.asarray(psi, dtype=float)
    top = float(np.max(np.abs(a))) if a.size else 0.0
    if top == 0.0:
        return 0
    kept = a[np.abs(a) > 1e-12 * top]
    signs = np.sign(kept)
    return int(np.count_nonzero(signs[1:] * signs[:-1] < 0.0))


class _Shooter:
    """Per-solve workspace bound to one (potential, params, grid) triple."""

    def __init__(self, potential: Potential, params: ScreeningParams, grid: Grid):
        self.potential = potential
        self.params = params
        self.grid = grid
        self.xs = grid.points()
        self.h = grid.h
        self.v = np.asarray(potential.value(self.xs), dtype=float)
        self.slopes = np.asarray(potential.slope(self.xs), dtype=float)
        self.sweeps = 0

    def f_array(self, energy: float) -> np.ndarray:
        ah = effective_hbar(self.params)
        k = (2.0 * self.params.mass_total / (ah * ah)) * (energy - self.v)
        _check_stability(k, self.h)
        return 1.0 + (self.h * self.h / 12.0) * k

    def full_sweep(self, energy: float):
        f = self.f_array(energy)
        self.sweeps += 1
        return _numerov_kernel(f, self.h)

    def nodes(self, energy: float) -> int:
        """Sign changes of the left-boundary solution over the classically
        allowed interior samples only.  The full-sweep maximum sits in the
        growing forbidden tail (many hundreds of e-folds above the well
        oscillation for small alpha), so both the restriction to E > V and
        the magnitude filter must work in log space against the allowed
        region's own maximum."""
        psi, logs = self.full_sweep(energy)
        allowed = energy > self.v
        allowed[0] = allowed[-1] = False
        if not np.any(allowed):
            return 0
        pa = psi[allowed]
        mag = np.abs(pa)
        with np.errstate(divide="ignore"):
            logmag = np.where(
                mag > 0.0, np.log(np.where(mag > 0.0, mag, 1.0)) + logs[allowed], -np.inf
            )
        top = float(np.max(logmag))
        if not np.isfinite(top):
            return 0
        signs = np.sign(pa[logmag > top + math.log(1e-12)])
        return int(np.count_nonzero(signs[1:] * signs[:-1] < 0.0))

    def match_index(self, energy: float) -> int:
        """Deepest classically allowed sample (minimal validity metric),
        shifted within a quarter local wavelength to dodge wavefunction
        nodes, which would ill-condition the Wronskian mismatch."""
        gap = energy - self.v
        allowed = gap > 0.0
        if not np.any(allowed[1:-1]):
            raise NoBoundStateError(
                f"E={energy} has no classically allowed interior samples"
            )
        metric = np.full(self.v.shape, np.inf)
        p2 = 2.0 * self.params.mass_total * gap[allowed]
        metric[allowed] = np.abs(self.slopes[allowed]) / p2**1.5
        metric[0] = metric[-1] = np.inf
        m = int(np.argmin(metric))
        m = min(max(m, 2), self.grid.n_points - 3)

        ah = effective_hbar(self.params)
        k_m = (2.0 * self.params.mass_total / (ah * ah)) * gap[m]
        quarter = math.pi / (2.0 * math.sqrt(k_m)) if k_m > 0 else self.h
        w = int(min(max(quarter / self.h, 1), 200))
        lo, hi = max(m - w, 2), min(m + w, self.grid.n_points - 3)
        psi, logs = self.full_sweep(energy)
        shape = _to_shape(psi, logs)
        window = np.abs(shape[lo : hi + 1])
        return lo + int(np.argmax(window))

    @staticmethod
    def _true_local(psi, logs, j: int, ref: int) -> float:
        """psi_true(j) / exp(logs[ref]): safe against rescale jumps."""
        mag = abs(psi[j])
        if mag == 0.0:
            return 0.0
        expo = min(math.log(mag) + logs[j] - logs[ref], 700.0)
        return math.copysign(math.exp(expo), psi[j])

    def _half_sweeps(self, energy: float, m: int):
        f = self.f_array(energy)
        self.sweeps += 2
        psi_l, logs_l = _numerov_kernel(f[: m + 2], self.h)
        psi_r_rev, logs_r_rev = _numerov_kernel(f[m - 1 :][::-1].copy(), self.h)
        return f, psi_l, logs_l, psi_r_rev[::-1], logs_r_rev[::-1]

    def defect(self, energy: float, m: int) -> float:
        """Normalized Wronskian of the two sweeps at sample m.

        Zero exactly at discrete eigenvalues, where the boundary-matched
        solutions become proportional; between eigenvalues its sign is
        constant and it flips once at each level.  The normalization keeps
        it in [-1, 1] and invariant under rescaling either sweep.
        """
        f, psi_l, logs_l, psi_r, logs_r = self._half_sweeps(energy, m)
        # left segment: global j <-> local j; right segment: local j <-> global m-1+j
        lL = [self._true_local(psi_l, logs_l, m + d, m) for d in (-1, 0, 1)]
        lR = [self._true_local(psi_r, logs_r, j, 1) for j in (0, 1, 2)]
        # unit-max rescale: stored magnitudes can sit anywhere below the
        # rescale threshold, and raw cross products would over/underflow
        sL = max(abs(v) for v in lL) or 1.0
        sR = max(abs(v) for v in lR) or 1.0
        lL = [v / sL for v in lL]
        lR = [v / sR for v in lR]
        # O(h^4) derivative: psi' = [psi_+ (2f_+ - 1) - psi_- (2f_- - 1)] / (2h)
        c_m1 = 2.0 * f[m - 1] - 1.0
        c_p1 = 2.0 * f[m + 1] - 1.0
        dL = (lL[2] * c_p1 - lL[0] * c_m1) / (2.0 * self.h)
        dR = (lR[2] * c_p1 - lR[0] * c_m1) / (2.0 * self.h)
        vL, vR = lL[1], lR[1]
        num = vL * dR - vR * dL
        den = abs(vL * dR) + abs(vR * dL) + 1e-300
        return num / den

    def glue(self, energy: float, m: int) -> np.ndarray:
        """Assemble the full eigenfunction from both sweeps, matched at m,
        unit-normalized by trapezoidal quadrature."""
        f, psi_l, logs_l, psi_r, logs_r = self._half_sweeps(energy, m)

        def rel_values(psi, logs, ref):
            mag = np.abs(psi)
            with np.errstate(divide="ignore"):
                logmag = np.where(
                    mag > 0.0, np.log(np.where(mag > 0.0, mag, 1.0)) + logs, -np.inf
                )
            rel = np.minimum(logmag - logmag[ref], 700.0)
            vals = np.sign(psi) * np.exp(rel)
            ref_sign = math.copysign(1.0, psi[ref]) if psi[ref] != 0.0 else 1.0
            return vals * ref_sign  # value 1 at the reference sample

        left = rel_values(psi_l, logs_l, m)
        right = rel_values(psi_r, logs_r, 1)
        out = np.zeros(self.grid.n_points)
        out[: m + 1] = left[: m + 1]
        out[m:] = right[1:]
        norm = math.sqrt(float(_trapz(out * out, self.xs)))
        if norm == 0.0:
            raise ConvergenceError("glued wavefunction vanished")
        return out / norm


def default_grid(
    potential: Potential,
    params: ScreeningParams,
    energy: float,
    points: int = DEFAULT_GRID_POINTS,
) -> Grid:
    """Grid covering the allowed region at `energy`, extended into the
    forbidden sides far enough (12 decay e-folds) that truncating there
    leaves eigenvalue errors well under the matching tolerance; capped
    at the potential domain."""
    tps = turning_points(potential, energy)
    lm = LocalMomentum.for_params(potential, energy, params)
    if potential.hard_wall_left:
        if not tps:
            raise NoBoundStateError(f"E={energy} has no turning point in the domain")
        lo = potential.x_min
        hi = tps[-1] + decay_extension(lm, params, tps[-1], +1)
    else:
        if len(tps) < 2:
            raise NoBoundStateError(
                f"E={energy} does not produce a two-turning-point well"
            )
        lo = tps[0] - decay_extension(lm, params, tps[0], -1)
        hi = tps[-1] + decay_extension(lm, params, tps[-1], +1)
    lo = max(lo, potential.x_min)
    hi = min(hi, potential.x_max)
    return Grid(lo, hi, points)


def _bracket_ceiling(potential: Potential) -> float:
    if potential.hard_wall_left:
        return float(potential.value(potential.x_max))
    return float(
        min(potential.value(potential.x_min), potential.value(potential.x_max))
    )


def _well_floor(shooter: _Shooter) -> tuple[float, float]:
    """(floor energy just above the well bottom, confining ceiling)."""
    v_min = float(np.min(shooter.v))
    ceiling = _bracket_ceiling(shooter.potential)
    span = ceiling - v_min
    if span <= 0.0:
        raise NoBoundStateError("potential has no confining range on this domain")
    return v_min + 1e-9 * span, ceiling


def _expand_above(shooter: _Shooter, target: int, floor: float, ceiling: float) -> float:
    """Geometric search upward from the floor for an energy whose
    allowed-region node count exceeds `target`."""
    g = 1e-6 * (ceiling - floor)
    e = floor
    while True:
        cand = min(e + g, ceiling)
        if shooter.nodes(cand) > target:
            return cand
        if cand >= ceiling:
            raise NoBoundStateError(
                f"no level with {target} allowed-region nodes below the "
                f"confining ceiling {ceiling:g}"
            )
        e = cand
        g *= 2.0


class _Certificate:
    """Decides trial energy E < E_n vs E > E_n for the target level n.

    The matching defect's sign flips exactly once per eigenvalue, so on
    the strip where the allowed-region node count equals n (which always
    contains E_n) the sign relative to its value below all levels settles
    the comparison; outside the strip the count alone does.
    """

    def __init__(self, shooter: _Shooter, target: int, m: int, floor: float):
        self.shooter = shooter
        self.target = target
        self.m = m
        s_floor = math.copysign(1.0, shooter.defect(floor, m))
        self.below_sign = s_floor * (1.0 if target % 2 == 0 else -1.0)

    def classify(self, energy: float) -> tuple[bool, int]:
        """(is E below the target level, allowed-region node count)."""
        count = self.shooter.nodes(energy)
        if count != self.target:
            return count < self.target, count
        sign = math.copysign(1.0, self.shooter.defect(energy, self.m))
        return sign == self.below_sign, count


def _locate(
    shooter: _Shooter,
    target: int,
    window: tuple[float, float] | None,
    coarse: bool,
):
    """Bracket the target level by certificate bisection.

    coarse=True: stop at ~0.1% relative width, return (e_lo, e_hi).
    coarse=False: shrink until both endpoints carry node count == target,
    then Brent-refine the defect; returns (energy, |defect|, match index).
    """
    floor, ceiling = _well_floor(shooter)
    e_hi = _expand_above(shooter, target, floor, ceiling)
    m = shooter.match_index(e_hi)
    cert = _Certificate(shooter, target, m, floor)

    a, na = floor, shooter.nodes(floor)
    b, nb = e_hi, target + 1
    if window is not None:
        wa, wb = window
        pad = 0.05 * (wb - wa) + 1e-9 * max(abs(wb), 1.0)
        ta, tb = max(a, wa - pad), min(b, wb + pad)
        if ta < tb:
            t_below, t_count = cert.classify(ta)
            if t_below:
                a, na = ta, t_count
            t_below, t_count = cert.classify(tb)
            if not t_below:
                b, nb = tb, t_count

    scale = max(abs(b), 1e-12)
    for _ in range(200):
        if coarse and (b - a) <= 1e-3 * scale:
            return a, b
        if not coarse and na == target and nb == target:
            da = shooter.defect(a, m)
            db = shooter.defect(b, m)
            if da == 0.0:
                return a, 0.0, m
            if db == 0.0:
                return b, 0.0, m
            if da * db >= 0.0:
                raise ConvergenceError(
                    "matching defect kept its sign inside the certified bracket"
                )
            energy = float(
                brentq(
                    lambda e: shooter.defect(e, m),
                    a,
                    b,
                    rtol=1e-12,
                    xtol=1e-15 * scale,
                )
            )
            return energy, abs(shooter.defect(energy, m)), m
        if (b - a) <= 1e-15 * scale:
            raise ConvergenceError(
                "energy bracket collapsed before the level was isolated"
            )
        mid = 0.5 * (a + b)
        mid_below, mid_count = cert.classify(mid)
        if mid_below:
            a, na = mid, mid_count
        else:
            b, nb = mid, mid_count
    raise ConvergenceError("eigenvalue bisection exceeded the iteration cap")


def _rough_interval(
    potential: Potential, params: ScreeningParams, target: int
) -> tuple[float, float, int]:
    """Phase one: localize the level to ~0.1% on a provisional grid over
    the full potential domain; only used to size the production grid.
    Doubles the point count if the step fails the stability bound."""
    points = DEFAULT_GRID_POINTS
    for _ in range(7):
        grid = Grid(potential.x_min, potential.x_max, points)
        shooter = _Shooter(potential, params, grid)
        try:
            a, b = _locate(shooter, target, None, coarse=True)
            return a, b, shooter.sweeps
        except StepTooCoarseError:
            points = 2 * (points - 1) + 1
    raise ConvergenceError(
        "could not build a stable provisional grid for the level search"
    )


def eigenvalue_solve(
    potential: Potential,
    n: int,
    params: ScreeningParams,
    grid: Grid | None = None,
) -> SolverReport:
    """Shooting solve for the n-th bound state.

    Smooth wells index levels from n = 0 (= number of interior nodes).
    Hard-wall wells follow the customary 1-based labelling, so n >= 1
    there and the target interior node count is n - 1.

    With grid=None a production grid is sized automatically: a rough
    node-count search on the full potential domain localizes the level,
    then the grid is shrunk to the allowed region plus decay margins.
    """
    wall = potential.hard_wall_left
    if wall:
        if n < 1:
            raise DomainError("hard-wall wells index levels from n = 1")
        target = n - 1
    else:
        if n < 0:
            raise DomainError("level index must be >= 0")
        target = n

    iterations = 0
    window = None
    if grid is None:
        e_lo, e_hi, sweeps = _rough_interval(potential, params, target)
        iterations += sweeps
        grid = default_grid(potential, params, e_hi)
        window = (e_lo, e_hi)

    shooter = _Shooter(potential, params, grid)
    energy, defect_val, m = _locate(shooter, target, window, coarse=False)
    psi = shooter.glue(energy, shooter.match_index(energy))
    iterations += shooter.sweeps
    return SolverReport(
        energy=energy,
        n_nodes=node_count(psi),
        grid=grid,
        psi=psi,
        match_defect=abs(defect_val),
        iterations=iterations,
        n_requested=n,
    )
