"""One-dimensional potential catalog with analytic derivatives.

Every potential carries its own finite domain ``(x_min, x_max)`` and
exposes value, slope, curvature and third derivative as vectorized
callables.  ``eval`` is the order-dispatching entry point used by the
rest of the package; ``turning_points`` locates the classical turning
points ``V(x) = E`` on the domain.

All concrete potentials are frozen dataclasses: instances are immutable
and hashable, so they can be shared freely across threads and cached on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import DomainError, UnsupportedOrderError

#: Number of samples in the coarse turning-point scan.
_SCAN_SAMPLES = 2048
#: Relative tolerance of the turning-point refinement.
_ROOT_RTOL = 1e-12


class Potential:
    """Interface shared by all catalog entries.

    Subclasses provide ``value``, ``slope``, ``curvature`` and ``third``,
    each accepting scalars or numpy arrays, plus a ``domain`` field.
    """

    kind: ClassVar[str] = "abstract"
    #: True when the left edge of the domain is an infinite hard wall.
    hard_wall_left: ClassVar[bool] = False

    @property
    def x_min(self) -> float:
        return self.domain[0]

    @property
    def x_max(self) -> float:
        return self.domain[1]

    @property
    def width(self) -> float:
        return self.domain[1] - self.domain[0]

    def value(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def slope(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def curvature(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def third(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def interior_breakpoints(self) -> tuple[float, ...]:
        """Interior abscissas where V loses smoothness (spline knots);
        empty for the analytic catalog entries."""
        return ()

    def check_domain(self, x) -> None:
        """Raise DomainError when any component of x leaves the domain."""
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x_min) or np.any(x > self.x_max):
            raise DomainError(
                f"x outside potential domain [{self.x_min}, {self.x_max}]"
            )

    def _validate_domain(self) -> None:
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"invalid domain {self.domain}")


def eval(potential: Potential, x, order: int = 0):
    """Evaluate the potential or one of its first three derivatives.

    order 0 is V(x), 1 the slope, 2 the curvature, 3 the third derivative.
    x may be a scalar or array; the result matches its shape.  Points
    outside the potential domain raise DomainError, orders outside 0..3
    raise UnsupportedOrderError.
    """
    if order not in (0, 1, 2, 3):
        raise UnsupportedOrderError(f"derivative order {order} not supported")
    potential.check_domain(x)
    fn = (potential.value, potential.slope, potential.curvature, potential.third)[order]
    return fn(x)


@dataclass(frozen=True)
class HarmonicPotential(Potential):
    """V(x) = (1/2) * mass * omega**2 * (x - x0)**2."""

    omega: float = 1.0
    x0: float = 0.0
    mass: float = 1.0
    domain: tuple[float, float] = (-20.0, 20.0)

    kind: ClassVar[str] = "harmonic"

    def __post_init__(self) -> None:
        if self.omega <= 0.0 or self.mass <= 0.0:
            raise DomainError("omega and mass must be positive")
        self._validate_domain()

    def value(self, x):
        d = np.asarray(x, dtype=float) - self.x0
        return 0.5 * self.mass * self.omega**2 * d * d

    def slope(self, x):
        d = np.asarray(x, dtype=float) - self.x0
        return self.mass * self.omega**2 * d

    def curvature(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.mass * self.omega**2)

    def third(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class LinearWellPotential(Potential):
    """Uniform force above a hard floor: V(x) = F * (x - wall), x >= wall.

    The wall itself is an infinite barrier, so wavefunctions vanish there.
    """

    force: float = 1.0
    wall: float = 0.0
    domain: tuple[float, float] | None = None

    kind: ClassVar[str] = "linear"
    hard_wall_left: ClassVar[bool] = True

    def __post_init__(self) -> None:
        if self.force <= 0.0:
            raise DomainError("force must be positive")
        if self.domain is None:
            object.__setattr__(self, "domain", (self.wall, self.wall + 30.0 / self.force))
        if self.domain[0] != self.wall:
            raise DomainError("linear well domain must start at the wall")
        self._validate_domain()

    def value(self, x):
        return self.force * (np.asarray(x, dtype=float) - self.wall)

    def slope(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.force)

    def curvature(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def third(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class QuarticPotential(Potential):
    """V(x) = lam * x**4."""

    lam: float = 1.0
    domain: tuple[float, float] = (-12.0, 12.0)

    kind: ClassVar[str] = "quartic"

    def __post_init__(self) -> None:
        if self.lam <= 0.0:
            raise DomainError("lam must be positive")
        self._validate_domain()

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.lam * x**4

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        return 4.0 * self.lam * x**3

    def curvature(self, x):
        x = np.asarray(x, dtype=float)
        return 12.0 * self.lam * x**2

    def third(self, x):
        x = np.asarray(x, dtype=float)
        return 24.0 * self.lam * x


@dataclass(frozen=True)
class MorsePotential(Potential):
    """V(x) = depth * (1 - exp(-a*(x - x0)))**2, dissociating to `depth`."""

    depth: float = 1.0
    a: float = 1.0
    x0: float = 0.0
    domain: tuple[float, float] | None = None

    kind: ClassVar[str] = "morse"

    def __post_init__(self) -> None:
        if self.depth <= 0.0 or self.a <= 0.0:
            raise DomainError("depth and a must be positive")
        if self.domain is None:
            object.__setattr__(
                self, "domain", (self.x0 - 2.0 / self.a, self.x0 + 40.0 / self.a)
            )
        self._validate_domain()

    def _u(self, x):
        return np.exp(-self.a * (np.asarray(x, dtype=float) - self.x0))

    def value(self, x):
        w = 1.0 - self._u(x)
        return self.depth * w * w

    def slope(self, x):
        u = self._u(x)
        return 2.0 * self.a * self.depth * (u - u * u)

    def curvature(self, x):
        u = self._u(x)
        return 2.0 * self.a**2 * self.depth * (2.0 * u * u - u)

    def third(self, x):
        u = self._u(x)
        return 2.0 * self.a**3 * self.depth * (u - 4.0 * u * u)


@dataclass(frozen=True)
class TabulatedPotential(Potential):
    """Potential sampled on a grid, interpolated by a cubic spline with
    not-a-knot end conditions.  The spline is C2, so curvature is available
    but the third derivative (discontinuous across knots) is not exposed.
    """

    xs: tuple[float, ...] = ()
    vs: tuple[float, ...] = ()

    kind: ClassVar[str] = "tabulated"

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float)
        vs = np.asarray(self.vs, dtype=float)
        if xs.size < 4 or xs.size != vs.size:
            raise DomainError("tabulated potential needs >= 4 (x, V) pairs")
        if np.any(np.diff(xs) <= 0.0):
            raise DomainError("tabulated x values must be strictly increasing")
        object.__setattr__(self, "xs", tuple(float(v) for v in xs))
        object.__setattr__(self, "vs", tuple(float(v) for v in vs))
        spline = CubicSpline(xs, vs, bc_type="not-a-knot")
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(self, "_dspline", spline.derivative(1))
        object.__setattr__(self, "_ddspline", spline.derivative(2))

    @property
    def domain(self) -> tuple[float, float]:
        return (self.xs[0], self.xs[-1])

    def interior_breakpoints(self) -> tuple[float, ...]:
        return self.xs[1:-1]

    def value(self, x):
        return self._spline(np.asarray(x, dtype=float))

    def slope(self, x):
        return self._dspline(np.asarray(x, dtype=float))

    def curvature(self, x):
        return self._ddspline(np.asarray(x, dtype=float))

    def third(self, x):
        raise UnsupportedOrderError(
            "third derivative of tabulated data is not defined (spline is C2)"
        )


def turning_points(potential: Potential, energy: float) -> list[float]:
    """Classical turning points: roots of E - V(x) on the domain, ascending.

    A coarse scan on a uniform grid brackets the sign changes of E - V,
    each bracket is then refined by Brent's method to relative tolerance
    1e-12.  Grid points where E - V vanishes to machine precision are
    returned directly.  Tangential (double) roots between samples are not
    resolved by a sign-change scan and are intentionally out of scope.
    """
    xs = np.linspace(potential.x_min, potential.x_max, _SCAN_SAMPLES)
    g = energy - np.asarray(potential.value(xs), dtype=float)
    scale = max(abs(energy), float(np.max(np.abs(g))), 1.0)

    def gap(x: float) -> float:
        return energy - float(potential.value(x))

    roots: list[float] = []
    exact = np.abs(g) <= 1e-15 * scale
    for i in range(_SCAN_SAMPLES - 1):
        if exact[i]:
            roots.append(float(xs[i]))
            continue
        if exact[i + 1]:
            continue
        if g[i] * g[i + 1] < 0.0:
            r = brentq(
                gap,
                xs[i],
                xs[i + 1],
                rtol=_ROOT_RTOL,
                xtol=1e-13 * max(1.0, abs(xs[i]) + abs(xs[i + 1])),
            )
            roots.append(float(r))
    if exact[-1]:
        roots.append(float(xs[-1]))

    roots.sort()
    deduped: list[float] = []
    tol = 1e-9 * potential.width
    for r in roots:
        if not deduped or r - deduped[-1] > tol:
            deduped.append(r)
    return deduped


def from_config(config: dict) -> Potential:
    """Build a potential from a plain-dict description (CLI configs).

    The dict must carry a ``kind`` key naming a catalog entry; remaining
    keys are the dataclass fields of that entry.  ``domain`` may be given
    as a two-element list.  Unknown kinds or fields raise DomainError.
    """
    if not isinstance(config, dict) or "kind" not in config:
        raise DomainError("potential config must be a dict with a 'kind' key")
    catalog = {
        "harmonic": HarmonicPotential,
        "linear": LinearWellPotential,
        "quartic": QuarticPotential,
        "morse": MorsePotential,
        "tabulated": TabulatedPotential,
    }
    kind = config["kind"]
    if kind not in catalog:
        raise DomainError(f"unknown potential kind {kind!r}")
    cls = catalog[kind]
    kwargs = {k: v for k, v in config.items() if k != "kind"}
    allowed = set(cls.__dataclass_fields__)
    unknown = set(kwargs) - allowed
    if unknown:
        raise DomainError(f"unknown parameters for {kind}: {sorted(unknown)}")
    if "domain" in kwargs and kwargs["domain"] is not None:
        dom = kwargs["domain"]
        if not (isinstance(dom, (list, tuple)) and len(dom) == 2):
            raise DomainError("domain must be a two-element [x_min, x_max] pair")
        kwargs["domain"] = (float(dom[0]), float(dom[1]))
    if "xs" in kwargs:
        kwargs["xs"] = tuple(float(v) for v in kwargs["xs"])
    if "vs" in kwargs:
        kwargs["vs"] = tuple(float(v) for v in kwargs["vs"])
    return cls(**kwargs)
