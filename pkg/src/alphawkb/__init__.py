"""Semiclassical (WKB) machinery for Schrodinger problems in which the
action scale is screened by a dimensionless parameter alpha in (0, 1].

Layout: potential catalog (`potentials`), Riccati series terms and phase
integrals (`wkb_series`), piecewise wavefunction assembly with Airy
matching (`wavefunction`), quantization rules (`quantization`), an
independent Numerov eigenvalue oracle (`oracle`), classical-limit
diagnostics (`classical_limit`), and a manifest-driven CLI (`cli`).
"""

__version__ = "0.1.0"

from .airy import airy_ai, airy_ai_deriv, airy_ai_zero, airy_bi, airy_bi_deriv, airy_wronskian
from .classical_limit import LimitScan, action_s0, convergence_scan, hj_defect
from .errors import (
    AlphaWkbError,
    ConfigError,
    ConvergenceError,
    DegenerateTurningPointError,
    DomainError,
    ForbiddenRegionError,
    NearTurningPointError,
    NoBoundStateError,
    RangeOverflowError,
    StepTooCoarseError,
    TurningPointTopologyError,
    UnsupportedOrderError,
    UseUniformError,
)
from .oracle import Grid, SolverReport, eigenvalue_solve, node_count, numerov_sweep
from .params import ScreeningParams, effective_hbar, screening_size, uncertainty_bound
from .potentials import (
    HarmonicPotential,
    LinearWellPotential,
    MorsePotential,
    Potential,
    QuarticPotential,
    TabulatedPotential,
    from_config,
    turning_points,
)
from .quantization import (
    HALF_RULE,
    OLD_RULE,
    EnergySpectrum,
    QuantizationRule,
    action_integral,
    effective_nu,
    quantize,
    spectrum,
)
from .wavefunction import (
    Region,
    WkbWavefunction,
    airy_argument,
    amplitude_identity_defect,
    assemble_bound_state,
    connect_at_turning_point,
    connection_inverse,
    evaluate,
    sample_wavefunction,
    uniform_amplitude,
    uniform_wavefunction,
)
from .wkb_series import (
    LocalMomentum,
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

__all__ = [
    "__version__",
    "AlphaWkbError",
    "ConfigError",
    "ConvergenceError",
    "DegenerateTurningPointError",
    "DomainError",
    "ForbiddenRegionError",
    "NearTurningPointError",
    "NoBoundStateError",
    "RangeOverflowError",
    "StepTooCoarseError",
    "TurningPointTopologyError",
    "UnsupportedOrderError",
    "UseUniformError",
    "EnergySpectrum",
    "Grid",
    "HALF_RULE",
    "HarmonicPotential",
    "LimitScan",
    "LinearWellPotential",
    "LocalMomentum",
    "MorsePotential",
    "OLD_RULE",
    "Potential",
    "QuantizationRule",
    "QuarticPotential",
    "Region",
    "ScreeningParams",
    "SolverReport",
    "TabulatedPotential",
    "WkbWavefunction",
    "action_integral",
    "action_s0",
    "airy_ai",
    "airy_ai_deriv",
    "airy_ai_zero",
    "airy_argument",
    "airy_bi",
    "airy_bi_deriv",
    "airy_wronskian",
    "amplitude_identity_defect",
    "assemble_bound_state",
    "connect_at_turning_point",
    "connection_inverse",
    "convergence_scan",
    "effective_hbar",
    "effective_nu",
    "eigenvalue_solve",
    "evaluate",
    "exclusion_radius",
    "from_config",
    "hj_defect",
    "node_count",
    "numerov_sweep",
    "phase_integral",
    "quantize",
    "recursion_defect",
    "recursion_scale",
    "riccati_residual",
    "sample_wavefunction",
    "screening_size",
    "series_sum",
    "spectrum",
    "turning_points",
    "uncertainty_bound",
    "uniform_amplitude",
    "uniform_wavefunction",
    "validity_metric",
    "y0",
    "y1",
    "y2",
    "y3",
]
