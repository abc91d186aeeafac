"""Command-line front end: spectra, wavefunction tables, classical-limit
sweeps, and a self-check suite, all emitted as CSV/JSON with an embedded
manifest so any run can be reproduced byte-for-byte from its own output.

Exit codes: 0 success, 2 configuration error, 3 numerical
non-convergence, 4 validation failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .airy import airy_ai, airy_ai_deriv, airy_wronskian
from .classical_limit import convergence_scan
from .errors import (
    AlphaWkbError,
    ConfigError,
    ConvergenceError,
    NoBoundStateError,
    StepTooCoarseError,
)
from .numdiff import richardson_derivative
from .oracle import Grid, eigenvalue_solve
from .params import ScreeningParams, screening_size
from .potentials import from_config as potential_from_config
from .quantization import HALF_RULE, OLD_RULE, quantize
from .wavefunction import (
    amplitude_identity_defect,
    assemble_bound_state,
    sample_wavefunction,
)
from .wkb_series import LocalMomentum, recursion_defect, recursion_scale, validity_metric

#: numerical tolerances recorded in every manifest.
TOLERANCES = {
    "quantize_rtol": 1e-10,
    "oracle_defect_rtol": 1e-12,
    "quadrature_rtol": 1e-10,
    "deviation_floor": 1e-14,
    "oracle_match_tolerance": 1e-7,
}

_TOP_KEYS = {"potential", "params", "spectrum", "wavefunction", "sweep", "validate", "output"}
_SUITES = ("all", "airy", "screening", "oracle", "wkb", "quantization", "limit")


def _default_config() -> dict:
    return {
        "potential": {"kind": "harmonic"},
        "params": {"alpha": 1.0, "mass_total": 1.0, "hbar": 1.0},
        "spectrum": {"n_max": 5, "rule": "both"},
        "wavefunction": {
            "n": 10,
            "samples": 801,
            "span": None,
            "energy_source": "oracle",
            "rule": "half",
        },
        "sweep": {
            "alphas": [0.1, 0.0681, 0.0464, 0.0215, 0.01, 0.00464, 0.001],
            "energy": 1.0,
            "interval": [0.2, 0.8],
            "spectrum_n_max": None,
        },
        "validate": {"suite": "all", "seed": 42, "oracle_points": None},
        "output": {"directory": ".", "format": "csv"},
    }


def _reject_unknown(block: dict, allowed: set[str], context: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} keys: {sorted(unknown)}")


def _merge_block(base: dict, update: dict, context: str) -> dict:
    _reject_unknown(update, set(base), context)
    out = dict(base)
    out.update(update)
    return out


def load_config(path: str | None) -> dict:
    """Resolved config: defaults overlaid with the file contents.  A
    manifest file (recognized by its command/config keys) is unwrapped to
    its embedded computational config."""
    cfg = _default_config()
    if path is None:
        return cfg
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path} is not valid JSON: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    if {"command", "config", "tool_version"} <= set(raw):
        raw = raw["config"]
        if not isinstance(raw, dict):
            raise ConfigError("manifest config block must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "top-level")
    for key, val in raw.items():
        if not isinstance(val, dict):
            raise ConfigError(f"config block {key!r} must be a JSON object")
        if key == "potential":
            # schema depends on the potential kind; the catalog constructor
            # rejects unknown fields itself
            cfg[key] = dict(val)
        else:
            cfg[key] = _merge_block(cfg[key], val, key)
    return cfg


def _apply_flags(cfg: dict, args: argparse.Namespace) -> None:
    if args.alpha is not None:
        cfg["params"]["alpha"] = args.alpha
    if args.rule is not None:
        cfg["spectrum"]["rule"] = args.rule
        cfg["wavefunction"]["rule"] = args.rule
    if args.seed is not None:
        cfg["validate"]["seed"] = args.seed
    if args.suite is not None:
        cfg["validate"]["suite"] = args.suite
    if args.out is not None:
        cfg["output"]["directory"] = args.out
    if args.format is not None:
        cfg["output"]["format"] = args.format


def _build_inputs(cfg: dict):
    try:
        potential = potential_from_config(cfg["potential"])
        params = ScreeningParams(**cfg["params"])
    except (AlphaWkbError, TypeError) as err:
        raise ConfigError(f"invalid potential/params config: {err}") from err
    return potential, params


def _validate_choices(cfg: dict) -> None:
    if cfg["spectrum"]["rule"] not in ("half", "old", "both"):
        raise ConfigError(f"spectrum rule must be half|old|both, got {cfg['spectrum']['rule']!r}")
    if cfg["wavefunction"]["rule"] not in ("half", "old"):
        raise ConfigError(f"wavefunction rule must be half|old, got {cfg['wavefunction']['rule']!r}")
    if cfg["wavefunction"]["energy_source"] not in ("oracle", "wkb"):
        raise ConfigError("wavefunction energy_source must be oracle|wkb")
    if cfg["validate"]["suite"] not in _SUITES:
        raise ConfigError(f"validate suite must be one of {_SUITES}")
    if cfg["output"]["format"] not in ("csv", "json", "both"):
        raise ConfigError("output format must be csv|json|both")
    if not isinstance(cfg["validate"]["seed"], int):
        raise ConfigError("validate seed must be an integer")


# ---------------------------------------------------------------- emission

def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _manifest_core(command: str, cfg: dict) -> dict:
    computational = {k: v for k, v in cfg.items() if k != "output"}
    return {
        "command": command,
        "config": computational,
        "tool_version": __version__,
        "tolerances": TOLERANCES,
    }


def _digest(core: dict) -> str:
    return hashlib.sha256(_canonical(core).encode()).hexdigest()


def _fmt_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Path, command: str, core: dict, columns, rows) -> None:
    lines = [
        f"# tool: alphawkb {__version__}",
        f"# command: {command}",
        f"# manifest: sha256:{_digest(core)}",
        f"# config: {_canonical(core['config'])}",
        ",".join(columns),
    ]
    for row in rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _jsonable(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, (np.floating, np.integer)):
        return _jsonable(float(value))
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n")


def _emit(
    command: str,
    cfg: dict,
    columns,
    rows,
    extra_manifest: dict | None = None,
    stem: str | None = None,
) -> Path:
    """Write data (per output format) plus the run manifest; returns the
    output directory."""
    out_dir = Path(cfg["output"]["directory"])
    out_dir.mkdir(parents=True, exist_ok=True)
    core = _manifest_core(command, cfg)
    stem = stem or command.replace("-", "_")
    fmt = cfg["output"]["format"]
    outputs: dict[str, str] = {}
    if fmt in ("csv", "both"):
        csv_path = out_dir / f"{stem}.csv"
        _write_csv(csv_path, command, core, columns, rows)
        outputs[csv_path.name] = hashlib.sha256(csv_path.read_bytes()).hexdigest()
    if fmt in ("json", "both"):
        json_path = out_dir / f"{stem}.json"
        _write_json(
            json_path,
            {"columns": list(columns), "rows": [list(r) for r in rows], "manifest": core},
        )
        outputs[json_path.name] = hashlib.sha256(json_path.read_bytes()).hexdigest()
    manifest = dict(core)
    manifest["digest"] = _digest(core)
    manifest["outputs"] = outputs
    if extra_manifest:
        manifest.update(extra_manifest)
    _write_json(out_dir / f"{stem}_manifest.json", manifest)
    return out_dir


# ---------------------------------------------------------------- commands

def cmd_spectrum(cfg: dict) -> int:
    potential, params = _build_inputs(cfg)
    n_max = cfg["spectrum"]["n_max"]
    if not isinstance(n_max, int):
        raise ConfigError("spectrum n_max must be an integer")
    rule_sel = cfg["spectrum"]["rule"]
    n_start = 1 if potential.hard_wall_left else 0
    nan = float("nan")
    rows = []
    failures: list[dict] = []

    def _level(n: int, rule, enabled: bool) -> float:
        if not enabled:
            return nan
        try:
            return quantize(potential, n, params, rule)
        except NoBoundStateError as err:
            if rule is OLD_RULE and n == 0:
                return nan  # the old rule has no n=0 orbit; not a failure
            failures.append({"n": n, "rule": rule.description, "error": str(err)})
            return nan
        except (ConvergenceError, AlphaWkbError) as err:
            failures.append({"n": n, "rule": rule.description, "error": str(err)})
            return nan

    for n in range(n_start, n_max + 1):
        e_half = _level(n, HALF_RULE, rule_sel in ("half", "both"))
        e_old = _level(n, OLD_RULE, rule_sel in ("old", "both"))
        try:
            e_oracle = eigenvalue_solve(potential, n, params).energy
        except (AlphaWkbError, ConvergenceError) as err:
            failures.append({"n": n, "rule": "oracle", "error": str(err)})
            e_oracle = nan
        rel_half = abs(e_half - e_oracle) / abs(e_oracle)
        rel_old = abs(e_old - e_oracle) / abs(e_oracle)
        rows.append((n, e_half, e_old, e_oracle, rel_half, rel_old))

    columns = ("n", "E_wkb_half", "E_wkb_old", "E_oracle", "rel_err_half", "rel_err_old")
    _emit("spectrum", cfg, columns, rows, extra_manifest={"failures": failures})
    return 3 if failures else 0


def cmd_wavefunction(cfg: dict) -> int:
    potential, params = _build_inputs(cfg)
    block = cfg["wavefunction"]
    n = block["n"]
    if not isinstance(n, int):
        raise ConfigError("wavefunction n must be an integer")
    samples = block["samples"]
    if not isinstance(samples, int) or samples < 2:
        raise ConfigError("wavefunction samples must be an integer >= 2")

    report = eigenvalue_solve(potential, n, params)
    if block["energy_source"] == "oracle":
        energy = report.energy
    else:
        rule = HALF_RULE if block["rule"] == "half" else OLD_RULE
        energy = quantize(potential, n, params, rule)
    wf = assemble_bound_state(potential, energy, params)

    span = block["span"]
    if span is None:
        lo = max(wf.x_min, report.grid.x_min)
        hi = min(wf.x_max, report.grid.x_max)
    else:
        try:
            lo, hi = float(span[0]), float(span[1])
        except (TypeError, ValueError, IndexError) as err:
            raise ConfigError("wavefunction span must be [lo, hi]") from err
        lo = max(lo, wf.x_min)
        hi = min(hi, wf.x_max)
    xs = np.linspace(lo, hi, samples)

    psi_w = sample_wavefunction(wf, xs)
    psi_o = np.interp(xs, report.grid.points(), report.psi)
    if float(np.dot(psi_w.real, psi_o)) < 0.0:
        psi_o = -psi_o

    lm = LocalMomentum.for_params(potential, energy, params)
    gap = energy - np.asarray(potential.value(xs), dtype=float)
    metric = np.full(xs.shape, float("nan"))
    allowed = gap > 0.0
    if np.any(allowed):
        metric[allowed] = validity_metric(lm, xs[allowed], params)

    rows = []
    for i, x in enumerate(xs):
        region = wf.region_at(float(x)).kind
        rows.append(
            (float(x), psi_w[i].real, psi_w[i].imag, float(psi_o[i]), region, float(metric[i]))
        )
    columns = ("x", "re_psi_wkb", "im_psi_wkb", "psi_oracle", "region", "validity_metric")
    _emit(
        "wavefunction",
        cfg,
        columns,
        rows,
        extra_manifest={"energy": energy, "oracle_energy": report.energy, "n": n},
    )
    return 0


def cmd_sweep_alpha(cfg: dict) -> int:
    potential, params = _build_inputs(cfg)
    block = cfg["sweep"]
    alphas = block["alphas"]
    if not isinstance(alphas, list) or not alphas:
        raise ConfigError("sweep alphas must be a nonempty list")
    alphas = sorted({float(a) for a in alphas}, reverse=True)
    try:
        interval = (float(block["interval"][0]), float(block["interval"][1]))
        energy = float(block["energy"])
    except (TypeError, ValueError, IndexError) as err:
        raise ConfigError("sweep needs interval [lo, hi] and scalar energy") from err

    scan = convergence_scan(potential, energy, params, interval, alphas)
    rows = [
        (a, d, int(c))
        for a, d, c in zip(scan.alphas, scan.deviations, scan.clamped)
    ]
    summary = {
        "fitted_slope": scan.fitted_slope,
        "intercept": scan.intercept,
        "interval": list(scan.interval),
        "energy": scan.energy,
        "n_unclamped": scan.n_unclamped,
        "reliable": scan.reliable,
        "slope_computed": not math.isnan(scan.fitted_slope),
    }

    extra: dict = {"summary": summary}
    sp_max = block["spectrum_n_max"]
    if sp_max is not None:
        if not isinstance(sp_max, int) or sp_max < 0:
            raise ConfigError("sweep spectrum_n_max must be a nonnegative integer or null")
        sp_rows = []
        for a in scan.alphas:
            p_a = ScreeningParams(alpha=a, mass_total=params.mass_total, hbar=params.hbar)
            for n in range(0, sp_max + 1):
                sp_rows.append((a, n, quantize(potential, n, p_a, HALF_RULE)))
        _emit("sweep-alpha", cfg, ("alpha", "n", "E_wkb_half"), sp_rows, stem="sweep_alpha_spectra")

    out_dir = _emit(
        "sweep-alpha", cfg, ("alpha", "deviation", "clamped"), rows, extra_manifest=extra
    )
    _write_json(out_dir / "sweep_alpha_summary.json", {"summary": summary, "manifest": _manifest_core("sweep-alpha", cfg)})
    return 0


# ---------------------------------------------------------------- validate

def _check_airy_values() -> tuple[float, float]:
    dev = max(
        abs(airy_ai(0.0) - 0.3550280538878172),
        abs(airy_ai_deriv(0.0) + 0.2588194037928068),
    )
    return dev, 1e-12


def _check_airy_wronskian() -> tuple[float, float]:
    target = 1.0 / math.pi
    dev = max(abs(airy_wronskian(x) - target) for x in (-5.0, 0.0, 5.0))
    return dev, 1e-10


def _check_airy_ode(seed: int) -> tuple[float, float]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for x in rng.uniform(-6.0, 4.0, 12):
        second = richardson_derivative(airy_ai_deriv, float(x), 1e-3 * max(1.0, abs(x)))
        scale = max(abs(x * airy_ai(x)), 1e-3)
        worst = max(worst, abs(second.real - x * airy_ai(x)) / scale)
    return worst, 1e-8


def _check_screening_endpoints() -> tuple[float, float]:
    dev = max(abs(screening_size(1.0) - 1.0), abs(screening_size(0.0)))
    return dev, 0.0


def _check_screening_value() -> tuple[float, float]:
    return abs(screening_size(0.488) - 0.2), 1e-12


def _check_screening_monotone() -> tuple[float, float]:
    grid = np.linspace(0.0, 1.0, 10_000)
    sigma = np.array([screening_size(a) for a in grid])
    worst_step = float(np.min(np.diff(sigma)))
    return -min(worst_step, 0.0), 0.0


def _harmonic_case():
    from .potentials import HarmonicPotential

    return HarmonicPotential(), ScreeningParams(alpha=1.0)


def _check_oracle_convergence(points: int | None) -> tuple[float, float]:
    """Numerov global error must shrink ~16x when the step halves; the
    measured value is |ratio/16 - 1|."""
    potential, params = _harmonic_case()
    n_pts = points if points is not None else 201
    base = Grid(-6.0, 6.0, n_pts)
    exact = 0.5
    e1 = eigenvalue_solve(potential, 0, params, grid=base).energy
    e2 = eigenvalue_solve(potential, 0, params, grid=base.refined()).energy
    ratio = abs(e1 - exact) / abs(e2 - exact)
    return abs(ratio / 16.0 - 1.0), 0.30


def _check_oracle_level() -> tuple[float, float]:
    potential, _ = _harmonic_case()
    e = eigenvalue_solve(potential, 0, ScreeningParams(alpha=0.5)).energy
    return abs(e - 0.25) / 0.25, 1e-6


def _check_recursion(seed: int) -> tuple[float, float]:
    potential, params = _harmonic_case()
    lm = LocalMomentum.for_params(potential, 1.0, params)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for x in rng.uniform(-1.2, 1.2, 25):
        for order in (1, 2, 3):
            defect = abs(recursion_defect(lm, float(x), params, order))
            scale = recursion_scale(lm, float(x), params, order)
            worst = max(worst, defect / scale)
    return worst, 1e-5


def _check_amplitude_identity(seed: int) -> tuple[float, float]:
    potential, params = _harmonic_case()
    lm = LocalMomentum.for_params(potential, 1.0, params)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        a, b = np.sort(rng.uniform(-1.3, 1.3, 2))
        if b - a < 1e-3:
            continue
        scale = max(1.0, abs(math.log(lm.momentum(float(b)))))
        worst = max(worst, amplitude_identity_defect(lm, float(a), float(b)) / scale)
    return worst, 1e-10


def _check_quantize_harmonic() -> tuple[float, float]:
    potential, _ = _harmonic_case()
    worst = 0.0
    for alpha in (1.0, 0.1):
        params = ScreeningParams(alpha=alpha)
        for n in (0, 3, 10):
            e = quantize(potential, n, params, HALF_RULE)
            want = (n + 0.5) * alpha
            worst = max(worst, abs(e - want) / want)
    return worst, 1e-8


def _check_bouncer() -> tuple[float, float]:
    from .potentials import LinearWellPotential

    potential = LinearWellPotential()
    params = ScreeningParams(alpha=1.0, mass_total=0.5)
    e = quantize(potential, 1, params, HALF_RULE)
    return abs(e - 2.3381074104597668) / 2.3381074104597668, 0.01


def _check_limit_slope(symmetric: bool) -> tuple[float, float]:
    potential, params = _harmonic_case()
    alphas = np.logspace(-1, -3, 7)
    interval = (-0.6, 0.6) if symmetric else (0.2, 0.8)
    scan = convergence_scan(potential, 1.0, params, interval, alphas)
    if symmetric:
        return abs(scan.fitted_slope - 2.0), 0.1
    return abs(scan.fitted_slope - 1.0), 0.05


def _check_registry(cfg: dict):
    seed = cfg["validate"]["seed"]
    points = cfg["validate"]["oracle_points"]
    if points is not None and (not isinstance(points, int) or points < 16):
        raise ConfigError("validate oracle_points must be an integer >= 16 or null")
    return [
        ("airy_reference_values", "airy", _check_airy_values),
        ("airy_wronskian", "airy", _check_airy_wronskian),
        ("airy_ode_residual", "airy", lambda: _check_airy_ode(seed)),
        ("screening_endpoints", "screening", _check_screening_endpoints),
        ("screening_inverse_value", "screening", _check_screening_value),
        ("screening_monotone", "screening", _check_screening_monotone),
        ("oracle_grid_convergence", "oracle", lambda: _check_oracle_convergence(points)),
        ("oracle_harmonic_level", "oracle", _check_oracle_level),
        ("wkb_recursion_defect", "wkb", lambda: _check_recursion(seed)),
        ("wkb_amplitude_identity", "wkb", lambda: _check_amplitude_identity(seed)),
        ("quantize_harmonic_exact", "quantization", _check_quantize_harmonic),
        ("quantize_bouncer_error", "quantization", _check_bouncer),
        ("limit_slope_generic", "limit", lambda: _check_limit_slope(False)),
        ("limit_slope_symmetric", "limit", lambda: _check_limit_slope(True)),
    ]


def cmd_validate(cfg: dict) -> int:
    suite = cfg["validate"]["suite"]
    checks = []
    for name, tag, fn in _check_registry(cfg):
        if suite not in ("all", tag):
            continue
        try:
            measured, bound = fn()
            passed = bool(measured <= bound)
            note = ""
        except AlphaWkbError as err:
            measured, bound, passed = float("nan"), float("nan"), False
            note = f"{type(err).__name__}: {err}"
        checks.append(
            {"name": name, "suite": tag, "measured": measured, "bound": bound,
             "passed": passed, "note": note}
        )
    if not checks:
        raise ConfigError(f"suite {suite!r} selected no checks")
    all_passed = all(c["passed"] for c in checks)
    out_dir = Path(cfg["output"]["directory"])
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {
        "suite": suite,
        "seed": cfg["validate"]["seed"],
        "checks": checks,
        "all_passed": all_passed,
        "manifest": _manifest_core("validate", cfg),
    }
    _write_json(out_dir / "validate_report.json", report)
    for c in checks:
        status = "pass" if c["passed"] else "FAIL"
        print(f"[{status}] {c['name']}: measured={c['measured']:.3g} bound={c['bound']:.3g} {c['note']}")
    return 0 if all_passed else 4


# ---------------------------------------------------------------- entry

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alphawkb",
        description="Semiclassical (WKB) solver with a screened action scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("spectrum", "WKB and oracle bound-state energies"),
        ("wavefunction", "sampled WKB vs oracle wavefunction table"),
        ("sweep-alpha", "classical-limit deviation scan over alpha"),
        ("validate", "run the named self-check suites"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", default=None, help="JSON config or a prior run manifest")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--alpha", type=float, default=None, help="override params.alpha")
        p.add_argument("--rule", choices=("half", "old"), default=None, help="quantization rule override")
        p.add_argument("--format", choices=("csv", "json", "both"), default=None, help="data output format")
        p.add_argument("--seed", type=int, default=None, help="validation RNG seed")
        p.add_argument(
            "--suite", choices=_SUITES, default=None, help="validation check suite"
        )
    return parser


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "sweep-alpha": cmd_sweep_alpha,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        _apply_flags(cfg, args)
        _validate_choices(cfg)
        return _DISPATCH[args.command](cfg)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except (ConvergenceError, NoBoundStateError, StepTooCoarseError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3
    except AlphaWkbError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
