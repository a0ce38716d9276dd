"""Command-line entry point: experiment orchestration and CSV persistence.

Subcommands map one-to-one onto the measured observables:

    levels      spin sublevel energies and mixing versus magnetic field
    eit         ensemble transparency lineshape versus Raman detuning
    ndfwm       four-wave-mixing diffraction efficiency lineshape
    saturation  signal amplitude versus one beam's intensity, with fit
    gates       qubit-rotation count per spin coherence time

Output is UTF-8 CSV with '#'-prefixed metadata (the full effective config,
echoed once per field) before the header row.  Numbers carry 9 significant
digits, locale-independent, so identical configs give byte-identical files
regardless of worker count.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import fitting, ndfwm, spin_levels
from .config import (
    ConfigError,
    RunConfig,
    RUN_KINDS,
    config_metadata,
    default_run_config,
    parse_config,
    scan_for_kind,
)
from .ensemble import (
    QuadratureUnderflow,
    averaged_absorption,
    transmission,
)
from .lambda_solver import TWO_PI, SingularSystem, StepTooLarge

__all__ = ["GateEstimate", "gate_estimate", "run_experiment", "main"]

_NUMERIC_ERRORS = (
    SingularSystem,
    StepTooLarge,
    QuadratureUnderflow,
    spin_levels.NoRoot,
    fitting.NoPeak,
    fitting.NoCrossing,
    fitting.DegenerateData,
    ValueError,
    ArithmeticError,
)


@dataclass(frozen=True)
class GateEstimate:
    """Single-qubit operations per coherence time: n_gates = rabi * t2."""

    rabi: float
    t2: float
    n_gates: float


def gate_estimate(rabi: float, t2: float) -> GateEstimate:
    """Rabi frequency (MHz) times coherence time (us), dimensionless."""
    return GateEstimate(rabi=rabi, t2=t2, n_gates=rabi * t2)


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def _pool_map(fn, items, workers: int) -> list:
    """Order-preserving map over scan points; results are index-ordered and
    identical for any worker count (each point is computed independently)."""
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _csv(meta: list[str], header: list[str], rows: list[list[float]],
         str_cols: tuple[int, ...] = ()) -> str:
    lines = list(meta)
    lines.append(",".join(header))
    for row in rows:
        cells = [
            cell if i in str_cols else _fmt(cell)
            for i, cell in enumerate(row)
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _run_levels(cfg: RunConfig) -> str:
    scan = scan_for_kind(cfg, "levels")
    fields_b = np.linspace(scan.start, scan.stop, scan.points)

    def point(b):
        p = replace(cfg.spin, field_B=float(b))
        levels = spin_levels.ground_levels(p)
        return [
            float(b),
            float(levels.energies[0]),
            float(levels.energies[1]),
            float(levels.energies[2]),
            spin_levels.mixing_fraction(p),
        ]

    rows = _pool_map(point, fields_b, cfg.workers)
    meta = config_metadata(cfg, scan)
    return _csv(meta, ["B_gauss", "E0_MHz", "E1_MHz", "E2_MHz", "mixing_fraction"], rows)


def _run_eit(cfg: RunConfig) -> str:
    scan = scan_for_kind(cfg, "eit")
    deltas = np.linspace(scan.start, scan.stop, scan.points)

    def point(delta):
        a = averaged_absorption(cfg.ensemble, cfg.lambda_, float(delta))
        return [float(delta), a, 1.0 - a, transmission(cfg.ensemble, max(a, 0.0))]

    rows = _pool_map(point, deltas, cfg.workers)
    meta = config_metadata(cfg, scan)
    return _csv(meta, ["delta_MHz", "absorption_norm", "transparency_frac", "transmission"], rows)


def _run_ndfwm(cfg: RunConfig) -> str:
    scan = scan_for_kind(cfg, "ndfwm")
    deltas = np.linspace(scan.start, scan.stop, scan.points)
    eta0 = ndfwm.calibrate_eta0(
        cfg.ensemble, cfg.geometry, cfg.freq_plan, cfg.calibration, base=cfg.lambda_
    )
    _, delta_k = ndfwm.diffracted_wavevector(cfg.geometry, cfg.freq_plan)
    pm = ndfwm.phase_match_factor(delta_k, cfg.geometry.sample_length)

    def point(delta):
        eff = ndfwm.grating_efficiency(
            cfg.ensemble, cfg.lambda_, cfg.geometry, cfg.freq_plan, float(delta), eta0
        )
        return [float(delta), eff]

    rows = _pool_map(point, deltas, cfg.workers)
    meta = config_metadata(cfg, scan)
    meta.append(f"# ndfwm.delta_k_rad_per_mm = {_fmt(delta_k)}")
    meta.append(f"# ndfwm.pm_factor = {_fmt(pm)}")
    meta.append(f"# ndfwm.eta0 = {_fmt(eta0)}")
    return _csv(meta, ["delta_MHz", "efficiency"], rows)


def _run_saturation(cfg: RunConfig, beam: str = "R1") -> str:
    scan = scan_for_kind(cfg, "saturation")
    intensities = np.geomspace(scan.start, scan.stop, scan.points)

    def point(intensity):
        pairs = fitting.simulate_saturation_sweep(
            cfg.ensemble, cfg.lambda_, cfg.calibration, beam, [float(intensity)],
            geometry=cfg.geometry, plan=cfg.freq_plan,
        )
        return [pairs[0][0], pairs[0][1]]

    rows = _pool_map(point, intensities, cfg.workers)
    fit = fitting.fit_saturation([(r[0], r[1]) for r in rows])
    meta = config_metadata(cfg, scan)
    meta.append(f"# saturation.beam = {beam}")
    meta.append(f"# saturation.model = {fit.model}")
    meta.append(f"# saturation.a_max = {_fmt(fit.a_max)}")
    meta.append(f"# saturation.i_sat = {_fmt(fit.i_sat)}")
    meta.append(f"# saturation.residual_rms = {_fmt(fit.residual_rms)}")
    return _csv(meta, ["intensity_Wcm2", "amplitude"], rows)


def _run_gates(cfg: RunConfig) -> str:
    scan = scan_for_kind(cfg, "gates")
    rabi = cfg.lambda_.omega_c
    t2 = math.inf if cfg.lambda_.gamma_s == 0 else 1.0 / (TWO_PI * cfg.lambda_.gamma_s)
    est = gate_estimate(rabi, t2)
    meta = config_metadata(cfg, scan)
    return _csv(meta, ["rabi_MHz", "t2_us", "n_gates"],
                [[est.rabi, est.t2, est.n_gates]])


def run_experiment(cfg: RunConfig, kind: str, beam: str = "R1") -> str:
    """CSV document for one experiment kind (see module docstring)."""
    if kind not in RUN_KINDS:
        raise ValueError(f"unknown run kind {kind!r}")
    if kind == "levels":
        return _run_levels(cfg)
    if kind == "eit":
        return _run_eit(cfg)
    if kind == "ndfwm":
        return _run_ndfwm(cfg)
    if kind == "saturation":
        return _run_saturation(cfg, beam)
    return _run_gates(cfg)


def _load_config(path: str | None) -> RunConfig:
    if path is None:
        return default_run_config()
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nvsim",
        description="Simulate Raman-excited spin coherence experiments in N-V diamond.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in RUN_KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        p.add_argument("--config", help="path to an INI-style config file")
        p.add_argument("--out", help="output CSV path (default: config output_path)")
        p.add_argument("--points", type=int, help="override scan point count")
        p.add_argument("--workers", type=int, help="override worker count")
        if kind == "saturation":
            p.add_argument("--beam", choices=("R1", "R2", "P"), default="R1",
                           help="which beam's intensity to sweep")
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
        if args.points is not None or args.workers is not None:
            scan = scan_for_kind(cfg, args.kind)
            if args.points is not None:
                scan = replace(scan, points=args.points)
            cfg = replace(
                cfg,
                scan=scan if args.points is not None else cfg.scan,
                workers=args.workers if args.workers is not None else cfg.workers,
            )
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2

    try:
        beam = getattr(args, "beam", "R1")
        csv_text = run_experiment(cfg, args.kind, beam=beam)
    except _NUMERIC_ERRORS as exc:
        print(f"error: numeric: {exc}", file=sys.stderr)
        return 3

    out_path = args.out if args.out is not None else cfg.output_path
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
