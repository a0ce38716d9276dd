#!/usr/bin/env python3
"""Regenerate figure analogues from nvsim CSV outputs.

Reads only the documented CSV schemas of the simulator's subcommands and
renders one figure per file:

    plot.py --kind levels     --in levels.csv  --out fig_levels.png
    plot.py --kind ndfwm      --in ndfwm.csv   --out fig_lineshape.png
    plot.py --kind saturation --in r1.csv [--in r2.csv ...] --out fig_sat.png
    plot.py --kind eit        --in eit.csv     --out fig_eit.png [--baseline-slope S]

The saturation renderer stacks multiple sweeps with vertical offsets (the
usual shifted-for-clarity presentation).  The optional EIT baseline slope is
presentation only: it mimics the frequency-dependent deflector efficiency
seen in the measured traces and never appears in simulator outputs.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "SchemaMismatch", "load_csv", "build_figure", "render", "main"]

KIND_SCHEMAS = {
    "levels": ["B_gauss", "E0_MHz", "E1_MHz", "E2_MHz", "mixing_fraction"],
    "eit": ["delta_MHz", "absorption_norm", "transparency_frac", "transmission"],
    "ndfwm": ["delta_MHz", "efficiency"],
    "saturation": ["intensity_Wcm2", "amplitude"],
}

FIGSIZE = (7.0, 4.5)
DPI = 120


class SchemaMismatch(Exception):
    """CSV header does not match the declared schema for the figure kind."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: tuple[str, ...]
    figure_kind: str
    output_image: str
    baseline_slope: float = 0.0

    def __post_init__(self):
        if self.figure_kind not in KIND_SCHEMAS:
            raise ValueError(f"unknown figure kind {self.figure_kind!r}")
        if isinstance(self.input_csv, str):
            object.__setattr__(self, "input_csv", (self.input_csv,))
        if not self.input_csv:
            raise ValueError("at least one input CSV required")
        if self.figure_kind != "saturation" and len(self.input_csv) != 1:
            raise ValueError(f"{self.figure_kind} takes exactly one input CSV")


def load_csv(path: str, kind: str):
    """Parse one nvsim CSV: returns (metadata dict, column dict)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    meta = {}
    body = []
    for line in lines:
        if line.startswith("#"):
            if "=" in line:
                key, _, value = line.lstrip("# ").partition("=")
                meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    schema = KIND_SCHEMAS[kind]
    if not body:
        raise SchemaMismatch(f"{path}: empty CSV, expected header {schema}")
    header = body[0].split(",")
    if header != schema:
        raise SchemaMismatch(f"{path}: header {header} != expected {schema}")
    rows = [line.split(",") for line in body[1:]]
    if not rows:
        raise SchemaMismatch(f"{path}: no data rows")
    try:
        data = np.array([[float(cell) for cell in row] for row in rows])
    except ValueError as exc:
        raise SchemaMismatch(f"{path}: non-numeric cell ({exc})") from exc
    if data.shape[1] != len(schema):
        raise SchemaMismatch(f"{path}: ragged rows")
    columns = {name: data[:, i] for i, name in enumerate(schema)}
    return meta, columns


def _new_axes():
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    return fig, ax


def _levels_figure(spec: FigureSpec):
    _, cols = load_csv(spec.input_csv[0], "levels")
    fig, ax = _new_axes()
    b = cols["B_gauss"]
    for name, label in (("E0_MHz", "lowest"), ("E1_MHz", "middle"), ("E2_MHz", "upper")):
        ax.plot(b, cols[name], label=label)
    ax.set_xlabel("magnetic field (G)")
    ax.set_ylabel("energy (MHz)")
    ax.set_title("Ground-state spin sublevels")
    ax.legend()
    return fig


def _eit_figure(spec: FigureSpec):
    _, cols = load_csv(spec.input_csv[0], "eit")
    fig, ax = _new_axes()
    x = cols["delta_MHz"]
    y = cols["transparency_frac"] + spec.baseline_slope * x
    ax.plot(x, y, label="transparency")
    ax.set_xlabel("Raman detuning (MHz)")
    ax.set_ylabel("transparency (fraction of background)")
    ax.set_title("Induced transparency")
    ax.legend()
    return fig


def _ndfwm_figure(spec: FigureSpec):
    meta, cols = load_csv(spec.input_csv[0], "ndfwm")
    fig, ax = _new_axes()
    ax.plot(cols["delta_MHz"], cols["efficiency"], label="diffraction efficiency")
    ax.set_xlabel("Raman detuning (MHz)")
    ax.set_ylabel("efficiency")
    title = "Four-wave-mixing lineshape"
    if "ndfwm.pm_factor" in meta:
        title += f" (phase matching {float(meta['ndfwm.pm_factor']):.4f})"
    ax.set_title(title)
    ax.legend()
    return fig


def _saturation_figure(spec: FigureSpec):
    fig, ax = _new_axes()
    offset = 0.0
    for idx, path in enumerate(spec.input_csv):
        meta, cols = load_csv(path, "saturation")
        x = cols["intensity_Wcm2"]
        y = cols["amplitude"]
        label = meta.get("saturation.beam", f"sweep {idx + 1}")
        if "saturation.i_sat" in meta:
            label += f" (i_sat {float(meta['saturation.i_sat']):.1f} W/cm$^2$)"
        ax.plot(x, y + offset, "o-", label=label)
        # successive sweeps shifted vertically for clarity
        offset += 1.2 * float(np.max(y))
    ax.set_xscale("log")
    ax.set_xlabel("intensity (W/cm$^2$)")
    ax.set_ylabel("signal amplitude (offset per sweep)")
    ax.set_title("Saturation sweeps")
    ax.legend()
    return fig


_BUILDERS = {
    "levels": _levels_figure,
    "eit": _eit_figure,
    "ndfwm": _ndfwm_figure,
    "saturation": _saturation_figure,
}


def build_figure(spec: FigureSpec):
    """Matplotlib figure for the spec; the caller owns closing it."""
    return _BUILDERS[spec.figure_kind](spec)


def render(spec: FigureSpec) -> str:
    """Render the figure to spec.output_image; returns the path written."""
    fig = build_figure(spec)
    try:
        fig.savefig(spec.output_image)
    finally:
        plt.close(fig)
    return spec.output_image


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot.py", description="Render figures from nvsim CSV outputs."
    )
    parser.add_argument("--kind", required=True, choices=sorted(KIND_SCHEMAS))
    parser.add_argument("--in", dest="inputs", required=True, action="append",
                        help="input CSV (repeatable for saturation)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--baseline-slope", type=float, default=0.0,
                        help="presentation-only linear baseline for eit figures")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(
            input_csv=tuple(args.inputs),
            figure_kind=args.kind,
            output_image=args.out,
            baseline_slope=args.baseline_slope,
        )
        render(spec)
    except (SchemaMismatch, OSError, ValueError) as exc:
        print(f"error: {exc}")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
