"""Lineshape widths and saturation-curve fits.

The width extractor interpolates half-maximum crossings linearly between
samples, matching how the measured linewidths were read off the traces.  The
saturation fitter recovers the intensity scale at which the signal stops
growing linearly, using a nested optimization: the amplitude is linear in the
model and solved in closed form, the saturation intensity by deterministic
golden-section search.

The synthetic-data helper uses a SplitMix64 generator with fixed constants so
noisy test datasets are reproducible everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import (
    EnsembleSpec,
    IntensityCalibration,
    Lineshape,
    intensity_to_rabi,
)
from .lambda_solver import LambdaParams

__all__ = [
    "WidthResult",
    "SaturationFit",
    "NoPeak",
    "NoCrossing",
    "DegenerateData",
    "fwhm",
    "fit_saturation",
    "simulate_saturation_sweep",
    "SplitMix64",
    "synthetic_saturation_data",
]


class NoPeak(Exception):
    """Lineshape maximum sits at an endpoint; no interior peak."""


class NoCrossing(Exception):
    """Lineshape never falls to half maximum within the scan."""


class DegenerateData(Exception):
    """All amplitudes equal; saturation intensity unidentifiable."""


@dataclass(frozen=True)
class WidthResult:
    fwhm: float
    peak_x: float
    peak_y: float


@dataclass(frozen=True)
class SaturationFit:
    model: str
    a_max: float
    i_sat: float
    residual_rms: float


def fwhm(ls: Lineshape) -> WidthResult:
    """Full width at half maximum by linear interpolation around the peak.

    The peak value is the sample maximum (no peak interpolation); the
    half-maximum crossings are interpolated between the adjacent samples on
    each side.  Raises NoPeak if the maximum is at an endpoint, NoCrossing if
    either side never falls to half maximum.
    """
    x, y = ls.x, ls.y
    imax = int(np.argmax(y))
    if imax == 0 or imax == x.size - 1:
        raise NoPeak("lineshape maximum is at a scan endpoint")
    peak = y[imax]
    half = 0.5 * peak

    def cross(idx_range):
        prev = imax
        for j in idx_range:
            if y[j] <= half:
                # linear interpolation between j and the sample nearer the peak
                frac = (half - y[j]) / (y[prev] - y[j])
                return x[j] + frac * (x[prev] - x[j])
            prev = j
        raise NoCrossing("lineshape never falls to half maximum within the scan")

    left = cross(range(imax - 1, -1, -1))
    right = cross(range(imax + 1, x.size))
    return WidthResult(fwhm=float(right - left), peak_x=float(x[imax]),
                       peak_y=float(peak))


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _model_shape(model: str, intensities: np.ndarray, i_sat: float) -> np.ndarray:
    if model == "rational":
        return intensities / (intensities + i_sat)
    if model == "exponential":
        return 1.0 - np.exp(-intensities / i_sat)
    raise ValueError(f"unknown saturation model {model!r}")


def fit_saturation(
    points: list[tuple[float, float]], model: str = "rational"
) -> SaturationFit:
    """Fit amplitudes versus intensity to a saturation law.

    rational:     a(i) = a_max * i / (i + i_sat)
    exponential:  a(i) = a_max * (1 - exp(-i / i_sat))

    For each candidate i_sat the amplitude solves in closed form (linear
    least squares); i_sat is located by golden-section search on
    [min(i)/10, max(i)*10] to 1e-6 relative tolerance.  Deterministic; the
    bounded search always terminates.
    """
    if len(points) < 4:
        raise ValueError("need at least 4 points")
    intensities = np.array([float(i) for i, _ in points])
    amplitudes = np.array([float(a) for _, a in points])
    if np.any(intensities <= 0):
        raise ValueError("intensities must be positive")
    if np.unique(intensities).size != intensities.size:
        raise ValueError("intensities must be distinct")
    if np.ptp(amplitudes) <= 1e-12 * max(1.0, float(np.max(np.abs(amplitudes)))):
        raise DegenerateData("all amplitudes equal; i_sat unidentifiable")

    def sse(i_sat):
        shape = _model_shape(model, intensities, i_sat)
        a_max = float(np.dot(amplitudes, shape) / np.dot(shape, shape))
        r = amplitudes - a_max * shape
        return float(np.dot(r, r))

    lo = float(np.min(intensities)) / 10.0
    hi = float(np.max(intensities)) * 10.0
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = sse(c), sse(d)
    for _ in range(200):
        if (hi - lo) <= 1e-6 * 0.5 * (hi + lo):
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = sse(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = sse(d)
    i_sat = 0.5 * (lo + hi)
    shape = _model_shape(model, intensities, i_sat)
    a_max = float(np.dot(amplitudes, shape) / np.dot(shape, shape))
    resid = amplitudes - a_max * shape
    return SaturationFit(
        model=model,
        a_max=a_max,
        i_sat=float(i_sat),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
    )


def simulate_saturation_sweep(
    spec: EnsembleSpec,
    base: LambdaParams,
    cal: IntensityCalibration,
    sweep: str,
    intensities: list[float],
    geometry=None,
    plan=None,
    eta0: float = 1.0,
) -> list[tuple[float, float]]:
    """Signal amplitude versus intensity of one beam, others held fixed.

    Each intensity converts to a Rabi frequency; the four-wave-mixing
    efficiency is evaluated at scan center and the returned amplitude is its
    square root (field-amplitude convention).  R1 sweeps the coupling leg,
    R2 the probe leg.  P does not enter the grating solve, so a P sweep
    returns constant amplitudes: the probe's own saturation is outside this
    model.
    """
    from dataclasses import replace

    from .ndfwm import BeamGeometry, FrequencyPlan, grating_efficiency

    if sweep not in ("R1", "R2", "P"):
        raise ValueError("sweep must be one of 'R1', 'R2', 'P'")
    values = [float(i) for i in intensities]
    if any(i <= 0 for i in values):
        raise ValueError("intensities must be positive")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("intensities must be ascending")
    g = geometry if geometry is not None else BeamGeometry()
    f = plan if plan is not None else FrequencyPlan()

    out = []
    for intensity in values:
        rabi = intensity_to_rabi(cal, intensity)
        if sweep == "R1":
            point = replace(base, omega_c=rabi)
        elif sweep == "R2":
            point = replace(base, omega_p=rabi)
        else:
            point = base
        eff = grating_efficiency(spec, point, g, f, 0.0, eta0)
        out.append((intensity, math.sqrt(eff)))
    return out


class SplitMix64:
    """SplitMix64 pseudo-random generator (fixed public constants).

    state' = state + 0x9E3779B97F4A7C15 (mod 2^64)
    z = state'; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB; output z ^ (z >> 31)
    """

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self._state = seed & self._MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & self._MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def synthetic_saturation_data(
    a_max: float,
    i_sat: float,
    intensities: list[float],
    model: str = "rational",
    noise: float = 0.0,
    seed: int = 0,
) -> list[tuple[float, float]]:
    """Saturation samples with optional multiplicative uniform noise.

    noise = 0.01 perturbs each amplitude by a factor 1 + 0.01*(2u - 1) with
    u drawn from SplitMix64(seed); identical across platforms.
    """
    rng = SplitMix64(seed)
    out = []
    for intensity in intensities:
        a = a_max * float(_model_shape(model, np.array([intensity]), i_sat)[0])
        if noise:
            a *= 1.0 + noise * (2.0 * rng.uniform() - 1.0)
        out.append((float(intensity), a))
    return out
