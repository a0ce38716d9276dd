"""Nondegenerate four-wave mixing: phase matching and diffraction lineshape.

Two Raman beams write a spin-coherence grating in the sample; a probe beam P
diffracts off it into the signal beam D, with wavevector conservation
K_D = K_R2 - K_R1 + K_P.  All three inputs derive from one laser through
acousto-optic downshifts (shift_r1, shift_r2, shift_p), so the Raman pair's
difference frequency is shift_r1 - shift_r2 (120 MHz at the defaults) and the
readout beam sits shift_p - shift_r1 from R1.

Beam roles: R2 (smaller downshift, higher optical frequency) drives the
|1>-|3> probe leg of the lambda system; R1 drives the |2>-|3> coupling leg.
P does not enter the grating solve; its intensity cancels out of the
diffraction efficiency, which is modeled as

    efficiency(delta) = eta0 * |<rho_12>(delta)|^2 * pm_factor

with <rho_12> the coherently averaged two-photon coherence of the resonant
orientation class and pm_factor the sinc^2 phase-matching factor.  The
absolute scale eta0 is a calibration constant pinned once to the observed
weak-probe peak efficiency, not a prediction.

P's frequency offset from the Raman pair is applied as a common-mode optical
offset of the grating solve (both one-photon detunings shift together,
leaving the two-photon axis centered); the flat inhomogeneous background
renders it nearly inert, as observed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import (
    EnsembleSpec,
    IntensityCalibration,
    Lineshape,
    averaged_spin_coherence,
    intensity_to_rabi,
)
from .lambda_solver import LambdaParams

__all__ = [
    "BeamGeometry",
    "FrequencyPlan",
    "NdfwmResult",
    "WEAK_PROBE_PEAK_EFFICIENCY",
    "FIG2_INTENSITY_R1",
    "FIG2_INTENSITY_R2",
    "diffracted_wavevector",
    "phase_match_factor",
    "raman_center_frequency",
    "probe_optical_offset",
    "grating_efficiency",
    "calibrate_eta0",
    "ndfwm_lineshape",
]

C_MM_PER_US = 2.99792458e5  # speed of light, mm/us (frequencies in MHz)

# calibration anchors: observed peak efficiency for a very weak probe, at the
# representative lineshape intensities (W/cm^2) of the R1/R2 beams
WEAK_PROBE_PEAK_EFFICIENCY = 0.005
FIG2_INTENSITY_R1 = 1.2
FIG2_INTENSITY_R2 = 1.6


@dataclass(frozen=True)
class BeamGeometry:
    """Beam layout: wavelength (nm), tilt angles (deg), sample length (mm).

    R1 defines the reference axis; R2 is tilted by theta_r1_r2 in the plane
    of the table, P by theta_p_oop out of plane.
    """

    wavelength: float = 637.0
    theta_r1_r2: float = 3.5
    theta_p_oop: float = 3.5
    sample_length: float = 1.0

    def __post_init__(self):
        if self.wavelength <= 0:
            raise ValueError("wavelength must be > 0")
        for name in ("theta_r1_r2", "theta_p_oop"):
            if not 0.0 <= getattr(self, name) < 90.0:
                raise ValueError(f"{name} must be in [0, 90)")
        if self.sample_length <= 0:
            raise ValueError("sample_length must be > 0")


@dataclass(frozen=True)
class FrequencyPlan:
    """Acousto-optic downshifts (MHz) of R1, R2 and P from the laser."""

    shift_r1: float = 400.0
    shift_r2: float = 280.0
    shift_p: float = 420.0

    def __post_init__(self):
        for name in ("shift_r1", "shift_r2", "shift_p"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class NdfwmResult:
    """Diffraction-efficiency lineshape and scalar summaries."""

    lineshape: Lineshape
    peak_efficiency: float
    fwhm: float
    delta_k: float
    pm_factor: float


def _laser_frequency(g: BeamGeometry) -> float:
    """Optical frequency in MHz from the wavelength in nm."""
    return C_MM_PER_US / (g.wavelength * 1e-6)


def diffracted_wavevector(
    g: BeamGeometry, f: FrequencyPlan
) -> tuple[np.ndarray, float]:
    """Signal wavevector K_D = K_R2 - K_R1 + K_P and the scalar mismatch.

    Each beam's wavevector has magnitude 2*pi*(nu_laser - shift)/c along its
    unit direction (R1 on the z axis, R2 tilted in xz, P tilted in yz).
    delta_k = |K_D| - 2*pi*nu_D/c with nu_D = nu_R2 - nu_R1 + nu_P, in
    rad/mm.
    """
    nu = _laser_frequency(g)
    th12 = math.radians(g.theta_r1_r2)
    thp = math.radians(g.theta_p_oop)

    def kvec(freq, direction):
        return (2.0 * math.pi * freq / C_MM_PER_US) * np.asarray(direction)

    k_r1 = kvec(nu - f.shift_r1, [0.0, 0.0, 1.0])
    k_r2 = kvec(nu - f.shift_r2, [math.sin(th12), 0.0, math.cos(th12)])
    k_p = kvec(nu - f.shift_p, [0.0, math.sin(thp), math.cos(thp)])
    k_d = k_r2 - k_r1 + k_p
    nu_d = (nu - f.shift_r2) - (nu - f.shift_r1) + (nu - f.shift_p)
    delta_k = float(np.linalg.norm(k_d) - 2.0 * math.pi * nu_d / C_MM_PER_US)
    return k_d, delta_k


def phase_match_factor(delta_k: float, length_mm: float) -> float:
    """sinc^2(delta_k * L / 2), 1 at perfect matching, first null at 2*pi/L."""
    if length_mm <= 0:
        raise ValueError("length_mm must be > 0")
    return float(np.sinc(delta_k * length_mm / (2.0 * math.pi)) ** 2)


def raman_center_frequency(f: FrequencyPlan) -> float:
    """R1-R2 difference frequency (MHz) at the center of the scan."""
    return f.shift_r1 - f.shift_r2


def probe_optical_offset(f: FrequencyPlan) -> float:
    """One-photon offset (MHz) of the readout beam P from the Raman pair."""
    return f.shift_p - f.shift_r1


def grating_efficiency(
    spec: EnsembleSpec,
    base: LambdaParams,
    g: BeamGeometry,
    f: FrequencyPlan,
    delta: float,
    eta0: float,
) -> float:
    """Diffraction efficiency eta0 * |<rho_12>|^2 * pm_factor at one detuning."""
    _, delta_k = diffracted_wavevector(g, f)
    pm = phase_match_factor(delta_k, g.sample_length)
    amp = averaged_spin_coherence(
        spec, base, delta, optical_offset=probe_optical_offset(f)
    )
    return eta0 * abs(amp) ** 2 * pm


def calibrate_eta0(
    spec: EnsembleSpec,
    g: BeamGeometry,
    f: FrequencyPlan,
    cal: IntensityCalibration,
    base: LambdaParams | None = None,
    intensity_r1: float = FIG2_INTENSITY_R1,
    intensity_r2: float = FIG2_INTENSITY_R2,
) -> float:
    """Scale factor making the weak-probe peak efficiency exactly 0.005.

    The calibration point is the representative lineshape configuration:
    Raman beams at the stated intensities, scan center.  ``base`` supplies
    the relaxation rates (defaults if omitted).
    """
    template = base if base is not None else LambdaParams()
    from dataclasses import replace

    point = replace(
        template,
        omega_p=intensity_to_rabi(cal, intensity_r2),
        omega_c=intensity_to_rabi(cal, intensity_r1),
    )
    raw = grating_efficiency(spec, point, g, f, 0.0, 1.0)
    if raw <= 0:
        raise ValueError("calibration point has zero grating efficiency")
    return WEAK_PROBE_PEAK_EFFICIENCY / raw


def ndfwm_lineshape(
    spec: EnsembleSpec,
    base: LambdaParams,
    g: BeamGeometry,
    f: FrequencyPlan,
    delta_range: tuple[float, float],
    n_points: int,
    eta0: float,
) -> NdfwmResult:
    """Diffraction-efficiency lineshape versus Raman detuning.

    Zero efficiency everywhere when either Raman beam is off (no grating
    without both legs).  The FWHM is extracted by interpolated half-maximum
    crossings and therefore requires the scan to straddle the peak.
    """
    if n_points < 11:
        raise ValueError("n_points must be >= 11")
    _, delta_k = diffracted_wavevector(g, f)
    pm = phase_match_factor(delta_k, g.sample_length)
    offset = probe_optical_offset(f)
    x = np.linspace(delta_range[0], delta_range[1], n_points)
    if base.omega_p == 0 or base.omega_c == 0:
        y = np.zeros_like(x)
        ls = Lineshape(axis="raman_detuning_MHz", x=x, y=y)
        return NdfwmResult(ls, 0.0, math.nan, delta_k, pm)
    y = np.array([
        eta0 * abs(averaged_spin_coherence(spec, base, d, optical_offset=offset)) ** 2 * pm
        for d in x
    ])
    ls = Lineshape(axis="raman_detuning_MHz", x=x, y=y)

    from .fitting import fwhm  # local import: fitting also drives this module

    width = fwhm(ls)
    return NdfwmResult(ls, float(y.max()), width.fwhm, delta_k, pm)
