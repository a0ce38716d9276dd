"""Simulator of Raman-excited spin coherence experiments in N-V diamond."""

from .spin_levels import (
    SpinSystemParams,
    LevelSet,
    NoRoot,
    build_spin_hamiltonian,
    ground_levels,
    raman_splitting,
    field_for_splitting,
    mixing_fraction,
)
from .lambda_solver import (
    LambdaParams,
    SingularSystem,
    StepTooLarge,
    build_liouvillian,
    steady_state,
    time_evolve,
    probe_absorption,
    weak_probe_absorption,
)
from .ensemble import (
    EnsembleSpec,
    IntensityCalibration,
    Lineshape,
    QuadratureUnderflow,
    intensity_to_rabi,
    averaged_absorption,
    averaged_spin_coherence,
    eit_lineshape,
    transmission,
    single_center_transparency,
)
from .ndfwm import (
    BeamGeometry,
    FrequencyPlan,
    NdfwmResult,
    diffracted_wavevector,
    phase_match_factor,
    raman_center_frequency,
    calibrate_eta0,
    ndfwm_lineshape,
)
from .fitting import (
    WidthResult,
    SaturationFit,
    NoPeak,
    NoCrossing,
    DegenerateData,
    fwhm,
    fit_saturation,
    simulate_saturation_sweep,
)
from .config import (
    ScanSpec,
    RunConfig,
    ConfigError,
    ParseError,
    UnknownKey,
    InvariantViolation,
    default_run_config,
    parse_config,
)
from .cli import GateEstimate, gate_estimate, run_experiment

__version__ = "0.1.0"
