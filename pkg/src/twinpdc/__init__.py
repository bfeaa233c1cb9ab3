"""Twin-photon states of parametric down-conversion, counter- and
co-propagating: joint spectral/temporal amplitudes, Schmidt-number
purity, heralded-photon statistics and pair-production efficiency."""

from .dispersion import (
    CrystalConfig,
    Polarization,
    Role,
    Species,
    WaveSpec,
    inverse_group_velocity,
    refractive_index,
    wavenumber,
)
from .errors import (
    AmbiguousMatch,
    ComputeError,
    ConfigError,
    DegenerateVelocities,
    GridTooNarrow,
    NoInteriorMinimum,
    NoPhaseMatch,
    NonPowerOfTwo,
    NotConverged,
    NotSpectral,
    NotTemporal,
    OutOfValidityWindow,
    RegimeNotApplicable,
    TruncatedGrid,
    TwinPdcError,
    UnknownPreset,
)
from .grids import AmplitudeGrid, Domain
from .heralded import (
    PairRegime,
    Which,
    effective_length_ratio,
    g1_coherence,
    intensity_profile,
    kernel_purity,
    pair_number,
    spectrum,
)
from .jsa import (
    GAMMA_FWHM,
    GAMMA_TAYLOR,
    GaussianJSAParams,
    GridSpec,
    JsaMode,
    PumpPulse,
    build_jsa,
    gaussian_params,
)
from .phasematch import (
    Geometry,
    InteractionGeometry,
    MismatchMode,
    phase_mismatch,
    propagation_phase,
    solve_phase_matching,
    solve_poling_period,
    solve_tuning_angle,
)
from .presets import PRESET_NAMES, preset, preset_geometry
from .schmidt import (
    SchmidtReport,
    TimingEstimate,
    optimal_pump_duration,
    schmidt_exact,
    schmidt_gaussian,
    timing_heuristics,
)
from .sweep import panel_study, sweep_pump_duration, sweep_signal_wavelength
from .temporal import (
    Regime,
    analytic_phi,
    analytic_phi_grid,
    asymptotic_phi,
    coincidence_marginal,
    joint_temporal_probability,
    to_temporal,
)

__version__ = "0.1.0"
