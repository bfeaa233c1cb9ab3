"""The three reference configurations of the comparison study.

One counter-propagating periodically poled KTP source and two
co-propagating bulk-crystal sources optimized for group-velocity
matching: KDP (signal locked to the pump, eta = 0) and BBO (pump
velocity midway between the daughters, eta = -1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .dispersion import CrystalConfig, Species
from .errors import AmbiguousMatch, UnknownPreset
from .phasematch import Geometry, InteractionGeometry, solve_phase_matching


@dataclass(frozen=True)
class PresetSpec:
    name: str
    crystal: CrystalConfig
    pump_wavelength_nm: float
    geometry: Geometry
    default_duration_ps: float
    default_gain: float
    description: str


_PRESETS = {
    "ppktp_counter": PresetSpec(
        name="ppktp_counter",
        crystal=CrystalConfig(Species.KTP, length_mm=10.0,
                              tuning_angle_deg=90.0, poling_period_nm=800.0),
        pump_wavelength_nm=821.4,
        geometry=Geometry.COUNTER_PROPAGATING,
        default_duration_ps=4.05,
        default_gain=1e-2,
        description="counter-propagating PPKTP, type 0 e-ee, 800 nm poling",
    ),
    "kdp_asymmetric": PresetSpec(
        name="kdp_asymmetric",
        crystal=CrystalConfig(Species.KDP, length_mm=10.0,
                              tuning_angle_deg=67.8),
        pump_wavelength_nm=415.0,
        geometry=Geometry.CO_PROPAGATING,
        default_duration_ps=0.1,
        default_gain=1e-2,
        description="co-propagating KDP, type II e-oe, asymmetric "
                    "group-velocity matching (tau_s = 0)",
    ),
    "bbo_symmetric": PresetSpec(
        name="bbo_symmetric",
        crystal=CrystalConfig(Species.BBO, length_mm=10.0,
                              tuning_angle_deg=28.8),
        pump_wavelength_nm=757.0,
        geometry=Geometry.CO_PROPAGATING,
        default_duration_ps=0.147,
        default_gain=1e-2,
        description="co-propagating BBO, type II e-oe, symmetric "
                    "group-velocity matching (eta = -1)",
    ),
}

PRESET_NAMES = tuple(_PRESETS)


def preset(name: str) -> PresetSpec:
    try:
        return _PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}"
        ) from None


@lru_cache(maxsize=None)
def preset_geometry(name: str) -> InteractionGeometry:
    """Solved phase matching for a named preset.

    If the closure has several roots, the one closest to degeneracy
    (lambda_s = 2 lambda_p) is selected; the bulk presets sit at the
    degenerate point by design.
    """
    spec = preset(name)
    try:
        return solve_phase_matching(spec.crystal, spec.pump_wavelength_nm,
                                    spec.geometry)
    except AmbiguousMatch as exc:
        target = 2.0 * spec.pump_wavelength_nm
        return min(exc.candidates,
                   key=lambda g: abs(g.signal.wavelength_nm - target))
