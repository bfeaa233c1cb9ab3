"""Refractive indices, wavenumbers and group velocities for KTP, KDP and BBO.

All material facts live here: Sellmeier coefficient sets (with their
sources and validity windows), angle tuning of the extraordinary index,
and the analytic group-velocity derivatives.  Everything downstream
consumes only ``refractive_index`` / ``wavenumber`` /
``inverse_group_velocity`` plus the vectorized ``k_at`` helper.

Units, fixed library-wide: wavelengths in nm (vacuum), crystal length in
mm, poling period in nm, time in ps, angular frequency in rad/ps,
wavenumber in rad/um, inverse group velocity in ps/mm.  Conversions
happen here at the boundary and nowhere else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import OutOfValidityWindow

# Speed of light in the library's unit system.
C_NM_PS = 299792.458   # nm / ps
C_UM_PS = 299.792458   # um / ps
C_MM_PS = 0.299792458  # mm / ps


class Species(Enum):
    KTP = "KTP"
    KDP = "KDP"
    BBO = "BBO"


class Polarization(Enum):
    ORDINARY = "o"
    EXTRAORDINARY = "e"


class Role(Enum):
    PUMP = "pump"
    SIGNAL = "signal"
    IDLER = "idler"


@dataclass(frozen=True)
class WaveSpec:
    """One interacting wave: vacuum wavelength, polarization and role."""

    wavelength_nm: float
    polarization: Polarization
    role: Role


@dataclass(frozen=True)
class CrystalConfig:
    """Crystal species plus the tuning facts that fix its dispersion.

    ``tuning_angle_deg`` is the angle between pump propagation and the
    optic axis (bulk co-propagating crystals); periodically poled
    crystals run at 90 deg with all waves on the z axis.
    ``poling_period_nm`` is present only for periodically poled
    structures.  ``temperature_k`` is a record of the Sellmeier fit's
    reference temperature; no thermo-optic correction is applied.
    """

    species: Species
    length_mm: float
    tuning_angle_deg: float = 90.0
    poling_period_nm: Optional[float] = None
    qpm_order: int = 1
    temperature_k: float = 293.15

    def __post_init__(self):
        if self.length_mm <= 0:
            raise ValueError("crystal length must be positive")
        if self.poling_period_nm is not None and self.poling_period_nm <= 0:
            raise ValueError("poling period must be positive")
        if self.qpm_order % 2 == 0:
            raise ValueError("QPM order must be odd")
        if not 0.0 <= self.tuning_angle_deg <= 90.0:
            raise ValueError("tuning angle must lie in [0, 90] degrees")

    @property
    def grating_wavenumber(self) -> float:
        """k_G = 2*pi*m/Lambda in rad/um; zero for unpoled crystals."""
        if self.poling_period_nm is None:
            return 0.0
        return 2.0 * np.pi * self.qpm_order / (self.poling_period_nm * 1e-3)


# --------------------------------------------------------------------------
# Sellmeier fits.  Each term is (kind, a, b): "pole" -> a/(L2-b),
# "irpole" -> a*L2/(L2-b), "power" -> a*L2**(b/2), with L2 = lambda_um**2.


@dataclass(frozen=True)
class IndexModel:
    label: str
    terms: tuple
    window_um: tuple
    source: str = ""

    def n_squared(self, lam_um):
        l2 = np.asarray(lam_um, dtype=float) ** 2
        total = np.zeros_like(l2)
        for kind, a, b in self.terms:
            if kind == "const":
                total = total + a
            elif kind == "pole":
                total = total + a / (l2 - b)
            elif kind == "irpole":
                total = total + a * l2 / (l2 - b)
            elif kind == "power":
                total = total + a * l2 ** (b / 2)
            else:
                raise ValueError(f"unknown term kind {kind!r}")
        return total

    def dn2_dlam(self, lam_um):
        """d(n^2)/d(lambda) in 1/um."""
        lam = np.asarray(lam_um, dtype=float)
        l2 = lam ** 2
        total = np.zeros_like(l2)
        for kind, a, b in self.terms:
            if kind == "const":
                continue
            if kind == "pole":
                total = total - 2.0 * a * lam / (l2 - b) ** 2
            elif kind == "irpole":
                total = total - 2.0 * a * b * lam / (l2 - b) ** 2
            elif kind == "power":
                total = total + a * b * lam ** (b - 1.0)
        return total

    def n(self, lam_um):
        return np.sqrt(self.n_squared(lam_um))

    def dn_dlam(self, lam_um):
        return self.dn2_dlam(lam_um) / (2.0 * self.n(lam_um))

    def group_index(self, lam_um):
        """n_g = n - lambda dn/dlambda."""
        return self.n(lam_um) - np.asarray(lam_um) * self.dn_dlam(lam_um)


# KTP, z axis (all waves of the type-0 e-ee interaction are z polarized).
# Kato & Takaoka, Appl. Opt. 41, 5040 (2002); 20 C.
KTP_Z = IndexModel(
    label="KTP n_z",
    terms=(
        ("const", 4.59423, 0.0),
        ("pole", 0.06206, 0.04763),
        ("pole", 110.80672, 86.12171),
    ),
    window_um=(0.43, 3.54),
    source="Kato-Takaoka 2002",
)

# KTP, y axis; carried for completeness (ordinary wave of z-cut KTP).
KTP_Y = IndexModel(
    label="KTP n_y",
    terms=(
        ("const", 3.45018, 0.0),
        ("pole", 0.04341, 0.04597),
        ("pole", 16.98825, 39.43799),
    ),
    window_um=(0.43, 3.54),
    source="Kato-Takaoka 2002",
)

# KDP at 24.8 C.  Zernike, J. Opt. Soc. Am. 54, 1215 (1964).
KDP_O = IndexModel(
    label="KDP n_o",
    terms=(
        ("const", 2.259276, 0.0),
        ("pole", 0.01008956, 0.012942625),
        ("irpole", 13.00522, 400.0),
    ),
    window_um=(0.21, 1.53),
    source="Zernike 1964",
)

KDP_E = IndexModel(
    label="KDP n_e",
    terms=(
        ("const", 2.132668, 0.0),
        ("pole", 0.008637494, 0.012281043),
        ("irpole", 3.2279924, 400.0),
    ),
    window_um=(0.21, 1.53),
    source="Zernike 1964",
)

# BBO.  Kato, IEEE J. Quantum Electron. 22, 1013 (1986), the set
# recommended by the standard BBO data reviews.  The fit region ends
# near 1.06 um; the window below extends over the crystal's
# transparency range, where this fit is the customary extrapolation.
BBO_O = IndexModel(
    label="BBO n_o",
    terms=(
        ("const", 2.7359, 0.0),
        ("pole", 0.01878, 0.01822),
        ("power", -0.01354, 2.0),
    ),
    window_um=(0.205, 3.70),
    source="Kato 1986",
)

BBO_E = IndexModel(
    label="BBO n_e",
    terms=(
        ("const", 2.3753, 0.0),
        ("pole", 0.01224, 0.01667),
        ("power", -0.01516, 2.0),
    ),
    window_um=(0.205, 3.70),
    source="Kato 1986",
)

_MODELS = {
    (Species.KTP, Polarization.ORDINARY): KTP_Y,
    (Species.KTP, Polarization.EXTRAORDINARY): KTP_Z,
    (Species.KDP, Polarization.ORDINARY): KDP_O,
    (Species.KDP, Polarization.EXTRAORDINARY): KDP_E,
    (Species.BBO, Polarization.ORDINARY): BBO_O,
    (Species.BBO, Polarization.EXTRAORDINARY): BBO_E,
}


def index_model(species: Species, polarization: Polarization) -> IndexModel:
    return _MODELS[(species, polarization)]


def _check_window(model: IndexModel, lam_nm) -> None:
    lam_um = np.asarray(lam_nm, dtype=float) * 1e-3
    lo, hi = model.window_um
    if np.any(lam_um < lo) or np.any(lam_um > hi):
        bad = np.asarray(lam_nm, dtype=float)
        offender = float(bad.min() if np.any(lam_um < lo) else bad.max())
        raise OutOfValidityWindow(offender, (lo * 1e3, hi * 1e3), model.label)


def _angle_tuned(crystal: CrystalConfig, lam_um, derivative: bool = False):
    """Effective extraordinary index at the crystal's tuning angle.

    1/n(theta)^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2, which hits
    the principal values at 0 and 90 deg.  ``derivative`` additionally
    returns dn/dlambda (per um) by the chain rule.
    """
    mo = index_model(crystal.species, Polarization.ORDINARY)
    me = index_model(crystal.species, Polarization.EXTRAORDINARY)
    th = np.deg2rad(crystal.tuning_angle_deg)
    c2, s2 = np.cos(th) ** 2, np.sin(th) ** 2
    no2 = mo.n_squared(lam_um)
    ne2 = me.n_squared(lam_um)
    inv = c2 / no2 + s2 / ne2
    n = inv ** -0.5
    if not derivative:
        return n
    # d(1/n^2)/dlam = -c2*dn_o2/no2^2 - s2*dn_e2/ne2^2 ; dn/dlam = -n^3/2 * d(1/n^2)/dlam
    dinv = -c2 * mo.dn2_dlam(lam_um) / no2 ** 2 - s2 * me.dn2_dlam(lam_um) / ne2 ** 2
    dn = -0.5 * n ** 3 * dinv
    return n, dn


def index_at(crystal: CrystalConfig, polarization: Polarization, lam_nm,
             derivative: bool = False):
    """Vectorized refractive index (and optional dn/dlambda per um).

    Extraordinary waves get the angle-tuned effective index at the
    crystal's tuning angle; ordinary waves the principal value.
    """
    model = index_model(crystal.species, polarization)
    _check_window(model, lam_nm)
    lam_um = np.asarray(lam_nm, dtype=float) * 1e-3
    if polarization is Polarization.EXTRAORDINARY:
        return _angle_tuned(crystal, lam_um, derivative=derivative)
    if derivative:
        return model.n(lam_um), model.dn_dlam(lam_um)
    return model.n(lam_um)


def refractive_index(crystal: CrystalConfig, wave: WaveSpec) -> float:
    """Refractive index seen by ``wave`` inside ``crystal``."""
    return float(index_at(crystal, wave.polarization, wave.wavelength_nm))


def k_at(crystal: CrystalConfig, polarization: Polarization, lam_nm):
    """Wavenumber k = 2*pi*n/lambda in rad/um, vectorized over lambda."""
    n = index_at(crystal, polarization, lam_nm)
    lam_um = np.asarray(lam_nm, dtype=float) * 1e-3
    return 2.0 * np.pi * n / lam_um


def wavenumber(crystal: CrystalConfig, wave: WaveSpec) -> float:
    """Wavenumber at the wave's central frequency, rad/um."""
    return float(k_at(crystal, wave.polarization, wave.wavelength_nm))


def group_index_at(crystal: CrystalConfig, polarization: Polarization, lam_nm):
    """Group index n_g = n - lambda dn/dlambda, vectorized."""
    n, dn = index_at(crystal, polarization, lam_nm, derivative=True)
    lam_um = np.asarray(lam_nm, dtype=float) * 1e-3
    return n - lam_um * dn


def inverse_group_velocity(crystal: CrystalConfig, wave: WaveSpec) -> float:
    """k' = dk/dOmega at the wave's central frequency, in ps/mm.

    Computed analytically from the Sellmeier derivative; see
    ``inverse_group_velocity_fd`` for the finite-difference cross-check.
    """
    ng = group_index_at(crystal, wave.polarization, wave.wavelength_nm)
    return float(ng / C_MM_PS)


# Relative step for the centered finite-difference validation stencil.
FD_RELATIVE_STEP = 1e-4


def inverse_group_velocity_fd(crystal: CrystalConfig, wave: WaveSpec) -> float:
    """Centered finite-difference k'(Omega), ps/mm; validation path only."""
    omega = 2.0 * np.pi * C_NM_PS / wave.wavelength_nm  # rad/ps
    h = FD_RELATIVE_STEP * omega
    lam_plus = 2.0 * np.pi * C_NM_PS / (omega + h)
    lam_minus = 2.0 * np.pi * C_NM_PS / (omega - h)
    k_plus = k_at(crystal, wave.polarization, lam_plus)
    k_minus = k_at(crystal, wave.polarization, lam_minus)
    # k in rad/um -> rad/mm
    return float((k_plus - k_minus) * 1e3 / (2.0 * h))
