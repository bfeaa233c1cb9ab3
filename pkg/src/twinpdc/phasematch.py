"""Quasi-phase-matching solver and the resolved interaction geometry.

Solves the momentum closure of either geometry for the signal/idler
wavelengths (or, in design mode, for the poling period / tuning angle),
and packages the linearized propagation constants that parametrize the
rest of the library: the pump-relative delays tau_s and tau_i, their
ratio eta, the exit-delay spread delta_tau, and the wavepacket arrival
times t_As, t_Ai, t_Ap.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .dispersion import (
    C_NM_PS,
    CrystalConfig,
    Polarization,
    Role,
    Species,
    WaveSpec,
    index_model,
    inverse_group_velocity,
    k_at,
    wavenumber,
)
from .errors import AmbiguousMatch, NoPhaseMatch

# Closure tolerance demanded of a solved triple: |D(0,0) * l_c| below this.
CLOSURE_TOL = 1e-6

# Default search window for the signal wavelength, in units of lambda_p.
# The physical domain (lambda_s > lambda_p, both daughters inside the
# Sellmeier validity window) is intersected with it before scanning.
DEFAULT_WINDOW = (0.4, 10.0)


class Geometry(Enum):
    COUNTER_PROPAGATING = "counter"  # idler backward, GVS time scale
    CO_PROPAGATING = "co"            # all forward, GVM time scales

    @property
    def idler_sign(self) -> int:
        """Sign in front of k_i in the mismatch function."""
        return +1 if self is Geometry.COUNTER_PROPAGATING else -1


class MismatchMode(Enum):
    FULL_SELLMEIER = "full_sellmeier"
    LINEARIZED = "linearized"


# Polarization scheme (pump, signal, idler) used by each crystal's
# reference interaction: KTP type 0 e-ee, KDP / BBO type II e-oe.
DEFAULT_POLARIZATIONS = {
    Species.KTP: (Polarization.EXTRAORDINARY, Polarization.EXTRAORDINARY,
                  Polarization.EXTRAORDINARY),
    Species.KDP: (Polarization.EXTRAORDINARY, Polarization.ORDINARY,
                  Polarization.EXTRAORDINARY),
    Species.BBO: (Polarization.EXTRAORDINARY, Polarization.ORDINARY,
                  Polarization.EXTRAORDINARY),
}


@dataclass(frozen=True)
class InteractionGeometry:
    """A resolved phase-matched triple with its characteristic times.

    tau_s and tau_i are the pump-relative delays of the signal and idler
    wavepacket centers over half the crystal; tau_i carries the
    geometry's sign convention (group-velocity sum in the
    counter-propagating case, difference otherwise).  After the
    labeling convention |tau_s| <= |tau_i| is enforced, eta =
    tau_s/tau_i lies in [-1, 1].  All times in ps.
    """

    geometry: Geometry
    crystal: CrystalConfig
    pump: WaveSpec
    signal: WaveSpec
    idler: WaveSpec
    tau_s: float
    tau_i: float
    eta: float
    delta_tau: float
    t_as: float
    t_ai: float
    t_ap: float

    def __post_init__(self):
        if self.geometry is Geometry.COUNTER_PROPAGATING and self.tau_i <= 0:
            raise ValueError("counter-propagating tau_i must be positive")
        if not -1.0 - 1e-12 <= self.eta <= 1.0 + 1e-12:
            raise ValueError(f"eta = {self.eta} outside [-1, 1]")

    @property
    def omega_pump(self) -> float:
        return 2.0 * np.pi * C_NM_PS / self.pump.wavelength_nm

    @property
    def omega_signal(self) -> float:
        return 2.0 * np.pi * C_NM_PS / self.signal.wavelength_nm

    @property
    def omega_idler(self) -> float:
        return 2.0 * np.pi * C_NM_PS / self.idler.wavelength_nm


def _idler_wavelength(pump_nm: float, signal_nm: float) -> float:
    """Energy conservation 1/lambda_i = 1/lambda_p - 1/lambda_s."""
    inv = 1.0 / pump_nm - 1.0 / signal_nm
    if inv <= 0.0:
        raise ValueError("signal wavelength must exceed the pump wavelength")
    return 1.0 / inv


def closure(crystal: CrystalConfig, geometry: Geometry, pump_nm: float,
            signal_nm, polarizations=None):
    """Momentum-closure residual D(0,0) in rad/um, vectorized in lambda_s."""
    pol_p, pol_s, pol_i = polarizations or DEFAULT_POLARIZATIONS[crystal.species]
    signal_nm = np.asarray(signal_nm, dtype=float)
    idler_nm = 1.0 / (1.0 / pump_nm - 1.0 / signal_nm)
    k_p = k_at(crystal, pol_p, pump_nm)
    k_s = k_at(crystal, pol_s, signal_nm)
    k_i = k_at(crystal, pol_i, idler_nm)
    return k_p - k_s + geometry.idler_sign * k_i - crystal.grating_wavenumber


def build_geometry(crystal: CrystalConfig, geometry: Geometry, pump_nm: float,
                   signal_nm: float, polarizations=None) -> InteractionGeometry:
    """Assemble the InteractionGeometry for a known phase-matched signal.

    Applies the co-propagating labeling convention: if the solved triple
    has |tau_s| > |tau_i|, signal and idler are relabeled so that the
    slower-separating photon is the signal.
    """
    pol_p, pol_s, pol_i = polarizations or DEFAULT_POLARIZATIONS[crystal.species]
    idler_nm = _idler_wavelength(pump_nm, signal_nm)

    pump = WaveSpec(pump_nm, pol_p, Role.PUMP)
    signal = WaveSpec(signal_nm, pol_s, Role.SIGNAL)
    idler = WaveSpec(idler_nm, pol_i, Role.IDLER)

    lc = crystal.length_mm
    kp_p = inverse_group_velocity(crystal, pump)
    kp_s = inverse_group_velocity(crystal, signal)
    kp_i = inverse_group_velocity(crystal, idler)

    tau_s = lc / 2.0 * (kp_p - kp_s)
    tau_i = lc / 2.0 * (kp_p + geometry.idler_sign * kp_i)

    if geometry is Geometry.CO_PROPAGATING and abs(tau_s) > abs(tau_i):
        signal = WaveSpec(idler.wavelength_nm, idler.polarization, Role.SIGNAL)
        idler = WaveSpec(signal_nm, pol_s, Role.IDLER)
        kp_s, kp_i = kp_i, kp_s
        tau_s, tau_i = tau_i, tau_s

    return InteractionGeometry(
        geometry=geometry,
        crystal=crystal,
        pump=pump,
        signal=signal,
        idler=idler,
        tau_s=tau_s,
        tau_i=tau_i,
        eta=tau_s / tau_i,
        delta_tau=abs(tau_i - tau_s),
        t_as=lc / 2.0 * (kp_s + kp_p),
        t_ai=lc / 2.0 * (kp_i + kp_p),
        t_ap=lc * kp_p,
    )


def _scan_range(crystal: CrystalConfig, pump_nm: float, polarizations,
                window: tuple) -> tuple:
    """Physical signal-wavelength scan range: window x validity x energy."""
    pol_p, pol_s, pol_i = polarizations
    lo_s, hi_s = (w * 1e3 for w in index_model(crystal.species, pol_s).window_um)
    lo_i, hi_i = (w * 1e3 for w in index_model(crystal.species, pol_i).window_um)
    lo = max(window[0] * pump_nm, pump_nm * (1.0 + 1e-9), lo_s)
    hi = min(window[1] * pump_nm, hi_s)
    # idler inside validity: lambda_i <= hi_i bounds lambda_s from below
    if 1.0 / pump_nm > 1.0 / hi_i:
        lo = max(lo, 1.0 / (1.0 / pump_nm - 1.0 / hi_i) * (1.0 + 1e-12))
    return lo, hi


def solve_all_phase_matching(crystal: CrystalConfig, pump_wavelength_nm: float,
                             geometry: Geometry, polarizations=None,
                             window: tuple = DEFAULT_WINDOW,
                             n_scan: int = 1600) -> list:
    """All phase-matched signal wavelengths inside the search window.

    Scans the closure residual for sign changes and refines each bracket
    with Brent's method (bracketing bisection/secant hybrid) down to the
    closure tolerance.  Returns geometries ordered by signal wavelength.
    """
    pols = polarizations or DEFAULT_POLARIZATIONS[crystal.species]
    lo, hi = _scan_range(crystal, pump_wavelength_nm, pols, window)
    if not lo < hi:
        raise NoPhaseMatch(
            f"empty search window for lambda_p = {pump_wavelength_nm} nm")

    grid = np.geomspace(lo, hi, n_scan)
    vals = closure(crystal, geometry, pump_wavelength_nm, grid, pols)

    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0.0:
            roots.append(brentq(
                lambda ls: float(closure(crystal, geometry, pump_wavelength_nm,
                                         ls, pols)),
                a, b, xtol=1e-9, maxiter=200))
    if vals[-1] == 0.0:
        roots.append(grid[-1])

    geoms = []
    for ls in roots:
        residual = float(closure(crystal, geometry, pump_wavelength_nm, ls, pols))
        if abs(residual) * crystal.length_mm * 1e3 > CLOSURE_TOL:
            warnings.warn(f"root at {ls:.3f} nm refined only to "
                          f"|D l_c| = {abs(residual) * crystal.length_mm * 1e3:.2e}")
        geoms.append(build_geometry(crystal, geometry, pump_wavelength_nm, ls, pols))

    # the closure can be symmetric under signal/idler exchange; after the
    # labeling convention such mirror roots collapse to one geometry
    geoms.sort(key=lambda g: g.signal.wavelength_nm)
    unique = []
    for g in geoms:
        if unique and abs(g.signal.wavelength_nm
                          - unique[-1].signal.wavelength_nm) < 1e-5:
            continue
        unique.append(g)
    return unique


def solve_phase_matching(crystal: CrystalConfig, pump_wavelength_nm: float,
                         geometry: Geometry, polarizations=None,
                         window: tuple = DEFAULT_WINDOW) -> InteractionGeometry:
    """The phase-matched triple for this crystal/pump/geometry.

    Raises NoPhaseMatch when no closure root is bracketed in the search
    window, and AmbiguousMatch carrying every candidate when more than
    one root exists (the caller selects).
    """
    geoms = solve_all_phase_matching(crystal, pump_wavelength_nm, geometry,
                                     polarizations, window)
    if not geoms:
        raise NoPhaseMatch(
            f"no phase-matched signal for lambda_p = {pump_wavelength_nm} nm "
            f"({geometry.value})")
    if len(geoms) > 1:
        raise AmbiguousMatch(geoms)
    return geoms[0]


def solve_poling_period(crystal: CrystalConfig, pump_wavelength_nm: float,
                        signal_wavelength_nm: float, geometry: Geometry,
                        polarizations=None) -> InteractionGeometry:
    """Design mode: the poling period closing the QPM condition.

    Lambda follows directly from the closure residual of the unpoled
    triple; no iteration is needed.  Returns the geometry carrying the
    re-poled crystal.
    """
    unpoled = replace(crystal, poling_period_nm=None)
    residual = float(closure(unpoled, geometry, pump_wavelength_nm,
                             signal_wavelength_nm, polarizations))
    if residual <= 0.0:
        raise NoPhaseMatch(
            "closure residual k_p - k_s +/- k_i is not positive; no real "
            "poling period exists for this triple")
    period_nm = 2.0 * np.pi * crystal.qpm_order / residual * 1e3
    poled = replace(crystal, poling_period_nm=period_nm)
    return build_geometry(poled, geometry, pump_wavelength_nm,
                          signal_wavelength_nm, polarizations)


def solve_tuning_angle(crystal: CrystalConfig, pump_wavelength_nm: float,
                       signal_wavelength_nm: float,
                       geometry: Geometry = Geometry.CO_PROPAGATING,
                       polarizations=None, n_scan: int = 720) -> InteractionGeometry:
    """Design mode for bulk crystals: the tuning angle closing the match."""
    def residual(theta_deg: float) -> float:
        cfg = replace(crystal, tuning_angle_deg=theta_deg)
        return float(closure(cfg, geometry, pump_wavelength_nm,
                             signal_wavelength_nm, polarizations))

    thetas = np.linspace(0.02, 89.98, n_scan)
    vals = np.array([residual(t) for t in thetas])
    roots = []
    for a, b, fa, fb in zip(thetas[:-1], thetas[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0.0:
            roots.append(brentq(residual, a, b, xtol=1e-10, maxiter=200))
    if not roots:
        raise NoPhaseMatch(
            f"no tuning angle phase-matches lambda_s = {signal_wavelength_nm} nm")
    geoms = [build_geometry(replace(crystal, tuning_angle_deg=t), geometry,
                            pump_wavelength_nm, signal_wavelength_nm,
                            polarizations) for t in roots]
    if len(geoms) > 1:
        raise AmbiguousMatch(geoms)
    return geoms[0]


def phase_mismatch(geom: InteractionGeometry, omega_s, omega_i,
                   mode: MismatchMode = MismatchMode.LINEARIZED):
    """Dimensionless half-mismatch D(Omega_s, Omega_i) * l_c / 2.

    Offsets in rad/ps from the phase-matched centers; vectorized.  The
    linearized form is tau_i * Omega_i + tau_s * Omega_s; the full form
    evaluates exact wavenumbers at the shifted frequencies.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    if mode is MismatchMode.LINEARIZED:
        return geom.tau_i * omega_i + geom.tau_s * omega_s

    lam_p = 2.0 * np.pi * C_NM_PS / (geom.omega_pump + omega_s + omega_i)
    lam_s = 2.0 * np.pi * C_NM_PS / (geom.omega_signal + omega_s)
    lam_i = 2.0 * np.pi * C_NM_PS / (geom.omega_idler + omega_i)
    c = geom.crystal
    d = (k_at(c, geom.pump.polarization, lam_p)
         - k_at(c, geom.signal.polarization, lam_s)
         + geom.geometry.idler_sign * k_at(c, geom.idler.polarization, lam_i)
         - c.grating_wavenumber)
    return d * (c.length_mm * 1e3) / 2.0


def propagation_phase(geom: InteractionGeometry, omega_s, omega_i,
                      mode: MismatchMode = MismatchMode.LINEARIZED):
    """Propagation phase beta(Omega_s, Omega_i) in radians.

    The constant term is dropped in both modes (global convention: it
    never affects |psi|, the Schmidt spectrum, spectra or G1 moduli), so
    beta(0, 0) = 0.  Linearized mode returns t_As Omega_s + t_Ai Omega_i.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    if mode is MismatchMode.LINEARIZED:
        return geom.t_as * omega_s + geom.t_ai * omega_i

    c = geom.crystal
    half_um = c.length_mm * 1e3 / 2.0

    def total(ws, wi):
        lam_p = 2.0 * np.pi * C_NM_PS / (geom.omega_pump + ws + wi)
        lam_s = 2.0 * np.pi * C_NM_PS / (geom.omega_signal + ws)
        lam_i = 2.0 * np.pi * C_NM_PS / (geom.omega_idler + wi)
        return half_um * (k_at(c, geom.signal.polarization, lam_s)
                          + k_at(c, geom.idler.polarization, lam_i)
                          + k_at(c, geom.pump.polarization, lam_p))

    return total(omega_s, omega_i) - total(0.0, 0.0)
