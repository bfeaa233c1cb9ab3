"""Entanglement quantification: Schmidt number, purity, optimal pump.

The exact Schmidt number comes from the singular spectrum of the
discretized amplitude; kappa = (sum s^2)^2 / sum s^4, cross-checked
against N^2/B where N is the quadrature of |psi|^2 and B = sum s^4 w^2
is the normally-ordered photon-number fluctuation (identical to the
quadruple integral of the amplitude by Tr[(psi psi^dag)^2]; a literal
quadruple-sum oracle certifies that in the test suite).  The Gaussian
approximation gives the closed form used for design estimates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateVelocities, NoInteriorMinimum, NotConverged, \
    TruncatedGrid
from .grids import AmplitudeGrid, Domain
from .jsa import GAMMA_FWHM, GridSpec, JsaMode, PumpPulse, build_jsa
from .phasematch import InteractionGeometry
from .temporal import EPS_DELTA_TAU

# Truncation audit threshold on the outermost-ring mass fraction.
EDGE_MASS_TOL = 1e-4

# Mode-spectrum reporting cutoff; the full spectrum always enters kappa.
SPECTRUM_REPORT_CUTOFF = 1e-12

# Relative kappa drift allowed under N -> 2N grid refinement.
CONVERGENCE_TOL = 5e-3


@dataclass
class SchmidtReport:
    """Entanglement figures for one scenario.

    ``diagnostics`` carries the truncation audit value, the relative
    disagreement of the two kappa routes, and (when a refinement check
    ran) the kappa drift under grid doubling.
    """

    kappa_exact: float
    purity: float
    pair_number: float
    fluctuation_b: float
    mode_spectrum: np.ndarray
    kappa_gaussian: float = math.nan
    diagnostics: dict = field(default_factory=dict)

    CSV_FIELDS = ("kappa_exact", "kappa_gaussian", "purity", "pair_number",
                  "fluctuation_b", "n_modes_reported", "edge_mass",
                  "kappa_route_delta")

    def _row(self) -> dict:
        return {
            "kappa_exact": self.kappa_exact,
            "kappa_gaussian": self.kappa_gaussian,
            "purity": self.purity,
            "pair_number": self.pair_number,
            "fluctuation_b": self.fluctuation_b,
            "n_modes_reported": int(self.mode_spectrum.size),
            "edge_mass": self.diagnostics.get("edge_mass", math.nan),
            "kappa_route_delta": self.diagnostics.get("kappa_route_delta",
                                                      math.nan),
        }

    def to_csv_row(self) -> str:
        row = self._row()
        return ",".join(f"{row[k]:.17g}" if not isinstance(row[k], int)
                        else str(row[k]) for k in self.CSV_FIELDS)

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(cls.CSV_FIELDS)

    def to_record(self) -> str:
        payload = self._row()
        payload["mode_spectrum"] = [float(x) for x in self.mode_spectrum]
        return json.dumps(payload, indent=2, sort_keys=True)


def schmidt_exact(spectral: AmplitudeGrid, audit: bool = True) -> SchmidtReport:
    """Schmidt figures from the singular spectrum of the sampled amplitude.

    Raises TruncatedGrid when the edge-ring audit fails (unless
    ``audit`` is disabled for diagnostic runs).
    """
    spectral.require(Domain.SPECTRAL)
    edge = spectral.edge_ring_mass()
    if audit and edge > EDGE_MASS_TOL:
        raise TruncatedGrid(
            f"edge ring holds {edge:.2e} of the mass (tolerance {EDGE_MASS_TOL})")

    sigma = np.linalg.svd(spectral.values, compute_uv=False)
    s2 = sigma ** 2
    total = s2.sum()
    if total == 0.0:
        raise ValueError("amplitude grid is identically zero")
    lam = s2 / total
    kappa_svd = 1.0 / np.sum(lam ** 2)

    # Independent route: direct quadrature for N, weighted sigma^4 for B.
    pair_number = spectral.photon_number()
    fluct_b = float(np.sum(s2 ** 2) * spectral.weight ** 2)
    kappa_nb = pair_number ** 2 / fluct_b

    spectrum = lam[lam > SPECTRUM_REPORT_CUTOFF]
    return SchmidtReport(
        kappa_exact=float(kappa_svd),
        purity=1.0 / float(kappa_svd),
        pair_number=pair_number,
        fluctuation_b=fluct_b,
        mode_spectrum=spectrum,
        diagnostics={
            "edge_mass": edge,
            "kappa_route_delta": abs(kappa_svd - kappa_nb) / kappa_svd,
            "kappa_from_n2_over_b": float(kappa_nb),
        },
    )


def kappa_from_quadratic_form(c_ss: float, c_ii: float, c_si: float) -> float:
    """kappa of a Gaussian amplitude exp(-sum c_ij O_i O_j)."""
    det = c_ss * c_ii - c_si ** 2
    if det <= 0 or c_ss <= 0 or c_ii <= 0:
        raise ValueError("quadratic form must be positive definite")
    return math.sqrt(c_ss * c_ii / det)


def schmidt_gaussian(geom: InteractionGeometry, pump: PumpPulse,
                     gamma: float = GAMMA_FWHM) -> float:
    """Closed-form Gaussian Schmidt number, valid for any configuration.

    kappa_G = [1 + (1 + 2 gamma tau_s tau_i / T_p^2)^2 T_p^2 /
    (2 gamma (tau_i - tau_s)^2)]^(1/2).
    """
    if geom.delta_tau < EPS_DELTA_TAU:
        raise DegenerateVelocities(
            "tau_s -> tau_i: Gaussian Schmidt formula invalid")
    tp2 = pump.duration_ps ** 2
    mix = 1.0 + 2.0 * gamma * geom.tau_s * geom.tau_i / tp2
    return math.sqrt(1.0 + mix ** 2 * tp2 /
                     (2.0 * gamma * geom.delta_tau ** 2))


def kappa_gaussian_minimum(geom: InteractionGeometry) -> float:
    """Minimum of the Gaussian kappa over pump duration.

    1 when tau_s tau_i <= 0 (eta <= 0); (1 + eta)/(1 - eta) otherwise.
    """
    if geom.tau_s * geom.tau_i <= 0:
        return 1.0
    eta = geom.eta
    return (1.0 + eta) / (1.0 - eta)


def optimal_pump_duration_closed_form(geom: InteractionGeometry,
                                      gamma: float = GAMMA_FWHM) -> tuple:
    """(T_p_min, kappa_min) in the Gaussian model.

    T_p_min = sqrt(2 gamma |tau_s tau_i|), the geometric mean of the two
    time constants.  For tau_s = 0 the minimum is the T_p -> 0 limit:
    (0, 1) is returned.
    """
    tp_min = math.sqrt(2.0 * gamma * abs(geom.tau_s * geom.tau_i))
    if tp_min == 0.0:
        return 0.0, 1.0
    return tp_min, kappa_gaussian_minimum(geom)


def _golden_section_log(f, a: float, b: float, rel_tol: float):
    """Golden-section minimization on a log-spaced axis."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    la, lb = math.log(a), math.log(b)
    x1 = lb - phi * (lb - la)
    x2 = la + phi * (lb - la)
    f1, f2 = f(math.exp(x1)), f(math.exp(x2))
    while (lb - la) > rel_tol:
        if f1 < f2:
            lb, x2, f2 = x2, x1, f1
            x1 = lb - phi * (lb - la)
            f1 = f(math.exp(x1))
        else:
            la, x1, f1 = x1, x2, f2
            x2 = la + phi * (lb - la)
            f2 = f(math.exp(x2))
    x = math.exp(0.5 * (la + lb))
    return x, f(x)


def optimal_pump_duration(geom: InteractionGeometry,
                          gamma: float = GAMMA_FWHM,
                          method: str = "closed_form",
                          gain: float = 1e-2,
                          mode: JsaMode = JsaMode.EXACT_SINC_LINEARIZED,
                          grid_n: int = 1024,
                          window: Optional[tuple] = None,
                          prescan: int = 15,
                          rel_tol: float = 1e-3) -> tuple:
    """Pump duration minimizing the Schmidt number, (T_p_min, kappa_min).

    ``closed_form`` evaluates the Gaussian-model expressions.
    ``numeric_min`` brackets the minimum of the exact kappa on a
    log-spaced prescan and refines it by golden-section search; the
    prescan is kept deliberately small because every exact evaluation
    costs a fresh grid and SVD, and the search is densified around the
    detected minimum by construction.  Raises NoInteriorMinimum (with
    the monotone edge recorded on the exception) when no bracket exists.
    """
    if method == "closed_form":
        return optimal_pump_duration_closed_form(geom, gamma)
    if method != "numeric_min":
        raise ValueError(f"unknown method {method!r}")

    def kappa_of(tp: float) -> float:
        pump = PumpPulse(tp, gain)
        grid = build_jsa(geom, pump, GridSpec(grid_n, grid_n), mode=mode,
                         gamma=gamma)
        return schmidt_exact(grid, audit=False).kappa_exact

    if window is None:
        tp_guess = optimal_pump_duration_closed_form(geom, gamma)[0]
        if tp_guess == 0.0:
            tp_guess = abs(geom.tau_i)
        window = (tp_guess / 6.0, 6.0 * tp_guess)

    tps = np.geomspace(window[0], window[1], prescan)
    kappas = np.array([kappa_of(tp) for tp in tps])
    j = int(np.argmin(kappas))
    if j == 0 or j == prescan - 1:
        err = NoInteriorMinimum(
            f"kappa monotone over [{window[0]:.4g}, {window[1]:.4g}] ps; "
            f"edge value kappa = {kappas[j]:.5g} at T_p = {tps[j]:.4g} ps")
        err.edge_tp = float(tps[j])
        err.edge_kappa = float(kappas[j])
        raise err
    return _golden_section_log(kappa_of, tps[j - 1], tps[j + 1], rel_tol)


def refinement_check(geom: InteractionGeometry, pump: PumpPulse,
                     mode: JsaMode = JsaMode.EXACT_SINC_FULL,
                     gamma: float = GAMMA_FWHM,
                     grid_n: int = 1024) -> tuple:
    """kappa at N and 2N; raises NotConverged beyond the 0.5% tolerance."""
    k1 = schmidt_exact(build_jsa(geom, pump, GridSpec(grid_n, grid_n),
                                 mode=mode, gamma=gamma)).kappa_exact
    k2 = schmidt_exact(build_jsa(geom, pump, GridSpec(2 * grid_n, 2 * grid_n),
                                 mode=mode, gamma=gamma)).kappa_exact
    drift = abs(k1 - k2) / k2
    if drift > CONVERGENCE_TOL:
        raise NotConverged(
            f"kappa moved {drift:.2%} under N -> 2N refinement")
    return k1, k2


@dataclass(frozen=True)
class TimingEstimate:
    """Arrival-time spreads of the signal photon and the mode-count ratio.

    dt_uncond is the unconditional spread sqrt(T_p^2/2 + tau_s^2/3);
    dt_cond the spread conditioned on detecting the idler (delta_tau for
    long pumps, T_p (1 - eta) for ultrashort ones, the smaller of the
    two in between, flagged).  mode_estimate = dt_uncond / dt_cond.
    """

    dt_cond: float
    dt_uncond: float
    mode_estimate: float
    regime: str


def timing_heuristics(geom: InteractionGeometry, pump: PumpPulse) -> TimingEstimate:
    tp = pump.duration_ps
    dt_uncond = math.sqrt(tp ** 2 / 2.0 + geom.tau_s ** 2 / 3.0)
    short_form = tp * (1.0 - geom.eta)
    if tp >= abs(geom.tau_i):
        regime, dt_cond = "long", geom.delta_tau
    elif tp <= abs(geom.tau_s):
        regime, dt_cond = "ultrashort", short_form
    else:
        regime, dt_cond = "intermediate", min(geom.delta_tau, short_form)
    return TimingEstimate(dt_cond=dt_cond, dt_uncond=dt_uncond,
                          mode_estimate=dt_uncond / dt_cond, regime=regime)
