"""Parameter-sweep engine with deterministic CSV output.

Three studies: Schmidt number against pump duration (with exact kappa
at a cost-controlled subsample, densified around the detected minimum),
the Gaussian-model purity limits against signal wavelength (design-mode
phase matching per point), and joint-probability panels with their
Gaussian iso-probability conic coefficients.

Every requested point yields exactly one output row; failures are
recorded in the row's error column, never dropped.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .dispersion import CrystalConfig, Species
from .errors import TwinPdcError
from .grids import AmplitudeGrid, save_columns_csv
from .heralded import PairRegime, pair_number
from .jsa import GAMMA_FWHM, GridSpec, JsaMode, PumpPulse, build_jsa, \
    gaussian_params
from .phasematch import Geometry, InteractionGeometry, solve_poling_period, \
    solve_tuning_angle
from .schmidt import optimal_pump_duration_closed_form, schmidt_exact, \
    schmidt_gaussian
from .temporal import to_temporal

# Exact-kappa evaluations per sweep before densification (cost control:
# one evaluation is a fresh grid plus an SVD).
EXACT_SUBSAMPLE = 15

SWEEP_TP_SCHEMA = "twinpdc.sweep-tp v1"
SWEEP_LAMBDA_SCHEMA = "twinpdc.sweep-lambda v1"
PANEL_SCHEMA = "twinpdc.panels v1"

SWEEP_TP_COLUMNS = ("index", "tp_ps", "kappa_gaussian", "kappa_exact",
                    "pair_number", "error")
SWEEP_LAMBDA_COLUMNS = ("index", "lambda_s_nm", "lambda_i_nm", "design_value",
                        "tau_s_ps", "tau_i_ps", "eta", "kappa_min_gaussian",
                        "tp_min_ps", "error")
PANEL_COLUMNS = ("index", "tp_ps", "c_ss_ps2", "c_ii_ps2", "c_si_ps2",
                 "kappa_gaussian", "kappa_exact", "error")


def _error_code(exc: Exception) -> str:
    return type(exc).__name__


def sweep_pump_duration(geom: InteractionGeometry, tp_values: Sequence[float],
                        gamma: float = GAMMA_FWHM, gain: float = 1e-2,
                        exact: bool = True,
                        exact_mode: JsaMode = JsaMode.EXACT_SINC_FULL,
                        grid_n: int = 1024,
                        exact_subsample: int = EXACT_SUBSAMPLE,
                        workers: int = 1) -> list:
    """Schmidt number across pump durations; one row per requested T_p.

    Gaussian kappa and the closed-form pair number are evaluated at
    every point; exact kappa at a log-spaced subsample of at most
    ``exact_subsample`` points, densified with the immediate neighbors
    of the detected minimum.  Exact failures are recorded per row.
    """
    tp_values = list(tp_values)
    n_pts = len(tp_values)
    rows = []
    for idx, tp in enumerate(tp_values):
        row = {"index": idx, "tp_ps": tp, "kappa_gaussian": math.nan,
               "kappa_exact": math.nan, "pair_number": math.nan, "error": ""}
        pump = PumpPulse(tp, gain)
        try:
            row["kappa_gaussian"] = schmidt_gaussian(geom, pump, gamma)
            row["pair_number"] = pair_number(geom, pump,
                                             PairRegime.GENERAL_LINEARIZED)
        except TwinPdcError as exc:
            row["error"] = _error_code(exc)
        rows.append(row)

    if not exact or n_pts == 0:
        return rows

    if n_pts <= exact_subsample:
        chosen = list(range(n_pts))
    else:
        chosen = sorted(set(
            int(round(x)) for x in np.linspace(0, n_pts - 1, exact_subsample)))

    def exact_kappa(idx: int):
        pump = PumpPulse(tp_values[idx], gain)
        grid = build_jsa(geom, pump, GridSpec(grid_n, grid_n),
                         mode=exact_mode, gamma=gamma)
        return schmidt_exact(grid).kappa_exact

    def run_batch(indices):
        def one(idx):
            try:
                return idx, exact_kappa(idx), ""
            except TwinPdcError as exc:
                return idx, math.nan, _error_code(exc)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(one, indices))
        else:
            results = [one(i) for i in indices]
        for idx, kappa, err in sorted(results):
            rows[idx]["kappa_exact"] = kappa
            if err:
                rows[idx]["error"] = err

    run_batch(chosen)

    # densify around the detected minimum with immediate neighbors
    valid = [(rows[i]["kappa_exact"], i) for i in chosen
             if not math.isnan(rows[i]["kappa_exact"])]
    if valid:
        _, i_min = min(valid)
        pos = chosen.index(i_min)
        lo = chosen[pos - 1] if pos > 0 else i_min
        hi = chosen[pos + 1] if pos + 1 < len(chosen) else i_min
        extra = [i for i in range(lo, hi + 1)
                 if i not in chosen and math.isnan(rows[i]["kappa_exact"])]
        run_batch(extra)
    return rows


def sweep_signal_wavelength(crystal: CrystalConfig, pump_wavelength_nm: float,
                            lambda_s_values: Sequence[float],
                            geometry: Geometry,
                            gamma: float = GAMMA_FWHM) -> list:
    """Gaussian purity limits across signal wavelengths, design mode.

    Periodically poled crystals get the poling period solved per point;
    bulk crystals the tuning angle.  The signal/idler labeling
    convention (|tau_s| <= |tau_i|) is applied to the tau, eta and
    kappa columns, while lambda_s stays the swept (ordinary-wave)
    wavelength.
    """
    poled = crystal.poling_period_nm is not None
    rows = []
    for idx, lam_s in enumerate(lambda_s_values):
        row = {"index": idx, "lambda_s_nm": lam_s, "lambda_i_nm": math.nan,
               "design_value": math.nan, "tau_s_ps": math.nan,
               "tau_i_ps": math.nan, "eta": math.nan,
               "kappa_min_gaussian": math.nan, "tp_min_ps": math.nan,
               "error": ""}
        try:
            if poled:
                g = solve_poling_period(crystal, pump_wavelength_nm, lam_s,
                                        geometry)
                row["design_value"] = g.crystal.poling_period_nm
            else:
                g = solve_tuning_angle(crystal, pump_wavelength_nm, lam_s,
                                       geometry)
                row["design_value"] = g.crystal.tuning_angle_deg
            row["lambda_i_nm"] = 1.0 / (1.0 / pump_wavelength_nm - 1.0 / lam_s)
            row["tau_s_ps"] = g.tau_s
            row["tau_i_ps"] = g.tau_i
            row["eta"] = g.eta
            tp_min, kappa_min = optimal_pump_duration_closed_form(g, gamma)
            row["tp_min_ps"] = tp_min
            row["kappa_min_gaussian"] = kappa_min
        except TwinPdcError as exc:
            row["error"] = _error_code(exc)
        rows.append(row)
    return rows


@dataclass
class Panel:
    """One joint-probability panel: grids plus the Gaussian conic.

    The iso-probability ellipse of the Gaussian model is the curve
    c_ss O_s^2 + 2 c_si O_s O_i + c_ii O_i^2 = 1; its axes align with
    the coordinate axes exactly when c_si = 0.
    """

    index: int
    tp_ps: float
    spectral: Optional[AmplitudeGrid]
    temporal: Optional[AmplitudeGrid]
    c_ss: float
    c_ii: float
    c_si: float
    kappa_gaussian: float
    kappa_exact: float
    error: str = ""


def panel_study(geom: InteractionGeometry, tp_values: Sequence[float],
                gamma: float = GAMMA_FWHM, gain: float = 1e-2,
                grid_n: int = 1024,
                mode: JsaMode = JsaMode.EXACT_SINC_LINEARIZED) -> list:
    """Joint spectral/temporal probability panels across pump durations."""
    panels = []
    for idx, tp in enumerate(tp_values):
        pump = PumpPulse(tp, gain)
        par = gaussian_params(geom, pump, gamma)
        panel = Panel(index=idx, tp_ps=tp, spectral=None, temporal=None,
                      c_ss=par.c_ss, c_ii=par.c_ii, c_si=par.c_si,
                      kappa_gaussian=math.nan, kappa_exact=math.nan)
        try:
            panel.kappa_gaussian = schmidt_gaussian(geom, pump, gamma)
            spectral = build_jsa(geom, pump, GridSpec(grid_n, grid_n),
                                 mode=mode, gamma=gamma)
            panel.spectral = spectral
            panel.temporal = to_temporal(spectral)
            panel.kappa_exact = schmidt_exact(spectral).kappa_exact
        except TwinPdcError as exc:
            panel.error = _error_code(exc)
        panels.append(panel)
    return panels


def write_sweep_tp_csv(path, rows, extra_header=()) -> None:
    save_columns_csv(
        path,
        (f"schema: {SWEEP_TP_SCHEMA}", *extra_header),
        SWEEP_TP_COLUMNS,
        [[r[c] for r in rows] for c in SWEEP_TP_COLUMNS],
    )


def write_sweep_lambda_csv(path, rows, extra_header=()) -> None:
    save_columns_csv(
        path,
        (f"schema: {SWEEP_LAMBDA_SCHEMA}", *extra_header),
        SWEEP_LAMBDA_COLUMNS,
        [[r[c] for r in rows] for c in SWEEP_LAMBDA_COLUMNS],
    )


def write_panels_csv(path, panels, extra_header=()) -> None:
    rows = [{"index": p.index, "tp_ps": p.tp_ps, "c_ss_ps2": p.c_ss,
             "c_ii_ps2": p.c_ii, "c_si_ps2": p.c_si,
             "kappa_gaussian": p.kappa_gaussian, "kappa_exact": p.kappa_exact,
             "error": p.error} for p in panels]
    save_columns_csv(
        path,
        (f"schema: {PANEL_SCHEMA}", *extra_header),
        PANEL_COLUMNS,
        [[r[c] for r in rows] for c in PANEL_COLUMNS],
    )
