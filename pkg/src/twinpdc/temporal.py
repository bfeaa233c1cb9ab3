"""Joint temporal amplitude: FFT route, closed form, asymptotics, marginals.

The temporal amplitude phi(tbar_s, tbar_i) is the 2-D back-Fourier
transform of the spectral amplitude; axes are barred exit times (the
linear phase t_As Omega_s + t_Ai Omega_i is stripped before the
transform so the output is centered).  Under linearized propagation phi
factorizes into the pump profile times a box of half-width delta_tau in
the exit-time difference.
"""

from __future__ import annotations

import warnings
from enum import Enum

import numpy as np

from .errors import DegenerateVelocities, RegimeNotApplicable
from .grids import AmplitudeGrid, Domain, make_axis
from .jsa import PumpPulse
from .phasematch import InteractionGeometry

# Below this |tau_i - tau_s| the linearized closed forms are invalid
# (the first Taylor order of the mismatch vanishes).
EPS_DELTA_TAU = 1e-6

# Scale separation demanded of the intermediate asymptotic regime.
INTERMEDIATE_SEPARATION = 10.0


def to_temporal(spectral: AmplitudeGrid) -> AmplitudeGrid:
    """Back-Fourier transform a spectral grid to barred exit times.

    phi(t_s, t_i) = (2 pi)^-1 integral dO_s dO_i e^{-i(O_s t_s + O_i t_i)}
    psi(O_s, O_i), evaluated by FFT.  The grid's linear phase anchor
    (t_As, t_Ai) is removed first, so the output axes are tbar_j = t_j -
    t_Aj.  Parseval's identity between the two grids holds to rounding.
    """
    spectral.require(Domain.SPECTRAL)
    values = spectral.values
    if spectral.phase_anchor is not None:
        t_as, t_ai = spectral.phase_anchor
        values = values * np.exp(
            -1j * (t_as * spectral.axis_s[:, None]
                   + t_ai * spectral.axis_i[None, :]))

    phi = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(values)))
    phi *= spectral.weight / (2.0 * np.pi)

    dt_s = 2.0 * np.pi / (spectral.n_s * spectral.step_s)
    dt_i = 2.0 * np.pi / (spectral.n_i * spectral.step_i)
    return AmplitudeGrid(phi, make_axis(spectral.n_s, dt_s),
                         make_axis(spectral.n_i, dt_i), Domain.TEMPORAL)


def _box(x, half_width):
    """Rect(t/dtau): 1 on [-dtau, dtau], 0 elsewhere."""
    return (np.abs(x) <= half_width).astype(float)


def _require_nondegenerate(geom: InteractionGeometry) -> None:
    if geom.delta_tau < EPS_DELTA_TAU:
        raise DegenerateVelocities(
            f"|tau_i - tau_s| = {geom.delta_tau:.2e} ps below "
            f"{EPS_DELTA_TAU} ps; linearized closed form invalid")


def analytic_phi(geom: InteractionGeometry, pump: PumpPulse,
                 t_bar_s, t_bar_i):
    """Closed-form linearized temporal amplitude (constant phases dropped).

    (g / 2 dtau) * pump((tbar_s - eta tbar_i)/(1 - eta)) *
    Rect((tbar_s - tbar_i)/dtau), vectorized over barred times.
    """
    _require_nondegenerate(geom)
    t_bar_s = np.asarray(t_bar_s, dtype=float)
    t_bar_i = np.asarray(t_bar_i, dtype=float)
    eta = geom.eta
    amp = pump.gain / (2.0 * geom.delta_tau)
    pump_part = pump.temporal_amplitude((t_bar_s - eta * t_bar_i) / (1.0 - eta))
    return amp * pump_part * _box(t_bar_s - t_bar_i, geom.delta_tau)


def analytic_phi_grid(geom: InteractionGeometry, pump: PumpPulse,
                      n_s: int = 512, n_i: int = 1024,
                      pad: float = 1.25) -> AmplitudeGrid:
    """Sample the closed form on a grid covering its support.

    Both axes share one step so anti-diagonal time delays fall on a
    clean lattice for the coincidence marginal.
    """
    half_s = pad * (abs(geom.eta) * geom.delta_tau
                    + 4.0 * pump.duration_ps * (1.0 - geom.eta)
                    + geom.delta_tau * 0.05)
    half_i = half_s + 1.1 * geom.delta_tau
    step = 2.0 * half_i / n_i
    if 2.0 * half_s / n_s > step:
        step = 2.0 * half_s / n_s
    axis_s = make_axis(n_s, step)
    axis_i = make_axis(n_i, step)
    vals = analytic_phi(geom, pump, axis_s[:, None], axis_i[None, :])
    return AmplitudeGrid(vals.astype(complex), axis_s, axis_i, Domain.TEMPORAL)


class Regime(Enum):
    LONG_PUMP = "long_pump"
    ULTRASHORT_PUMP = "ultrashort_pump"
    INTERMEDIATE = "intermediate"


def asymptotic_phi(geom: InteractionGeometry, pump: PumpPulse, regime: Regime,
                   t_bar_s, t_bar_i):
    """Asymptotic limits of the temporal correlation.

    long_pump (T_p >> |tau_i|): pump(tbar_s) times the box in the time
    difference; ultrashort (T_p << |tau_s|): pump of the tilted
    coordinate times a box Rect(tbar_s/tau_s); intermediate (|tau_i| >>
    T_p >> |tau_s|): separable pump(tbar_s) x Rect(tbar_i/dtau).  A
    warning is emitted when the regime's inequality is not comfortably
    met; RegimeNotApplicable when it cannot hold at all.
    """
    _require_nondegenerate(geom)
    t_bar_s = np.asarray(t_bar_s, dtype=float)
    t_bar_i = np.asarray(t_bar_i, dtype=float)
    tp = pump.duration_ps
    amp = pump.gain / (2.0 * geom.delta_tau)

    if regime is Regime.LONG_PUMP:
        if tp < 5.0 * abs(geom.tau_i):
            warnings.warn("long-pump form used outside T_p >> |tau_i|")
        return amp * pump.temporal_amplitude(t_bar_s) \
            * _box(t_bar_s - t_bar_i, geom.delta_tau)

    if regime is Regime.ULTRASHORT_PUMP:
        if tp > abs(geom.tau_s) / 5.0:
            warnings.warn("ultrashort form used outside T_p << |tau_s|")
        pump_part = pump.temporal_amplitude(
            (t_bar_s - geom.eta * t_bar_i) / (1.0 - geom.eta))
        return amp * pump_part * _box(t_bar_s, abs(geom.tau_s))

    if regime is Regime.INTERMEDIATE:
        ratio = abs(geom.tau_i) / max(abs(geom.tau_s), EPS_DELTA_TAU)
        if ratio < INTERMEDIATE_SEPARATION:
            raise RegimeNotApplicable(
                f"|tau_i|/|tau_s| = {ratio:.2f}: the ordering "
                f"|tau_i| >> T_p >> |tau_s| cannot hold")
        if not (abs(geom.tau_s) * 2.0 < tp < abs(geom.tau_i) / 2.0):
            warnings.warn("intermediate form used outside its window")
        return amp * pump.temporal_amplitude(t_bar_s) \
            * _box(t_bar_i, geom.delta_tau)

    raise ValueError(f"unknown regime {regime!r}")


def joint_temporal_probability(temporal: AmplitudeGrid) -> np.ndarray:
    """|phi|^2 elementwise: the coincidence-rate surface."""
    temporal.require(Domain.TEMPORAL)
    return temporal.probability()


def coincidence_marginal(temporal: AmplitudeGrid):
    """Time-delay marginal G2bar(dt) = integral dt_s |phi(t_s, t_s + dt)|^2.

    Computed by anti-diagonal summation with nearest-neighbor binning
    (bin = idler grid step); integrates to the pair number N.  Returns
    (delta_t, marginal) arrays with delta_t = t_i - t_s.
    """
    temporal.require(Domain.TEMPORAL)
    p = temporal.probability()
    dt_s, dt_i = temporal.step_s, temporal.step_i
    bin_width = dt_i

    delta = temporal.axis_i[None, :] - temporal.axis_s[:, None]
    lo = delta.min()
    idx = np.rint((delta - lo) / bin_width).astype(int)
    n_bins = idx.max() + 1
    marginal = np.zeros(n_bins)
    np.add.at(marginal, idx.ravel(), (p * dt_s * dt_i / bin_width).ravel())
    delta_t = lo + bin_width * np.arange(n_bins)
    return delta_t, marginal


def axis_correlation(probability: np.ndarray, axis_s: np.ndarray,
                     axis_i: np.ndarray) -> float:
    """Pearson correlation of the two axes under the given joint weight."""
    w = probability / probability.sum()
    ws = w.sum(axis=1)
    wi = w.sum(axis=0)
    ms = float(ws @ axis_s)
    mi = float(wi @ axis_i)
    var_s = float(ws @ (axis_s - ms) ** 2)
    var_i = float(wi @ (axis_i - mi) ** 2)
    cov = float((axis_s - ms) @ w @ (axis_i - mi))
    return cov / np.sqrt(var_s * var_i)


def ridge_slope(probability: np.ndarray, axis_s: np.ndarray,
                axis_i: np.ndarray) -> float:
    """Weighted least-squares slope of tbar_s against tbar_i."""
    w = probability / probability.sum()
    wi = w.sum(axis=0)
    mi = float(wi @ axis_i)
    ms = float(w.sum(axis=1) @ axis_s)
    cov = float((axis_s - ms) @ w @ (axis_i - mi))
    var_i = float(wi @ (axis_i - mi) ** 2)
    return cov / var_i
