"""Marginal one-photon statistics and pair-production efficiency.

First-order coherence kernels G1(t, t') of the signal or idler, their
diagonals (intensity profiles) and marginal spectra, the heralded-state
purity bridge Tr[(G1/N)^2] = 1/kappa, and the closed-form pair numbers
of the different operating regimes.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DegenerateVelocities
from .grids import AmplitudeGrid, Domain
from .jsa import GAMMA_FWHM, PumpPulse
from .phasematch import InteractionGeometry
from .temporal import EPS_DELTA_TAU


class Which(Enum):
    SIGNAL = "signal"
    IDLER = "idler"


def g1_coherence(grid: AmplitudeGrid, which: Which) -> np.ndarray:
    """First-order coherence kernel of one photon, in the grid's domain.

    G1_s(t, t') = integral dt_i phi*(t, t_i) phi(t', t_i) for the
    signal; the mirror contraction for the idler.  Hermitian by
    construction; its trace (times the axis step) is the pair number
    and Tr[(G1/N)^2] is the heralded-state purity.
    """
    a = grid.values
    if which is Which.SIGNAL:
        return np.conj(a) @ a.T * grid.step_i
    return np.conj(a).T @ a * grid.step_s


def kernel_purity(g1: np.ndarray, step: float) -> float:
    """Tr[(G1/N)^2] with N = Tr[G1] * step: the heralded-state purity."""
    n = np.trace(g1).real * step
    return float(np.sum(np.abs(g1) ** 2) * step ** 2 / n ** 2)


def marginal(grid: AmplitudeGrid, which: Which):
    """(axis, marginal of |amplitude|^2 over the partner axis)."""
    p = grid.probability()
    if which is Which.SIGNAL:
        return grid.axis_s, p.sum(axis=1) * grid.step_i
    return grid.axis_i, p.sum(axis=0) * grid.step_s


def intensity_profile(grid: AmplitudeGrid, which: Which):
    """Temporal intensity I_j(t), the diagonal of G1; integrates to N."""
    grid.require(Domain.TEMPORAL)
    return marginal(grid, which)


def spectrum(grid: AmplitudeGrid, which: Which):
    """Marginal spectrum S_j(Omega); integrates to N."""
    grid.require(Domain.SPECTRAL)
    return marginal(grid, which)


class PairRegime(Enum):
    GENERAL_LINEARIZED = "general_linearized"
    LONG_PUMP = "long_pump"
    SYMMETRIC_MIN = "symmetric_min"
    ASYMMETRIC_MIN = "asymmetric_min"


def pair_number(geom: InteractionGeometry, pump: PumpPulse,
                regime: PairRegime = PairRegime.GENERAL_LINEARIZED,
                gamma: float = GAMMA_FWHM) -> float:
    """Mean photon pairs per pulse in the requested regime.

    The general linearized result g^2 sqrt(pi) T_p / (2 dtau) holds for
    any geometry and pump duration; the other regimes are its quoted
    specializations (long pump: (g^2/2) kappa; symmetric minimum:
    (g^2/4) sqrt(2 pi gamma); asymmetric minimum: the efficiency loss
    from the idler leaving the pump).
    """
    if geom.delta_tau < EPS_DELTA_TAU:
        raise DegenerateVelocities("pair number diverges for dtau -> 0")
    g2 = pump.gain ** 2
    tp = pump.duration_ps
    if regime is PairRegime.GENERAL_LINEARIZED:
        return g2 * np.sqrt(np.pi) * tp / (2.0 * geom.delta_tau)
    if regime is PairRegime.LONG_PUMP:
        kappa_asym = tp / (np.sqrt(2.0 * gamma) * geom.delta_tau)
        return g2 / 2.0 * kappa_asym
    if regime is PairRegime.SYMMETRIC_MIN:
        return g2 / 4.0 * np.sqrt(2.0 * np.pi * gamma)
    if regime is PairRegime.ASYMMETRIC_MIN:
        return g2 / 2.0 * np.sqrt(np.pi) * tp \
            / ((1.0 - geom.eta) * abs(geom.tau_i))
    raise ValueError(f"unknown regime {regime!r}")


def effective_length_ratio(geom: InteractionGeometry, pump: PumpPulse) -> float:
    """Crystal-length reduction factor sqrt(T_p/|tau_i|) of the
    asymmetric regime; 1 once the pump outlasts the idler walk-off."""
    tp = pump.duration_ps
    if tp >= abs(geom.tau_i):
        return 1.0
    return float(np.sqrt(tp / abs(geom.tau_i)))
