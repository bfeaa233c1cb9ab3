import numpy as np
import pytest

from twinpdc.errors import GridTooNarrow
from twinpdc.jsa import (
    GAMMA_FWHM,
    GAMMA_TAYLOR,
    GridSpec,
    JsaMode,
    PumpPulse,
    build_jsa,
    coverage_floor,
    gaussian_params,
)

MODES = (JsaMode.EXACT_SINC_FULL, JsaMode.EXACT_SINC_LINEARIZED,
         JsaMode.GAUSSIAN)


def test_pump_pulse_conventions():
    pump = PumpPulse(2.0, 0.01)
    assert pump.temporal_amplitude(0.0) == 1.0
    # spectral amplitude T_p exp(-T_p^2 Omega^2 / 2)
    assert pump.spectral_amplitude(0.0) == 2.0
    assert pump.spectral_amplitude(0.5) == pytest.approx(
        2.0 * np.exp(-0.5), rel=1e-14)
    assert pump.bandwidth == 0.5


@pytest.mark.parametrize("mode", MODES)
def test_peak_amplitude(ppktp, mode):
    # |psi(0,0)| = g T_p / sqrt(2 pi) for every phase-matched geometry
    pump = PumpPulse(4.05, 0.01)
    grid = build_jsa(ppktp, pump, GridSpec(256, 256), mode=mode)
    peak = abs(grid.values[grid.n_s // 2, grid.n_i // 2])
    assert peak == pytest.approx(0.01 * 4.05 / np.sqrt(2 * np.pi), rel=1e-12)


def test_first_idler_sinc_zero(ppktp):
    # linearized counter-propagating: tau_i * Omega_i = pi along Omega_s=0
    pump = PumpPulse(4.05, 0.01)
    grid = build_jsa(ppktp, pump, mode=JsaMode.EXACT_SINC_LINEARIZED)
    # strip the linear propagation phase to expose the sinc sign change
    row = (grid.values[grid.n_s // 2]
           * np.exp(-1j * ppktp.t_ai * grid.axis_i)).real
    mid = grid.n_i // 2
    signs = np.sign(row[mid:])
    flip = np.nonzero(np.diff(signs))[0][0]
    zero_crossing = grid.axis_i[mid + flip]
    assert zero_crossing == pytest.approx(np.pi / ppktp.tau_i,
                                          abs=grid.step_i)


def test_gaussian_params_formulas(bbo, kdp):
    pump = PumpPulse(0.147, 0.01)
    par = gaussian_params(bbo, pump, GAMMA_FWHM)
    tp2 = 0.147 ** 2 / 2
    assert par.c_ss == pytest.approx(tp2 + GAMMA_FWHM * bbo.tau_s ** 2)
    assert par.c_ii == pytest.approx(tp2 + GAMMA_FWHM * bbo.tau_i ** 2)
    # symmetric matching at the optimal duration: mixed term vanishes
    assert abs(par.c_si) < 1e-4
    assert par.positive_definite

    # KDP: tau_s = 0 makes c_si = T_p^2/2 for any gamma
    pump = PumpPulse(0.1, 0.01)
    for gamma in (GAMMA_FWHM, GAMMA_TAYLOR):
        par = gaussian_params(kdp, pump, gamma)
        assert par.c_si == pytest.approx(0.1 ** 2 / 2, abs=2e-5)


def test_c_si_sign_ultrashort_negative_eta(bbo):
    # T_p -> 0 with eta < 0: the mixed term goes negative
    par = gaussian_params(bbo, PumpPulse(1e-3, 0.01))
    assert par.c_si < 0.0


def test_bbo_gaussian_factorizes_at_optimum(bbo):
    from twinpdc.schmidt import schmidt_exact
    grid = build_jsa(bbo, PumpPulse(0.147, 0.01), GridSpec(512, 512),
                     mode=JsaMode.GAUSSIAN)
    report = schmidt_exact(grid)
    assert report.kappa_exact < 1.0001


def test_gaussian_mode_matches_closed_form(ppktp):
    # |psi| equals the analytic Gaussian at every node
    pump = PumpPulse(4.05, 0.01)
    grid = build_jsa(ppktp, pump, GridSpec(128, 128), mode=JsaMode.GAUSSIAN)
    par = gaussian_params(ppktp, pump)
    o_s = grid.axis_s[:, None]
    o_i = grid.axis_i[None, :]
    expected = par.prefactor * np.exp(
        -(par.c_ss * o_s ** 2 + 2 * par.c_si * o_s * o_i + par.c_ii * o_i ** 2))
    # atol floor avoids spurious subnormal mismatches at the far corners
    np.testing.assert_allclose(np.abs(grid.values), expected, rtol=1e-12,
                               atol=1e-290)


def test_fwhm_calibration_of_gamma():
    # the Gaussian substitute reproduces the sinc amplitude FWHM to < 2%
    x = np.linspace(0, 3, 200001)
    sinc = np.sin(x[1:]) / x[1:]
    x_half_sinc = x[1:][np.argmin(np.abs(sinc - 0.5))]
    x_half_gauss = np.sqrt(np.log(2.0) / GAMMA_FWHM)
    assert abs(x_half_gauss - x_half_sinc) / x_half_sinc < 0.02


@pytest.mark.parametrize("mode", (JsaMode.EXACT_SINC_LINEARIZED,
                                  JsaMode.GAUSSIAN))
def test_truncation_audit_on_default_grids(ppktp, kdp, bbo, mode):
    for geom, tp in ((ppktp, 4.05), (kdp, 0.1), (bbo, 0.147)):
        grid = build_jsa(geom, PumpPulse(tp, 0.01), mode=mode)
        assert grid.edge_ring_mass() < 1e-4


def test_grid_too_narrow(ppktp):
    pump = PumpPulse(4.05, 0.01)
    floor = coverage_floor(ppktp, pump)
    with pytest.raises(GridTooNarrow):
        build_jsa(ppktp, pump, GridSpec(256, 256, floor * 0.5, floor * 2.0))
    # at or above the floor is accepted
    build_jsa(ppktp, pump, GridSpec(256, 256, floor * 1.01, floor * 1.01))


def test_linear_phase_recorded(ppktp):
    grid = build_jsa(ppktp, PumpPulse(4.05, 0.01), GridSpec(64, 64))
    assert grid.phase_anchor == (ppktp.t_as, ppktp.t_ai)
