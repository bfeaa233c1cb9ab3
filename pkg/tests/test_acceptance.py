"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Criteria 4a (minimum value), 4b and 4c assert reference figures that sit
below what the model itself yields; the library computes the honest
converged values (three independent oracles agree; see the verification notes in the
README), so those three tests fail by design rather than bending the
numerics toward the quoted targets.
"""

import math
import time

import numpy as np
import pytest

from twinpdc.dispersion import CrystalConfig, Species
from twinpdc.grids import AmplitudeGrid, Domain, make_axis
from twinpdc.heralded import PairRegime, Which, g1_coherence, \
    intensity_profile, kernel_purity, pair_number, spectrum
from twinpdc.jsa import GAMMA_FWHM, GridSpec, JsaMode, PumpPulse, build_jsa, \
    gaussian_params
from twinpdc.phasematch import Geometry, solve_phase_matching
from twinpdc.schmidt import kappa_from_quadratic_form, \
    optimal_pump_duration, optimal_pump_duration_closed_form, schmidt_exact, \
    schmidt_gaussian
from twinpdc.sweep import sweep_pump_duration, sweep_signal_wavelength
from twinpdc.temporal import analytic_phi, analytic_phi_grid, \
    coincidence_marginal, to_temporal


def _criterion(name, ok, detail):
    print(f"[{name}] {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"{name}: {detail}"


# -- 1. Table-1 regression --------------------------------------------------

def test_criterion_1_table1_regression():
    t0 = time.perf_counter()
    ktp = solve_phase_matching(
        CrystalConfig(Species.KTP, 10.0, 90.0, poling_period_nm=800.0),
        821.4, Geometry.COUNTER_PROPAGATING)
    kdp = solve_phase_matching(CrystalConfig(Species.KDP, 10.0, 67.8),
                               415.0, Geometry.CO_PROPAGATING)
    bbo = solve_phase_matching(CrystalConfig(Species.BBO, 10.0, 28.8),
                               757.0, Geometry.CO_PROPAGATING)
    elapsed = time.perf_counter() - t0

    checks = [
        abs(ktp.signal.wavelength_nm - 1141.0) / 1141.0 < 5e-3,
        abs(ktp.idler.wavelength_nm - 2932.0) / 2932.0 < 5e-3,
        abs(ktp.tau_s - 0.67) / 0.67 < 0.05,
        abs(ktp.tau_i - 63.0) / 63.0 < 0.05,
        abs(ktp.eta - 0.01) < 5e-3,
        abs(kdp.tau_s) < 0.02,
        abs(kdp.tau_i - 0.72) / 0.72 < 0.05,
        abs(bbo.tau_s - (-0.237)) / 0.237 < 0.05,
        abs(bbo.tau_i - 0.237) / 0.237 < 0.05,
        abs(bbo.eta - (-1.0)) < 0.02,
        elapsed < 1.0,
    ]
    _criterion(
        "criterion-1 table-1 regression", all(checks),
        f"PPKTP ls={ktp.signal.wavelength_nm:.1f} li={ktp.idler.wavelength_nm:.1f} "
        f"tau_s={ktp.tau_s:.3f} tau_i={ktp.tau_i:.2f} eta={ktp.eta:.4f}; "
        f"KDP tau_s={kdp.tau_s:.5f} tau_i={kdp.tau_i:.4f}; "
        f"BBO tau_s={bbo.tau_s:.4f} tau_i={bbo.tau_i:.4f} eta={bbo.eta:.4f}; "
        f"runtime {elapsed:.2f}s")


# -- 2. Gaussian closed forms -----------------------------------------------

def test_criterion_2_gaussian_closed_forms(ppktp, kdp, bbo):
    tp_ktp = optimal_pump_duration_closed_form(ppktp, GAMMA_FWHM)[0]
    tp_bbo = optimal_pump_duration_closed_form(bbo, GAMMA_FWHM)[0]
    k_ktp = optimal_pump_duration_closed_form(ppktp, GAMMA_FWHM)[1]
    checks = [
        abs(tp_ktp - 4.05) / 4.05 < 0.02,
        abs(tp_bbo - 0.147) / 0.147 < 0.02,
        # exact identity: kappa_min = (1+eta)/(1-eta) for eta > 0
        k_ktp == (1.0 + ppktp.eta) / (1.0 - ppktp.eta),
        # = 1 for eta <= 0 (exact zero-crossing case)
        optimal_pump_duration_closed_form(bbo, GAMMA_FWHM)[1] == 1.0,
    ]
    _criterion("criterion-2 gaussian closed forms", all(checks),
               f"T_p_min PPKTP {tp_ktp:.4f} ps (4.05), BBO {tp_bbo:.5f} ps "
               f"(0.147); kappa_min identity {k_ktp:.6f}")


# -- 3. Oracle equivalence ---------------------------------------------------

def test_criterion_3_oracle_equivalence(ppktp, kdp, bbo):
    t0 = time.perf_counter()
    # literal quadruple sum on tiny grids equals the singular-value route
    worst_small = 0.0
    for geom, tp, mode in ((ppktp, 4.05, JsaMode.EXACT_SINC_LINEARIZED),
                           (bbo, 0.147, JsaMode.GAUSSIAN),
                           (kdp, 0.1, JsaMode.EXACT_SINC_LINEARIZED)):
        grid = build_jsa(geom, PumpPulse(tp, 0.01), GridSpec(32, 32),
                         mode=mode)
        psi = grid.values
        b_lit = np.einsum("ab,cd,ad,cb->", psi, psi, psi.conj(),
                          psi.conj()).real * grid.weight ** 2
        rep = schmidt_exact(grid, audit=False)
        worst_small = max(worst_small,
                          abs(b_lit - rep.fluctuation_b) / rep.fluctuation_b)

    # analytic-Gaussian 1024-grids against the closed form
    worst_gauss = 0.0
    for geom, tp in ((ppktp, 4.05), (kdp, 0.1), (bbo, 0.147)):
        pump = PumpPulse(tp, 0.01)
        grid = build_jsa(geom, pump, mode=JsaMode.GAUSSIAN)
        par = gaussian_params(geom, pump)
        closed = kappa_from_quadratic_form(par.c_ss, par.c_ii, par.c_si)
        kappa = schmidt_exact(grid).kappa_exact
        worst_gauss = max(worst_gauss, abs(kappa - closed) / closed)
    elapsed = time.perf_counter() - t0

    ok = worst_small < 1e-8 and worst_gauss < 1e-3 and elapsed < 30.0
    _criterion("criterion-3 oracle equivalence", ok,
               f"quadruple-sum delta {worst_small:.2e} (<1e-8), Gaussian "
               f"closed-form delta {worst_gauss:.2e} (<1e-3), "
               f"runtime {elapsed:.1f}s (<30)")


# -- 4. Paper-figure anchors --------------------------------------------------

@pytest.fixture(scope="module")
def ppktp_exact_sweep(ppktp):
    tps = np.geomspace(1.0, 20.0, 60)
    rows = sweep_pump_duration(ppktp, tps, exact=True,
                               exact_mode=JsaMode.EXACT_SINC_FULL,
                               grid_n=1024)
    return [(r["tp_ps"], r["kappa_exact"]) for r in rows
            if not math.isnan(r["kappa_exact"])]


def test_criterion_4a_ppktp_minimum_location(ppktp_exact_sweep):
    tp, kappa = zip(*ppktp_exact_sweep)
    j = int(np.argmin(kappa))
    ok = 2.0 <= tp[j] <= 10.0
    _criterion("criterion-4a ppktp minimum location", ok,
               f"exact-kappa minimum at T_p = {tp[j]:.2f} ps (inside [2, 10])")


def test_criterion_4a_ppktp_minimum_value(ppktp_exact_sweep):
    kappa_min = min(k for _, k in ppktp_exact_sweep)
    # Honest red: the converged exact minimum of the model is =~ 1.064
    # (temporal closed-form oracle: 1.067); the quoted plateau value
    # kappa < 1.05 is not attained by the model itself.
    _criterion("criterion-4a ppktp minimum value", kappa_min < 1.05,
               f"exact kappa_min = {kappa_min:.4f} (required < 1.05; "
               f"model-converged value =~ 1.066, see README notes)")


def test_criterion_4b_bbo_exact_minimum(bbo):
    tp_min, kappa_min = optimal_pump_duration(bbo, method="numeric_min",
                                              grid_n=1024)
    # Honest red: three independent oracles give kappa_min = 1.246
    # (erf-integral closed form 1.2465); the quoted 1.18 +- 0.03 is not
    # attained by the model itself.
    ok = abs(kappa_min - 1.18) <= 0.03
    _criterion("criterion-4b bbo exact minimum", ok,
               f"exact kappa_min = {kappa_min:.4f} at T_p = {tp_min:.4f} ps "
               f"(required 1.18 +- 0.03; erf-oracle value 1.2465, see "
               f"README notes)")


def test_criterion_4c_kdp_subpicosecond(kdp):
    grid = build_jsa(kdp, PumpPulse(0.1, 0.01), mode=JsaMode.EXACT_SINC_FULL)
    kappa = schmidt_exact(grid).kappa_exact
    # Honest red: the eta=0 closed-form oracle gives kappa(0.1 ps) =
    # 1.1182; the quoted bound 1.1 is not attained at exactly 100 fs
    # (it is reached near T_p =~ 85 fs).
    _criterion("criterion-4c kdp subpicosecond", kappa < 1.1,
               f"exact kappa(T_p = 0.1 ps) = {kappa:.4f} (required < 1.1; "
               f"closed-form oracle 1.1182, see README notes)")


def test_criterion_4d_bbo_wavelength_sweep():
    crystal = CrystalConfig(Species.BBO, 10.0, 28.8)
    lams = np.concatenate([np.linspace(1008.0, 1012.0, 9),
                           np.linspace(1071.0, 1600.0, 40)])
    rows = sweep_signal_wavelength(crystal, 757.0, lams,
                                   Geometry.CO_PROPAGATING)
    near = [r for r in rows if abs(r["lambda_s_nm"] - 1010.0) <= 2.0]
    kappa_peak = max(r["kappa_min_gaussian"] for r in near)
    beyond = [r for r in rows if r["lambda_s_nm"] > 1070.0]
    etas_negative = all(r["eta"] < 0.0 for r in beyond)
    ok = kappa_peak > 100.0 and etas_negative and \
        all(r["error"] == "" for r in rows)
    _criterion("criterion-4d bbo wavelength sweep", ok,
               f"kappa_min^G peak near 1010 nm = {kappa_peak:.0f} (>100); "
               f"eta < 0 for all {len(beyond)} rows above 1070 nm: "
               f"{etas_negative}")


# -- 5. Structural invariants --------------------------------------------------

def test_criterion_5_structural_invariants(ppktp):
    pump = PumpPulse(4.05, 0.01)
    grid = build_jsa(ppktp, pump, mode=JsaMode.EXACT_SINC_LINEARIZED)
    temp = to_temporal(grid)

    # Parseval
    n_spec = grid.photon_number()
    parseval = abs(n_spec - temp.photon_number()) / n_spec

    # marginal consistency
    worst_marginal = 0.0
    for which in Which:
        ax, s = spectrum(grid, which)
        worst_marginal = max(worst_marginal,
                             abs(np.sum(s) * (ax[1] - ax[0]) - n_spec) / n_spec)
        ax, i = intensity_profile(temp, which)
        worst_marginal = max(worst_marginal,
                             abs(np.sum(i) * (ax[1] - ax[0]) - n_spec) / n_spec)

    # purity bridge
    report = schmidt_exact(grid)
    bridge = max(
        abs(kernel_purity(g1_coherence(grid, w),
                          grid.step_s if w is Which.SIGNAL else grid.step_i)
            - 1.0 / report.kappa_exact) for w in Which)

    # gauge invariance
    phase = np.exp(1j * (0.83 * grid.axis_s[:, None]
                         - 2.17 * grid.axis_i[None, :]))
    gauged = AmplitudeGrid(grid.values * phase * (1.3 - 0.4j), grid.axis_s,
                           grid.axis_i, Domain.SPECTRAL)
    gauge = abs(schmidt_exact(gauged, audit=False).kappa_exact
                - report.kappa_exact) / report.kappa_exact

    # coincidence marginal: flat box, shape independent of entanglement
    ana = analytic_phi_grid(ppktp, pump, 512, 2048)
    delta_t, marginal = coincidence_marginal(ana)
    height = ana.photon_number() / (2 * ppktp.delta_tau)
    interior = np.abs(delta_t) < 0.8 * ppktp.delta_tau
    ripple = np.abs(marginal[interior] / height - 1.0).max()

    ana2 = analytic_phi_grid(ppktp, PumpPulse(60.0, 0.01), 512, 2048)
    d2, m2 = coincidence_marginal(ana2)
    m1n = marginal / np.sum(marginal * (delta_t[1] - delta_t[0]))
    m2n = m2 / np.sum(m2 * (d2[1] - d2[0]))
    m2_interp = np.interp(delta_t, d2, m2n, left=0.0, right=0.0)
    l1_shape = np.sum(np.abs(m1n - m2_interp)) * (delta_t[1] - delta_t[0])

    ok = parseval < 1e-10 and worst_marginal < 1e-6 and bridge < 1e-4 \
        and gauge < 1e-8 and ripple < 0.02 and l1_shape < 0.05
    _criterion("criterion-5 structural invariants", ok,
               f"parseval {parseval:.1e} (<1e-10), marginals "
               f"{worst_marginal:.1e} (<1e-6), purity bridge {bridge:.1e} "
               f"(<1e-4), gauge {gauge:.1e} (<1e-8), box ripple "
               f"{ripple:.3f} (<0.02), shape L1 {l1_shape:.3f} (<0.05)")


# -- 6. Heralded-photon statistics ---------------------------------------------

def test_criterion_6_heralded_statistics(ppktp, kdp, bbo):
    # (a) long-pump G1 triangle of base 4 dtau
    pump = PumpPulse(20.0 * abs(bbo.tau_i), 0.01)
    n = 1024
    ax = make_axis(n, 4.4 * bbo.delta_tau / n)
    vals = analytic_phi(bbo, pump, ax[:, None], ax[None, :])
    tgrid = AmplitudeGrid(vals.astype(complex), ax, ax, Domain.TEMPORAL)
    row = np.abs(g1_coherence(tgrid, Which.SIGNAL)[n // 2])
    support = np.where(row > row.max() * 1e-12)[0]
    base = ax[support[-1]] - ax[support[0]]
    base_ok = abs(base - 4.0 * bbo.delta_tau) / (4.0 * bbo.delta_tau) < 0.05

    # (b) deep asymmetric regime: the locked photon inherits the pump
    # spectrum, the idler bandwidth is 1/dtau
    worst_l1 = 0.0
    for geom, tp in ((ppktp, 1.5), (kdp, 0.03)):
        p = PumpPulse(tp, 0.01)
        g = build_jsa(geom, p, mode=JsaMode.EXACT_SINC_LINEARIZED)
        ax_s, s_s = spectrum(g, Which.SIGNAL)
        pump_spec = np.abs(p.spectral_amplitude(ax_s)) ** 2
        a1 = np.trapezoid(s_s, ax_s)
        a2 = np.trapezoid(pump_spec, ax_s)
        worst_l1 = max(worst_l1, np.trapezoid(
            np.abs(s_s / a1 - pump_spec / a2), ax_s))
    pump_ok = worst_l1 < 0.03

    g = build_jsa(ppktp, PumpPulse(4.05, 0.01),
                  mode=JsaMode.EXACT_SINC_LINEARIZED)
    ax_i, s_i = spectrum(g, Which.IDLER)
    mid = len(ax_i) // 2
    j = mid + 1
    while not (s_i[j] < s_i[j - 1] and s_i[j] <= s_i[j + 1]):
        j += 1
    zero_ok = abs(ax_i[j] - np.pi / ppktp.delta_tau) <= g.step_i

    # (c) symmetric regime: spectra narrower than the pump by sqrt(2)
    p = PumpPulse(0.147, 0.01)
    g = build_jsa(bbo, p, mode=JsaMode.EXACT_SINC_LINEARIZED)
    dense = np.linspace(-40, 40, 40001)
    pump_fwhm = _fwhm(dense, np.abs(p.spectral_amplitude(dense)) ** 2)
    ratios = []
    for which in Which:
        ax, s = spectrum(g, which)
        ratios.append(pump_fwhm / _fwhm(ax, s))
    sqrt2_ok = all(abs(r - math.sqrt(2)) / math.sqrt(2) < 0.05
                   for r in ratios)

    ok = base_ok and pump_ok and zero_ok and sqrt2_ok
    _criterion("criterion-6 heralded statistics", ok,
               f"G1 base {base:.3f} vs {4*bbo.delta_tau:.3f} (+-5%); "
               f"signal-vs-pump L1 {worst_l1:.4f} (<0.03); idler zero at "
               f"{ax_i[j]:.4f} vs {np.pi/ppktp.delta_tau:.4f} "
               f"(one step {g.step_i:.4f}); sqrt2 ratios "
               f"{[f'{r:.3f}' for r in ratios]}")


def _fwhm(axis, y):
    half = y.max() / 2
    above = np.where(y >= half)[0]
    i0, i1 = above[0], above[-1]
    lo = np.interp(half, [y[i0 - 1], y[i0]], [axis[i0 - 1], axis[i0]])
    hi = np.interp(half, [y[i1 + 1], y[i1]], [axis[i1 + 1], axis[i1]])
    return hi - lo


# -- 7. Efficiency formulas ------------------------------------------------------

def test_criterion_7_efficiency(ppktp, kdp, bbo):
    gain = 0.01
    worst = 0.0
    for geom in (ppktp, kdp, bbo):
        for tp in (0.05, 0.5, 4.05, 20.0, 100.0):
            pump = PumpPulse(tp, gain)
            formula = pair_number(geom, pump, PairRegime.GENERAL_LINEARIZED)
            quad = _rotated_quadrature(geom, pump)
            worst = max(worst, abs(quad - formula) / formula)
    quad_ok = worst < 0.01

    n_sym = pair_number(bbo, PumpPulse(0.147, gain),
                        PairRegime.SYMMETRIC_MIN) / gain ** 2
    sym_ok = abs(n_sym - 0.2753) / 0.2753 < 0.01

    _criterion("criterion-7 efficiency formulas", quad_ok and sym_ok,
               f"worst quadrature-vs-formula deviation {worst:.2%} (<1%); "
               f"symmetric N/g^2 = {n_sym:.4f} (0.2753 +- 1%)")


def _rotated_quadrature(geom, pump, n=2001):
    """2-D trapezoid of |phi|^2 on a pump/delay-aligned lattice.

    The closed-form amplitude is evaluated exactly; the rotation is
    unit-Jacobian, so this is an independent quadrature of the general
    pair-number integral that resolves both time scales at any T_p.
    """
    x = np.linspace(-8.0 * pump.duration_ps, 8.0 * pump.duration_ps, n)
    d = np.linspace(-1.2 * geom.delta_tau, 1.2 * geom.delta_tau, n)
    xx = x[:, None]
    dd = d[None, :]
    eta = geom.eta
    ts = xx - eta * dd / (1.0 - eta)
    ti = xx - dd / (1.0 - eta)
    p = np.abs(analytic_phi(geom, pump, ts, ti)) ** 2
    return np.trapezoid(np.trapezoid(p, d, axis=1), x)
