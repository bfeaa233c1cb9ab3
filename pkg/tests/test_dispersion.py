import numpy as np
import pytest

from twinpdc.dispersion import (
    C_MM_PS,
    CrystalConfig,
    IndexModel,
    Polarization,
    Role,
    Species,
    WaveSpec,
    group_index_at,
    index_model,
    inverse_group_velocity,
    inverse_group_velocity_fd,
    k_at,
    refractive_index,
    wavenumber,
)
from twinpdc.errors import OutOfValidityWindow

E = Polarization.EXTRAORDINARY
O = Polarization.ORDINARY


def test_refractive_index_deterministic():
    crystal = CrystalConfig(Species.BBO, 10.0, 28.8)
    wave = WaveSpec(1514.0, O, Role.SIGNAL)
    assert refractive_index(crystal, wave) == refractive_index(crystal, wave)


def test_angle_tuning_endpoints():
    # n_e(90 deg) is the principal extraordinary index, n_e(0) the ordinary
    for species in (Species.KDP, Species.BBO):
        lam = 830.0 if species is Species.KDP else 757.0
        at90 = CrystalConfig(species, 10.0, 90.0)
        at0 = CrystalConfig(species, 10.0, 0.0)
        principal_e = index_model(species, E).n(lam * 1e-3)
        principal_o = index_model(species, O).n(lam * 1e-3)
        assert refractive_index(at90, WaveSpec(lam, E, Role.PUMP)) == \
            pytest.approx(principal_e, rel=1e-14)
        assert refractive_index(at0, WaveSpec(lam, E, Role.PUMP)) == \
            pytest.approx(principal_o, rel=1e-14)


def test_wavenumber_definition_constant_index(monkeypatch):
    # toy dispersionless model: n = 1.5 -> k = 3 pi rad/um at 1000 nm
    toy = IndexModel("toy", (("const", 2.25, 0.0),), (0.1, 10.0))
    import twinpdc.dispersion as disp
    monkeypatch.setitem(disp._MODELS, (Species.KTP, E), toy)
    crystal = CrystalConfig(Species.KTP, 10.0, 90.0)
    wave = WaveSpec(1000.0, E, Role.SIGNAL)
    assert wavenumber(crystal, wave) == pytest.approx(3.0 * np.pi, rel=1e-14)
    # dispersionless limit: k' = n0/c exactly
    assert inverse_group_velocity(crystal, wave) == \
        pytest.approx(1.5 / C_MM_PS, rel=1e-14)
    assert inverse_group_velocity_fd(crystal, wave) == \
        pytest.approx(1.5 / C_MM_PS, rel=1e-9)


def test_ppktp_qpm_closure(ppktp):
    # counter-propagating closure k_s - k_i = k_p - k_G at the solved triple
    g = ppktp
    c = g.crystal
    k_p = wavenumber(c, g.pump)
    k_s = wavenumber(c, g.signal)
    k_i = wavenumber(c, g.idler)
    residual = k_s - k_i - (k_p - c.grating_wavenumber)
    assert abs(residual) * c.length_mm * 1e3 < 1e-6


def test_bbo_degenerate_closure(bbo):
    g = bbo
    k_p = wavenumber(g.crystal, g.pump)
    k_s = wavenumber(g.crystal, g.signal)
    k_i = wavenumber(g.crystal, g.idler)
    assert g.crystal.grating_wavenumber == 0.0
    assert abs(k_s + k_i - k_p) * g.crystal.length_mm * 1e3 < 1e-6


def test_kdp_group_velocity_matching(kdp):
    # pump and ordinary signal share the group velocity: tau_s = 0
    kp_p = inverse_group_velocity(kdp.crystal, kdp.pump)
    kp_s = inverse_group_velocity(kdp.crystal, kdp.signal)
    tau_s = kdp.crystal.length_mm / 2 * (kp_p - kp_s)
    assert abs(tau_s) < 0.02


def test_ppktp_characteristic_times(ppktp):
    lc = ppktp.crystal.length_mm
    kp_p = inverse_group_velocity(ppktp.crystal, ppktp.pump)
    kp_s = inverse_group_velocity(ppktp.crystal, ppktp.signal)
    kp_i = inverse_group_velocity(ppktp.crystal, ppktp.idler)
    assert lc / 2 * (kp_p - kp_s) == pytest.approx(0.67, rel=0.05)
    assert lc / 2 * (kp_p + kp_i) == pytest.approx(63.0, rel=0.05)


def test_bbo_signal_idler_times(bbo):
    # ordinary 1514 nm photon slower, extraordinary faster, symmetrically
    lc = bbo.crystal.length_mm
    kp_p = inverse_group_velocity(bbo.crystal, bbo.pump)
    kp_s = inverse_group_velocity(bbo.crystal, bbo.signal)
    kp_i = inverse_group_velocity(bbo.crystal, bbo.idler)
    assert lc / 2 * (kp_p - kp_s) == pytest.approx(-0.237, rel=0.05)
    assert lc / 2 * (kp_p - kp_i) == pytest.approx(+0.237, rel=0.05)


@pytest.mark.parametrize("species,pol", [
    (Species.KTP, E), (Species.KTP, O),
    (Species.KDP, E), (Species.KDP, O),
    (Species.BBO, E), (Species.BBO, O),
])
def test_analytic_vs_finite_difference_group_velocity(species, pol):
    lo, hi = index_model(species, pol).window_um
    crystal = CrystalConfig(species, 10.0, 53.7)
    # keep the FD stencil inside the window
    for lam in np.linspace(lo * 1.02e3, hi * 0.98e3, 25):
        wave = WaveSpec(float(lam), pol, Role.SIGNAL)
        ana = inverse_group_velocity(crystal, wave)
        fd = inverse_group_velocity_fd(crystal, wave)
        assert abs(ana - fd) / abs(ana) < 1e-6


@pytest.mark.parametrize("species,pol", [
    (Species.KTP, E), (Species.KDP, O), (Species.BBO, E),
])
def test_index_smoothness(species, pol):
    # second differences at 0.01 nm steps expose any coded discontinuity;
    # the genuine curvature contribution at this step is ~1e-11
    from twinpdc.dispersion import index_at
    lo, hi = index_model(species, pol).window_um
    crystal = CrystalConfig(species, 10.0, 90.0)
    for center in np.linspace(lo * 1.02e3, hi * 0.98e3, 7):
        lam = center + 0.01 * np.arange(200)
        n = np.asarray(index_at(crystal, pol, lam))
        assert np.abs(np.diff(n, 2)).max() < 1e-8


def test_out_of_validity_window():
    crystal = CrystalConfig(Species.KDP, 10.0, 67.8)
    with pytest.raises(OutOfValidityWindow):
        refractive_index(crystal, WaveSpec(2000.0, O, Role.SIGNAL))
    with pytest.raises(OutOfValidityWindow):
        k_at(crystal, O, np.array([830.0, 100.0]))


def test_crystal_config_validation():
    with pytest.raises(ValueError):
        CrystalConfig(Species.KTP, -1.0)
    with pytest.raises(ValueError):
        CrystalConfig(Species.KTP, 10.0, qpm_order=2)
    with pytest.raises(ValueError):
        CrystalConfig(Species.KTP, 10.0, tuning_angle_deg=120.0)
    with pytest.raises(ValueError):
        CrystalConfig(Species.KTP, 10.0, poling_period_nm=-5.0)


def test_group_index_exceeds_phase_index():
    # normal dispersion throughout the fitted windows
    crystal = CrystalConfig(Species.KTP, 10.0, 90.0)
    lam = np.linspace(500.0, 3000.0, 50)
    from twinpdc.dispersion import index_at
    n = index_at(crystal, E, lam)
    ng = group_index_at(crystal, E, lam)
    assert np.all(ng > n)
