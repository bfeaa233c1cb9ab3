"""Individual properties of the heralded photons in the separable regimes.

In the asymmetric configurations (counter-propagating PPKTP, KDP with
the signal locked to the pump) the twins are strongly asymmetric: the
locked photon inherits the pump spectrum while its partner is a
sinc^2-shaped wave of bandwidth 1/dtau, more monochromatic than the
pump that produced it.  In the symmetric BBO case the twins are
indistinguishable, slightly longer and spectrally narrower than the
pump by sqrt(2).  Pair-production efficiencies close the comparison.

Writes spectra CSVs, a PNG and an efficiency table into demo_out/.
"""

import os

import numpy as np

from twinpdc import preset_geometry
from twinpdc.grids import save_columns_csv
from twinpdc.heralded import PairRegime, Which, effective_length_ratio, \
    pair_number, spectrum
from twinpdc.jsa import JsaMode, PumpPulse, build_jsa
from twinpdc.schmidt import optimal_pump_duration_closed_form

OUT = "demo_out"
os.makedirs(OUT, exist_ok=True)

CASES = {
    "ppktp_counter": 4.05,
    "kdp_asymmetric": 0.05,
    "bbo_symmetric": 0.147,
}

spectra = {}
for name, tp in CASES.items():
    geom = preset_geometry(name)
    pump = PumpPulse(tp, 0.01)
    grid = build_jsa(geom, pump, mode=JsaMode.EXACT_SINC_LINEARIZED)
    ax_s, s_s = spectrum(grid, Which.SIGNAL)
    ax_i, s_i = spectrum(grid, Which.IDLER)
    spectra[name] = (pump, ax_s, s_s, ax_i, s_i)
    save_columns_csv(os.path.join(OUT, f"spectra_{name}.csv"),
                     (f"spectra at T_p = {tp} ps",),
                     ("omega_rad_ps", "signal", "idler"),
                     (ax_s, s_s, np.interp(ax_s, ax_i, s_i)))

    n_pairs = pair_number(geom, pump, PairRegime.GENERAL_LINEARIZED)
    eff_len = effective_length_ratio(geom, pump)
    print(f"{name:<16} T_p={tp:<6g} pairs/pulse = {n_pairs:.3e} "
          f"(g = 0.01), effective-length factor = {eff_len:.3f}")

bbo = preset_geometry("bbo_symmetric")
tp_min = optimal_pump_duration_closed_form(bbo)[0]
n_sym = pair_number(bbo, PumpPulse(tp_min, 0.01), PairRegime.SYMMETRIC_MIN)
print(f"\nsymmetric matching at its optimum converts N/g^2 = "
      f"{n_sym / 1e-4:.4f} of a pair per pulse; the asymmetric routes "
      f"pay for purity with the reduced effective length above.")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, axes = plt.subplots(2, 3, figsize=(13, 6))
for col, (name, (pump, ax_s, s_s, ax_i, s_i)) in enumerate(spectra.items()):
    pump_spec = np.abs(pump.spectral_amplitude(ax_s)) ** 2
    top, bot = axes[0, col], axes[1, col]
    top.plot(ax_s, s_s / s_s.max(), "k-", label="signal")
    top.plot(ax_s, pump_spec / pump_spec.max(), "b:", label="pump")
    bot.plot(ax_i, s_i / s_i.max(), "k-", label="idler")
    for ax in (top, bot):
        ax.legend(fontsize=8)
        ax.set_xlabel("Omega [rad/ps]")
    lim = 6.0 / pump.duration_ps
    top.set_xlim(-lim, lim)
    window = min(ax_i[-1], 30 * np.pi / abs(preset_geometry(name).delta_tau))
    bot.set_xlim(-window, window)
    top.set_title(name)
fig.suptitle("heralded-photon spectra in the most separable regimes")
fig.tight_layout()
path = os.path.join(OUT, "heralded_spectra.png")
fig.savefig(path, dpi=110)
print(f"-> {path}")
