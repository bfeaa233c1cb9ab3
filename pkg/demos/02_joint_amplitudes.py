"""Joint spectral and temporal probability panels across pump durations.

For each source, |psi(O_s, O_i)|^2 and |phi(tbar_s, tbar_i)|^2 are shown
for a long pump (entangled, diagonal/anti-diagonal ridges), the optimal
duration (nearly separable), and an ultrashort pump (entangled again,
ridge along the phase-matching line O_s = -eta O_i).  The red ellipse is
the Gaussian-model iso-probability conic c_ss O_s^2 + 2 c_si O_s O_i +
c_ii O_i^2 = 1.

Writes PNG panels into demo_out/.
"""

import os

import numpy as np

from twinpdc import preset_geometry
from twinpdc.sweep import panel_study

OUT = "demo_out"
os.makedirs(OUT, exist_ok=True)

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

CASES = {
    "ppktp_counter": (60.0, 4.05, 0.2),
    "kdp_asymmetric": (5.0, 0.1, 0.01),
    "bbo_symmetric": (5.0, 0.147, 0.02),
}


def ellipse_points(c_ss, c_ii, c_si, n=400):
    """Parametric boundary of the unit iso-probability conic."""
    theta = np.linspace(0, 2 * np.pi, n)
    # scale each direction to the conic: r^2 (c_ss cos^2 + ...) = 1
    quad = (c_ss * np.cos(theta) ** 2 + 2 * c_si * np.cos(theta) * np.sin(theta)
            + c_ii * np.sin(theta) ** 2)
    r = 1.0 / np.sqrt(quad)
    return r * np.cos(theta), r * np.sin(theta)


for name, tps in CASES.items():
    geom = preset_geometry(name)
    panels = panel_study(geom, tps, grid_n=512)
    for p in panels:
        print(f"{name} T_p = {p.tp_ps:g} ps: kappa_exact = {p.kappa_exact:.4f}"
              f" (Gaussian {p.kappa_gaussian:.4f})  conic c_si = {p.c_si:+.4g}")
    if plt is None:
        continue

    fig, axes = plt.subplots(2, len(panels), figsize=(4 * len(panels), 7))
    for col, p in enumerate(panels):
        sg, tg = p.spectral, p.temporal
        prob = sg.probability()
        # zoom each panel onto the support
        ms = np.abs(prob).max(axis=1) > prob.max() * 1e-4
        mi = np.abs(prob).max(axis=0) > prob.max() * 1e-4
        ax = axes[0, col]
        ax.imshow(prob.T, origin="lower", aspect="auto", cmap="inferno",
                  extent=(sg.axis_s[0], sg.axis_s[-1],
                          sg.axis_i[0], sg.axis_i[-1]))
        ex, ey = ellipse_points(p.c_ss, p.c_ii, p.c_si)
        ax.plot(ex, ey, "r-", lw=0.8)
        ax.set_xlim(sg.axis_s[ms][0], sg.axis_s[ms][-1])
        ax.set_ylim(sg.axis_i[mi][0], sg.axis_i[mi][-1])
        ax.set_title(f"T_p = {p.tp_ps:g} ps, kappa = {p.kappa_exact:.3f}")
        ax.set_xlabel("Omega_s [rad/ps]")
        ax.set_ylabel("Omega_i [rad/ps]")

        tprob = tg.probability()
        ms = np.abs(tprob).max(axis=1) > tprob.max() * 1e-4
        mi = np.abs(tprob).max(axis=0) > tprob.max() * 1e-4
        ax = axes[1, col]
        ax.imshow(tprob.T, origin="lower", aspect="auto", cmap="viridis",
                  extent=(tg.axis_s[0], tg.axis_s[-1],
                          tg.axis_i[0], tg.axis_i[-1]))
        ax.set_xlim(tg.axis_s[ms][0], tg.axis_s[ms][-1])
        ax.set_ylim(tg.axis_i[mi][0], tg.axis_i[mi][-1])
        ax.set_xlabel("tbar_s [ps]")
        ax.set_ylabel("tbar_i [ps]")
    fig.suptitle(f"{name}: joint spectral (top) and temporal (bottom) "
                 f"probability")
    fig.tight_layout()
    path = os.path.join(OUT, f"panels_{name}.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    print(f"  -> {path}")
