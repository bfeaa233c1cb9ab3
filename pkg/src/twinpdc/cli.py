"""Command-line front end: declarative scenario configs, deterministic outputs.

``twinpdc run scenario.cfg`` parses a flat key = value config with
[crystal], [pump] and [run] sections, dispatches to the computation
modules and writes CSV and/or binary artifacts atomically, together
with a checksum manifest.  ``twinpdc preset NAME --emit-config`` prints
a ready-made config for the three reference sources.  Identical configs
produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dispersion import CrystalConfig, Species
from .errors import ComputeError, ConfigError, TwinPdcError, UnknownPreset
from .grids import save_columns_csv
from .heralded import Which, spectrum
from .jsa import GAMMA_FWHM, GridSpec, JsaMode, PumpPulse, build_jsa
from .phasematch import Geometry, solve_phase_matching
from .presets import preset, preset_geometry
from .schmidt import SchmidtReport, schmidt_exact, schmidt_gaussian
from .sweep import panel_study, sweep_pump_duration, sweep_signal_wavelength, \
    write_panels_csv, write_sweep_lambda_csv, write_sweep_tp_csv
from .temporal import coincidence_marginal, to_temporal

RUN_MODES = ("jsa", "temporal", "schmidt", "sweep-tp", "sweep-lambda",
             "spectra", "panels")


@dataclass
class ScenarioConfig:
    """Validated scenario: crystal block, pump block, run block."""

    crystal: CrystalConfig
    pump_wavelength_nm: float
    gain: float
    duration_ps: Optional[float]
    tp_range: Optional[tuple]          # (min, max, points) for sweep-tp
    mode: str
    geometry: Geometry
    grid_n: int = 1024
    gamma: float = GAMMA_FWHM
    out_dir: str = "out"
    workers: int = 1
    fmt: str = "csv"
    jsa_mode: JsaMode = JsaMode.EXACT_SINC_LINEARIZED
    lambda_range: Optional[tuple] = None   # (min, max, points) sweep-lambda
    tp_list: tuple = ()                    # panels
    raw_text: str = ""

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.raw_text.encode()).hexdigest()[:16]


def _require(cfg: configparser.ConfigParser, section: str) -> None:
    if not cfg.has_section(section):
        raise ConfigError(f"missing [{section}] block")


def _get(cfg, section, key, cast, default=None, required=False):
    if not cfg.has_option(section, key):
        if required:
            raise ConfigError(f"[{section}] missing required key '{key}'")
        return default
    raw = cfg.get(section, key)
    try:
        if cast is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return cast(raw)
    except ValueError:
        raise ConfigError(f"[{section}] key '{key}': cannot parse {raw!r}")


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario config from its text."""
    cfg = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cfg.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax: {exc}") from None

    for section in ("crystal", "pump", "run"):
        _require(cfg, section)

    species_name = _get(cfg, "crystal", "species", str, required=True).upper()
    try:
        species = Species[species_name]
    except KeyError:
        raise ConfigError(f"[crystal] unknown species {species_name!r}")
    crystal = CrystalConfig(
        species=species,
        length_mm=_get(cfg, "crystal", "length_mm", float, required=True),
        tuning_angle_deg=_get(cfg, "crystal", "tuning_angle_deg", float, 90.0),
        poling_period_nm=_get(cfg, "crystal", "poling_period_nm", float),
        qpm_order=_get(cfg, "crystal", "qpm_order", int, 1),
    )

    mode = _get(cfg, "run", "mode", str, required=True)
    if mode not in RUN_MODES:
        raise ConfigError(f"[run] mode must be one of {RUN_MODES}, got {mode!r}")

    geometry_name = _get(cfg, "run", "geometry", str,
                         "counter" if crystal.poling_period_nm else "co")
    try:
        geometry = {"counter": Geometry.COUNTER_PROPAGATING,
                    "co": Geometry.CO_PROPAGATING}[geometry_name]
    except KeyError:
        raise ConfigError(f"[run] geometry must be 'counter' or 'co'")

    duration = _get(cfg, "pump", "duration_ps", float)
    tp_range = None
    if cfg.has_option("pump", "tp_min_ps"):
        tp_range = (_get(cfg, "pump", "tp_min_ps", float, required=True),
                    _get(cfg, "pump", "tp_max_ps", float, required=True),
                    _get(cfg, "pump", "tp_points", int, 60))
    if mode == "sweep-tp":
        if tp_range is None:
            raise ConfigError("[pump] sweep-tp needs tp_min_ps/tp_max_ps")
    elif mode != "sweep-lambda" and duration is None:
        raise ConfigError("[pump] missing required key 'duration_ps'")

    lambda_range = None
    if cfg.has_option("run", "lambda_min_nm"):
        lambda_range = (_get(cfg, "run", "lambda_min_nm", float, required=True),
                        _get(cfg, "run", "lambda_max_nm", float, required=True),
                        _get(cfg, "run", "lambda_points", int, 60))
    if mode == "sweep-lambda" and lambda_range is None:
        raise ConfigError("[run] sweep-lambda needs lambda_min_nm/lambda_max_nm")

    tp_list = ()
    if cfg.has_option("run", "tp_list_ps"):
        tp_list = tuple(float(x) for x in
                        cfg.get("run", "tp_list_ps").split(","))
    if mode == "panels" and not tp_list:
        raise ConfigError("[run] panels needs tp_list_ps")

    jsa_mode_name = _get(cfg, "run", "jsa_mode", str, "exact_sinc_linearized")
    try:
        jsa_mode = JsaMode(jsa_mode_name)
    except ValueError:
        raise ConfigError(f"[run] unknown jsa_mode {jsa_mode_name!r}")

    return ScenarioConfig(
        crystal=crystal,
        pump_wavelength_nm=_get(cfg, "pump", "wavelength_nm", float,
                                required=True),
        gain=_get(cfg, "pump", "gain", float, 1e-2),
        duration_ps=duration,
        tp_range=tp_range,
        mode=mode,
        geometry=geometry,
        grid_n=_get(cfg, "run", "grid_n", int, 1024),
        gamma=_get(cfg, "run", "gamma", float, GAMMA_FWHM),
        out_dir=_get(cfg, "run", "out_dir", str, "out"),
        workers=_get(cfg, "run", "workers", int, 1),
        fmt=_get(cfg, "run", "format", str, "csv"),
        jsa_mode=jsa_mode,
        lambda_range=lambda_range,
        tp_list=tp_list,
        raw_text=text,
    )


def emit_config(sc: ScenarioConfig) -> str:
    """Re-emit a parseable config equivalent to the parsed scenario."""
    out = io.StringIO()
    out.write("[crystal]\n")
    out.write(f"species = {sc.crystal.species.value}\n")
    out.write(f"length_mm = {sc.crystal.length_mm:g}\n")
    out.write(f"tuning_angle_deg = {sc.crystal.tuning_angle_deg:g}\n")
    if sc.crystal.poling_period_nm is not None:
        out.write(f"poling_period_nm = {sc.crystal.poling_period_nm:g}\n")
        out.write(f"qpm_order = {sc.crystal.qpm_order}\n")
    out.write("\n[pump]\n")
    out.write(f"wavelength_nm = {sc.pump_wavelength_nm:g}\n")
    if sc.duration_ps is not None:
        out.write(f"duration_ps = {sc.duration_ps:g}\n")
    if sc.tp_range is not None:
        out.write(f"tp_min_ps = {sc.tp_range[0]:g}\n")
        out.write(f"tp_max_ps = {sc.tp_range[1]:g}\n")
        out.write(f"tp_points = {sc.tp_range[2]}\n")
    out.write(f"gain = {sc.gain:g}\n")
    out.write("\n[run]\n")
    out.write(f"mode = {sc.mode}\n")
    out.write(f"geometry = {'counter' if sc.geometry is Geometry.COUNTER_PROPAGATING else 'co'}\n")
    out.write(f"grid_n = {sc.grid_n}\n")
    out.write(f"gamma = {sc.gamma:g}\n")
    out.write(f"jsa_mode = {sc.jsa_mode.value}\n")
    out.write(f"out_dir = {sc.out_dir}\n")
    out.write(f"workers = {sc.workers}\n")
    out.write(f"format = {sc.fmt}\n")
    if sc.lambda_range is not None:
        out.write(f"lambda_min_nm = {sc.lambda_range[0]:g}\n")
        out.write(f"lambda_max_nm = {sc.lambda_range[1]:g}\n")
        out.write(f"lambda_points = {sc.lambda_range[2]}\n")
    if sc.tp_list:
        out.write("tp_list_ps = " + ", ".join(f"{t:g}" for t in sc.tp_list) + "\n")
    return out.getvalue()


class _Artifacts:
    """Atomic artifact writing plus the checksum manifest."""

    def __init__(self, out_dir: str, config_hash: str):
        self.out_dir = out_dir
        self.config_hash = config_hash
        self.entries = []
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def write(self, name: str, writer) -> None:
        """writer(tmp_path) produces the file; committed by rename."""
        final = self.path(name)
        fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=".tmp-" + name)
        os.close(fd)
        try:
            writer(tmp)
            os.replace(tmp, final)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        with open(final, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        self.entries.append((name, digest, os.path.getsize(final)))

    def finalize(self) -> None:
        manifest = self.path("manifest.csv")
        with open(manifest + ".tmp", "w") as fh:
            fh.write(f"# twinpdc manifest, config {self.config_hash}\n")
            fh.write("artifact,sha256,bytes\n")
            for name, digest, size in sorted(self.entries):
                fh.write(f"{name},{digest},{size}\n")
        os.replace(manifest + ".tmp", manifest)


def _solved_geometry(sc: ScenarioConfig):
    from .errors import AmbiguousMatch
    try:
        return solve_phase_matching(sc.crystal, sc.pump_wavelength_nm,
                                    sc.geometry)
    except AmbiguousMatch as exc:
        target = 2.0 * sc.pump_wavelength_nm
        return min(exc.candidates,
                   key=lambda g: abs(g.signal.wavelength_nm - target))


def _write_grid(art: _Artifacts, stem: str, grid, fmt: str) -> None:
    if fmt == "bin":
        art.write(stem + ".bin", grid.save_binary)
    else:
        art.write(stem + ".csv", lambda p: grid.save_csv(
            p, (f"config: {art.config_hash}",)))


def run_scenario(sc: ScenarioConfig) -> list:
    """Execute one scenario; returns the artifact manifest entries."""
    art = _Artifacts(sc.out_dir, sc.config_hash)
    header = (f"config: {sc.config_hash}",)
    try:
        geom = _solved_geometry(sc)
        pump = PumpPulse(sc.duration_ps, sc.gain) if sc.duration_ps else None
        grid_spec = GridSpec(sc.grid_n, sc.grid_n)

        if sc.mode == "jsa":
            grid = build_jsa(geom, pump, grid_spec, sc.jsa_mode, sc.gamma)
            _write_grid(art, "jsa", grid, sc.fmt)

        elif sc.mode == "temporal":
            grid = build_jsa(geom, pump, grid_spec, sc.jsa_mode, sc.gamma)
            temporal = to_temporal(grid)
            _write_grid(art, "jsa", grid, sc.fmt)
            _write_grid(art, "temporal", temporal, sc.fmt)
            delta_t, marginal = coincidence_marginal(temporal)
            art.write("coincidence_marginal.csv", lambda p: save_columns_csv(
                p, (f"schema: twinpdc.marginal v1", *header),
                ("delta_t_ps", "g2bar"), (delta_t, marginal)))

        elif sc.mode == "schmidt":
            grid = build_jsa(geom, pump, grid_spec, sc.jsa_mode, sc.gamma)
            report = schmidt_exact(grid)
            report.kappa_gaussian = schmidt_gaussian(geom, pump, sc.gamma)
            art.write("schmidt.csv", lambda p: _write_text(
                p, "# schema: twinpdc.schmidt v1\n"
                   f"# config: {sc.config_hash}\n"
                   + SchmidtReport.csv_header() + "\n"
                   + report.to_csv_row() + "\n"))
            art.write("schmidt.json", lambda p: _write_text(
                p, report.to_record() + "\n"))

        elif sc.mode == "sweep-tp":
            lo, hi, n = sc.tp_range
            tps = np.geomspace(lo, hi, n)
            rows = sweep_pump_duration(geom, tps, sc.gamma, sc.gain,
                                       exact=True, grid_n=sc.grid_n,
                                       workers=sc.workers)
            art.write("sweep_tp.csv",
                      lambda p: write_sweep_tp_csv(p, rows, header))

        elif sc.mode == "sweep-lambda":
            lo, hi, n = sc.lambda_range
            lams = np.linspace(lo, hi, n)
            rows = sweep_signal_wavelength(sc.crystal, sc.pump_wavelength_nm,
                                           lams, sc.geometry, sc.gamma)
            art.write("sweep_lambda.csv",
                      lambda p: write_sweep_lambda_csv(p, rows, header))

        elif sc.mode == "spectra":
            grid = build_jsa(geom, pump, grid_spec, sc.jsa_mode, sc.gamma)
            for which, stem in ((Which.SIGNAL, "spectrum_signal"),
                                (Which.IDLER, "spectrum_idler")):
                axis, values = spectrum(grid, which)
                art.write(stem + ".csv", lambda p, a=axis, v=values:
                          save_columns_csv(p, ("schema: twinpdc.spectrum v1",
                                               *header),
                                           ("omega_rad_ps", "spectral_density"),
                                           (a, v)))

        elif sc.mode == "panels":
            panels = panel_study(geom, sc.tp_list, sc.gamma, sc.gain,
                                 sc.grid_n, sc.jsa_mode)
            for p in panels:
                if p.spectral is not None:
                    _write_grid(art, f"panel_{p.index}_spectral", p.spectral,
                                sc.fmt)
                if p.temporal is not None:
                    _write_grid(art, f"panel_{p.index}_temporal", p.temporal,
                                sc.fmt)
            art.write("panels.csv",
                      lambda p: write_panels_csv(p, panels, header))

        else:
            raise ConfigError(f"unhandled mode {sc.mode}")
    except ConfigError:
        raise
    except TwinPdcError as exc:
        raise ComputeError(f"{sc.mode}: {exc}") from exc

    art.finalize()
    return art.entries


def _write_text(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _error_record(exc: Exception) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc)})


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="twinpdc",
        description="Twin-photon joint amplitudes, Schmidt purity and "
                    "heralding efficiency for parametric down-conversion.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario config")
    p_run.add_argument("config", help="path to the scenario config file")
    p_run.add_argument("--out", help="output directory override")
    p_run.add_argument("--grid-n", type=int, help="grid points per axis")
    p_run.add_argument("--gamma", type=float,
                       help="sinc-to-Gaussian width parameter")
    p_run.add_argument("--workers", type=int, help="parallel sweep workers")
    p_run.add_argument("--format", choices=("csv", "bin"),
                       help="grid artifact format")
    p_run.add_argument("--echo-config", action="store_true",
                       help="re-emit the parsed config and exit")

    p_preset = sub.add_parser("preset", help="show a reference configuration")
    p_preset.add_argument("name", help="ppktp_counter | kdp_asymmetric | "
                                       "bbo_symmetric")
    p_preset.add_argument("--emit-config", action="store_true",
                          help="print a runnable scenario config")

    args = parser.parse_args(argv)

    try:
        if args.command == "preset":
            spec = preset(args.name)
            if args.emit_config:
                sys.stdout.write(preset_config_text(args.name))
            else:
                geom = preset_geometry(args.name)
                sys.stdout.write(
                    f"{spec.name}: {spec.description}\n"
                    f"  lambda_p = {spec.pump_wavelength_nm} nm -> "
                    f"lambda_s = {geom.signal.wavelength_nm:.1f} nm, "
                    f"lambda_i = {geom.idler.wavelength_nm:.1f} nm\n"
                    f"  tau_s = {geom.tau_s:.4g} ps, tau_i = "
                    f"{geom.tau_i:.4g} ps, eta = {geom.eta:.4g}\n")
            return 0

        with open(args.config) as fh:
            text = fh.read()
        sc = parse_config(text)
        if args.out:
            sc.out_dir = args.out
        if args.grid_n:
            sc.grid_n = args.grid_n
        if args.gamma:
            sc.gamma = args.gamma
        if args.workers:
            sc.workers = args.workers
        if args.format:
            sc.fmt = args.format
        if args.echo_config:
            sys.stdout.write(emit_config(sc))
            return 0
        entries = run_scenario(sc)
        for name, digest, size in sorted(entries):
            sys.stdout.write(f"{name}  {digest[:12]}  {size} B\n")
        return 0
    except ConfigError as exc:
        sys.stderr.write(_error_record(exc) + "\n")
        return 2
    except UnknownPreset as exc:
        sys.stderr.write(_error_record(exc) + "\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(_error_record(exc) + "\n")
        return 2
    except (ComputeError, TwinPdcError) as exc:
        sys.stderr.write(_error_record(exc) + "\n")
        return 3


def preset_config_text(name: str) -> str:
    """A runnable scenario config for a named preset."""
    spec = preset(name)
    sc = ScenarioConfig(
        crystal=spec.crystal,
        pump_wavelength_nm=spec.pump_wavelength_nm,
        gain=spec.default_gain,
        duration_ps=spec.default_duration_ps,
        tp_range=None,
        mode="schmidt",
        geometry=spec.geometry,
        out_dir=f"out_{name}",
    )
    return emit_config(sc)


if __name__ == "__main__":
    sys.exit(main())
