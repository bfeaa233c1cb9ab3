import json
import os

import numpy as np
import pytest

from twinpdc.cli import emit_config, main, parse_config, preset_config_text
from twinpdc.errors import ConfigError
from twinpdc.grids import AmplitudeGrid


def _run(argv):
    return main(argv)


def _write(tmp_path, text, name="scenario.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


BASE = """
[crystal]
species = KTP
length_mm = 10
tuning_angle_deg = 90
poling_period_nm = 800

[pump]
wavelength_nm = 821.4
duration_ps = 4.05
gain = 0.01

[run]
mode = schmidt
geometry = counter
grid_n = 256
out_dir = {out}
"""


def test_run_schmidt_scenario(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = _write(tmp_path, BASE.format(out=out))
    assert _run(["run", cfg]) == 0
    assert (out / "schmidt.csv").exists()
    assert (out / "schmidt.json").exists()
    manifest = (out / "manifest.csv").read_text().splitlines()
    assert manifest[1] == "artifact,sha256,bytes"
    assert len(manifest) == 4  # comment + header + 2 artifacts
    payload = json.loads((out / "schmidt.json").read_text())
    # Table-1 scenario: kappa_G =~ 1.02 and exact kappa in [1.0, 1.1]
    assert 1.0 <= payload["kappa_exact"] <= 1.1
    assert payload["kappa_gaussian"] == pytest.approx(1.02, abs=5e-3)


def test_deterministic_outputs(tmp_path):
    cfg = _write(tmp_path, BASE.format(out=tmp_path / "o1"))
    assert _run(["run", cfg]) == 0
    assert _run(["run", cfg, "--out", str(tmp_path / "o2")]) == 0
    a = (tmp_path / "o1" / "schmidt.csv").read_bytes()
    b = (tmp_path / "o2" / "schmidt.csv").read_bytes()
    assert a == b


def test_missing_block_is_config_error(tmp_path, capsys):
    bad = "[crystal]\nspecies = KTP\nlength_mm = 10\n\n[run]\nmode = schmidt\n"
    cfg = _write(tmp_path, bad)
    code = _run(["run", cfg])
    captured = capsys.readouterr()
    assert code == 2
    record = json.loads(captured.err.strip())
    assert record["error"] == "ConfigError"
    assert "pump" in record["message"]


def test_bad_mode_rejected(tmp_path):
    text = BASE.format(out=tmp_path).replace("mode = schmidt", "mode = wat")
    with pytest.raises(ConfigError):
        parse_config(text)


def test_unknown_preset(capsys):
    assert _run(["preset", "nope"]) == 2
    record = json.loads(capsys.readouterr().err.strip())
    assert record["error"] == "UnknownPreset"


def test_preset_emit_and_echo_roundtrip(tmp_path, capsys):
    for name in ("ppktp_counter", "kdp_asymmetric", "bbo_symmetric"):
        text = preset_config_text(name)
        sc = parse_config(text)
        again = parse_config(emit_config(sc))
        assert emit_config(sc) == emit_config(again)


def test_temporal_mode_artifacts(tmp_path):
    out = tmp_path / "out"
    text = BASE.format(out=out).replace("mode = schmidt", "mode = temporal")
    cfg = _write(tmp_path, text)
    assert _run(["run", cfg]) == 0
    for name in ("jsa.csv", "temporal.csv", "coincidence_marginal.csv",
                 "manifest.csv"):
        assert (out / name).exists()


def test_binary_format(tmp_path):
    out = tmp_path / "out"
    text = BASE.format(out=out).replace("mode = schmidt", "mode = jsa")
    cfg = _write(tmp_path, text)
    assert _run(["run", cfg, "--format", "bin"]) == 0
    grid = AmplitudeGrid.load_binary(out / "jsa.bin")
    assert grid.n_s == 256
    mid = abs(grid.values[128, 128])
    assert mid == pytest.approx(0.01 * 4.05 / np.sqrt(2 * np.pi), rel=1e-9)


def test_spectra_mode(tmp_path):
    out = tmp_path / "out"
    text = BASE.format(out=out).replace("mode = schmidt", "mode = spectra")
    cfg = _write(tmp_path, text)
    assert _run(["run", cfg]) == 0
    lines = (out / "spectrum_signal.csv").read_text().splitlines()
    assert lines[0].startswith("# schema: twinpdc.spectrum")
    assert lines[2].count(",") == 1


def test_sweep_tp_mode(tmp_path):
    out = tmp_path / "out"
    text = BASE.format(out=out).replace("mode = schmidt", "mode = sweep-tp")
    text = text.replace("duration_ps = 4.05",
                        "tp_min_ps = 2\ntp_max_ps = 10\ntp_points = 4")
    cfg = _write(tmp_path, text)
    assert _run(["run", cfg]) == 0
    lines = (out / "sweep_tp.csv").read_text().splitlines()
    assert len(lines) == 2 + 1 + 4  # comments + column header + rows


def test_sweep_lambda_mode(tmp_path):
    out = tmp_path / "out"
    text = """
[crystal]
species = BBO
length_mm = 10
tuning_angle_deg = 28.8

[pump]
wavelength_nm = 757

[run]
mode = sweep-lambda
geometry = co
lambda_min_nm = 1400
lambda_max_nm = 1600
lambda_points = 3
out_dir = {out}
""".format(out=out)
    cfg = _write(tmp_path, text)
    assert _run(["run", cfg]) == 0
    lines = (out / "sweep_lambda.csv").read_text().splitlines()
    assert len(lines) == 2 + 1 + 3


def test_panels_mode(tmp_path):
    out = tmp_path / "out"
    text = BASE.format(out=out).replace("mode = schmidt", "mode = panels")
    text = text.replace("grid_n = 256", "grid_n = 128\ntp_list_ps = 4.05, 60")
    cfg = _write(tmp_path, text)
    assert _run(["run", cfg]) == 0
    assert (out / "panels.csv").exists()
    assert (out / "panel_0_spectral.csv").exists()
    assert (out / "panel_1_temporal.csv").exists()


def test_echo_config_flag(tmp_path, capsys):
    cfg = _write(tmp_path, BASE.format(out=tmp_path / "out"))
    assert _run(["run", cfg, "--echo-config"]) == 0
    echoed = capsys.readouterr().out
    sc = parse_config(echoed)
    assert sc.mode == "schmidt"
    assert sc.crystal.poling_period_nm == 800.0
    assert not (tmp_path / "out").exists()


def test_manifest_checksums_verify(tmp_path):
    import hashlib
    out = tmp_path / "out"
    cfg = _write(tmp_path, BASE.format(out=out))
    assert _run(["run", cfg]) == 0
    for line in (out / "manifest.csv").read_text().splitlines()[2:]:
        name, digest, size = line.split(",")
        blob = (out / name).read_bytes()
        assert hashlib.sha256(blob).hexdigest() == digest
        assert len(blob) == int(size)
