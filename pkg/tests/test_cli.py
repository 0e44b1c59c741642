import json
import subprocess
import sys

import numpy as np
import pytest

from homcavity import InterferometerConfig, sweep
from homcavity.cli import ConfigError, RunConfig, main, parse_config_text
from homcavity.io import read_curve_csv

from conftest import PS

RES = ["--idler_L_mm", "0.404838", "--idler_R", "0.7"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_platform_json(capsys):
    code, out, _ = run(capsys, "platform", *RES, "--delay_ps", "0.66733")
    assert code == 0
    doc = json.loads(out)
    assert doc["platform"] == pytest.approx(0.176471, abs=1e-6)
    assert doc["closed_form"] == pytest.approx(0.09 / 0.51, rel=1e-11)


@pytest.mark.parametrize("bits, output, pattern", [((0, 0), 0, "SY"), ((1, 0), 1, "NS")])
def test_xor_json(capsys, bits, output, pattern):
    code, out, _ = run(capsys, "xor", "--bit_idler", str(bits[0]), "--bit_signal", str(bits[1]),
                       "--L_res_mm", "0.404838", "--L_anti_mm", "0.4050447", "--idler_R", "0.7",
                       "--samples", "801")
    assert code == 0
    doc = json.loads(out)
    assert (doc["output"], doc["pattern"]) == (output, pattern)


def test_sweep_csv_round_trip(capsys, profile):
    code, out, _ = run(capsys, "sweep", "--delta_min_ps", "-0.2", "--delta_max_ps", "0.2", "--samples", "41")
    assert code == 0
    assert out.splitlines()[0] == "delay_ps,rate"
    curve = read_curve_csv(out)
    ref = sweep(InterferometerConfig(profile), -0.2 * PS, 0.2 * PS, 41)
    np.testing.assert_allclose(curve.delays, ref.delays, rtol=1e-11, atol=1e-25)
    np.testing.assert_allclose(curve.rates, ref.rates, rtol=1e-11, atol=1e-15)


def test_output_byte_identical(tmp_path):
    args = ["sweep", *RES, "--signal_L_mm", "0.4050447", "--signal_R", "0.7",
            "--delta_min_ps", "-2", "--delta_max_ps", "8", "--samples", "301"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" not in a.read_bytes()


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# one resonant cavity\nmode = platform\nidler_L_mm = 0.404838\nidler_R = 0.5\n"
                   "delay_ps = 0.66733\n")
    code, out, _ = run(capsys, "--config", str(cfg))
    assert code == 0 and json.loads(out)["platform"] == pytest.approx(0.25 / 0.75, rel=1e-6)
    code, out, _ = run(capsys, "--config", str(cfg), "--idler_R", "0.7")
    assert code == 0 and json.loads(out)["platform"] == pytest.approx(0.09 / 0.51, rel=1e-6)


def test_cavity_and_reflectance_sweeps(capsys):
    code, out, _ = run(capsys, "cavity-sweep", "--idler_R", "0.7", "--L_min_mm", "0.404", "--L_max_mm", "0.405",
                       "--samples", "5", "--delay_ps", "0.66733")
    assert code == 0
    rates = [float(line.split(",")[1]) for line in out.splitlines()[1:]]
    np.testing.assert_allclose(rates, 0.09 / 0.51, rtol=1e-6)
    code, out, _ = run(capsys, "reflectance-sweep", "--idler_L_mm", "0.404838", "--R_min", "0.1",
                       "--R_max", "0.9", "--samples", "9", "--delay_ps", "0.66733")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "reflectance,rate" and len(lines) == 10


def test_regions_json(capsys):
    code, out, _ = run(capsys, "regions", *RES, "--delta_min_ps", "-1", "--delta_max_ps", "4.5",
                       "--samples", "1001")
    assert code == 0
    regions = json.loads(out)["regions"]
    assert [r["order"] for r in regions] == [1, 2, 3, 4]
    assert {r["kind"] for r in regions} == {"Valley"}


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", *RES, "--samples", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["max_relative_error"] < 1e-6


def test_verify_perturbation_self_test(capsys):
    code, out, err = run(capsys, "verify", *RES, "--samples", "10", "--perturb", "1e-5")
    assert code == 2
    assert json.loads(out)["passed"] is False
    assert "mismatch" in err


@pytest.mark.parametrize("argv", [
    ["platform", "--idler_L_mm", "0.4", "--idler_R", "1.2", "--delay_ps", "0.5"],
    ["platform", "--idler_L_mm", "0.4"],
    ["sweep", "--delta_min_ps", "abc", "--delta_max_ps", "1", "--samples", "3"],
    ["sweep", "--delta_min_ps", "1", "--delta_max_ps", "0", "--samples", "3"],
    [],
    ["bogus"],
])
def test_config_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1


def test_undersampled_exits_2(capsys):
    code, _, err = run(capsys, "regions", *RES, "--delta_min_ps", "-1", "--delta_max_ps", "4", "--samples", "50")
    assert code == 2 and "sigma" in err


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("mode = sweep\ncolour = red\n")
    code, _, err = run(capsys, "--config", str(cfg))
    assert code == 1 and "colour" in err


def test_parse_config_text():
    assert parse_config_text("a = 1 # note\n\n# skip\nb-c=2\n") == {"a": "1", "b_c": "2"}
    with pytest.raises(ConfigError):
        parse_config_text("just words\n")


def test_default_pump_is_half_wavelength():
    run_cfg = RunConfig.from_values({"mode": "verify", "lambda_nm": "800"})
    assert run_cfg.profile().lambda_pump == pytest.approx(400e-9)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "homcavity", "platform", *RES, "--delay_ps", "0.66733"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["delay_ps"] == 0.66733
