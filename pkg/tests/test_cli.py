from __future__ import annotations

import json

import pytest

from padenoise.cli import ConfigError, ExperimentConfig, main, parse_N, read_config_file


def _files(d):
    return {p.relative_to(d).as_posix(): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}


def test_parse_N():
    assert parse_N("30,33,36") == [30, 33, 36]
    assert parse_N("2:10:4") == [2, 6, 10]
    assert parse_N("5, 2:3") == [2, 3, 5]
    with pytest.raises(ConfigError):
        parse_N("0")


def test_config_file_and_overrides(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("# kink run\nfunction = binomial\nM = 2\nepsilon = 1e-15\n")
    pairs = read_config_file(cfg_file)
    cfg = ExperimentConfig().updated(pairs)
    assert cfg.M == 2 and cfg.epsilon == "1e-15"
    with pytest.raises(ConfigError):
        ExperimentConfig().updated({"bogus": 1})


def test_dry_run_counts(capsys):
    assert main(["slope", "--dry-run", "--realizations", "3"]) == 0
    assert "21 task(s)" in capsys.readouterr().out
    assert main(["poles", "--dry-run", "--N", "2:11"]) == 0
    assert "10 task(s)" in capsys.readouterr().out


def test_config_errors_exit_2(capsys):
    assert main(["application", "--function", "phi36", "--dry-run"]) == 2
    assert main(["kink", "--set", "nope=1", "--dry-run"]) == 2
    assert main(["kink", "--set", "novalue", "--dry-run"]) == 2


def test_rerun_is_byte_identical(tmp_path):
    argv = ["kink", "--N", "2:16", "--epsilon", "1e-8", "--realizations", "2", "--seed", "4"]
    assert main(argv + ["--out", str(tmp_path / "a")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b")]) == 0
    a, b = _files(tmp_path / "a"), _files(tmp_path / "b")
    assert a == b and "breakdown.csv" in a and "kink.svg" in a
    text = a["breakdown.csv"].decode()
    assert "# seed: 4" in text and "epsilon,N_c_median,N_c_min,N_c_max" in text


def test_manifest_reproduces_run(tmp_path):
    assert main(["capacity", "--N", "4:10", "--out", str(tmp_path / "a")]) == 0
    manifest = tmp_path / "a" / "manifest.json"
    data = json.loads(manifest.read_text())
    assert data["command"] == "capacity" and data["failures"] == {}
    assert main(["capacity", "--config", str(manifest), "--out", str(tmp_path / "b")]) == 0
    assert _files(tmp_path / "a") == _files(tmp_path / "b")


def test_jobs_match_serial(tmp_path):
    argv = ["kink", "--N", "2:14", "--epsilon", "1e-8", "--realizations", "2"]
    assert main(argv + ["--out", str(tmp_path / "s")]) == 0
    assert main(argv + ["--jobs", "2", "--out", str(tmp_path / "p")]) == 0
    s, p = _files(tmp_path / "s"), _files(tmp_path / "p")
    assert s["breakdown.csv"] == p["breakdown.csv"]


def test_env_out_dir_and_outputs(out_dir, capsys):
    assert main(["poles", "--N", "10,12", "--digits", "12", "--set", "formats=csv"]) == 0
    csv = (out_dir / "poles" / "poles_N12.csv").read_text()
    assert "re,im,residue_mag,nearest_zero_dist,classification" in csv
    assert not (out_dir / "poles" / "poles.svg").exists()
    assert main(["variance", "--set", "m_values=5,10", "--set", "mc_realizations=500"]) == 0
    assert (out_dir / "variance" / "variance.csv").exists()
    assert main(["zinf", "--M", "2"]) == 0
    assert "0.41421356" in capsys.readouterr().out


def test_failed_task_exit_code(tmp_path):
    short = tmp_path / "short.txt"
    short.write_text("1\n-1/9\n5/81\n-65/729\n")
    argv = ["kink", "--function", "file", "--set", f"series_file={short}", "--N", "2:6",
            "--realizations", "2", "--out", str(tmp_path / "o")]
    assert main(argv) == 1
    data = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert len(data["failures"]) == 2


def test_application_zero_noise_control(tmp_path, capsys):
    assert main(["application", "--eps-grid", "0", "--N", "2:10", "--out", str(tmp_path)]) == 0
    assert "no breakdown detected" in capsys.readouterr().out
    rows = (tmp_path / "breakdown.csv").read_text().splitlines()
    assert rows[-1].startswith("0,,")
