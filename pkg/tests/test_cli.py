import csv
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from charlab import io
from charlab.cli import main, run, validate_config, ConfigError
from charlab.solutions import eval_wave, make_simple_wave, sample_field, sine_profile

CONFIGS = Path(__file__).resolve().parent.parent / "demos" / "configs"


def _load(name):
    return json.loads((CONFIGS / name).read_text())


class TestSchema:
    def test_unknown_key_rejected(self, tmp_path):
        cfg = _load("simulate_constant.json")
        cfg["tolerances"]["drfit"] = 1e-3
        assert run(cfg, tmp_path) == 2
        err = json.loads((tmp_path / "error.json").read_text())
        assert err["kind"] == "schema" and err["exit_code"] == 2

    def test_missing_required(self):
        with pytest.raises(ConfigError):
            validate_config({"command": "simulate", "domain": {}})

    def test_command_mismatch(self, tmp_path):
        code = main(["trace", "--config", str(CONFIGS / "simulate_constant.json"), "--out", str(tmp_path)])
        assert code == 2

    def test_unreadable_config(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2

    @pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.json")))
    def test_shipped_configs_validate(self, name):
        validate_config(_load(name))


class TestExitCodes:
    def test_constant_simulate(self, tmp_path):
        assert run(_load("simulate_constant.json"), tmp_path) == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["invariant_drift"] == 0.0 and report["h_range"] == 0.0
        assert not (tmp_path / "error.json").exists()

    def test_xi_u_fails_with_minus_h(self, tmp_path):
        cfg = _load("verify_xi_u.json")
        assert run(cfg, tmp_path) == 1
        wave = make_simple_wave(1, 0.0, sine_profile(1.0, 0.1))
        with open(tmp_path / "residuals.csv") as fh:
            rows = [r for r in csv.DictReader(fh) if r["check"].startswith("eigenvalue-coefficient")]
        assert rows
        for r in rows[:20]:
            h = eval_wave(wave, float(r["x"]), float(r["t"])).h
            assert float(r["value"]) == pytest.approx(-h, abs=1e-12)

    def test_numerical_failure(self, tmp_path):
        cfg = _load("simulate_gaussian_fv.json")
        cfg["solver"] = "moc"
        cfg["domain"]["dt"] = 1.0
        assert run(cfg, tmp_path) == 3
        assert json.loads((tmp_path / "error.json").read_text())["kind"] == "numerical"

    def test_past_breaking_is_numerical(self, tmp_path):
        cfg = _load("exact_sine.json")
        cfg["domain"]["t_end"] = 10.0
        assert run(cfg, tmp_path) == 3

    def test_stale_error_removed(self, tmp_path):
        (tmp_path / "error.json").write_text("{}")
        assert run(_load("simulate_constant.json"), tmp_path) == 0
        assert not (tmp_path / "error.json").exists()

    def test_tolerance_scale(self, tmp_path):
        cfg = _load("verify_v1.json")
        assert run(cfg, tmp_path / "a") == 0
        assert run(cfg, tmp_path / "b", tolerance_scale=1e-12) == 1


class TestRoundTrip:
    def test_field_csv_exact(self, tmp_path, sine_wave):
        F = sample_field(sine_wave, np.linspace(0, 1, 7), np.linspace(0, 0.5, 4))
        path = io.write_field_csv(tmp_path / "f.csv", F)
        G = io.read_field_csv(path)
        for name in ("x_grid", "t_grid", "h_values", "u_values"):
            np.testing.assert_array_equal(getattr(F, name), getattr(G, name))

    def test_emitted_field_round_trips(self, tmp_path):
        assert run(_load("exact_sine.json"), tmp_path) == 0
        text = (tmp_path / "field.csv").read_text()
        assert io.field_to_csv(io.field_from_csv(text)) == text

    def test_seventeen_digits(self):
        assert io.rows_to_csv(("v",), [(0.1,)]) == "v\n0.10000000000000001\n"


class TestDeterminism:
    def test_repeated_runs_identical(self, tmp_path):
        cfg = _load("trace_simple_wave.json")
        for d in ("a", "b"):
            assert run(cfg, tmp_path / d) == 0
        files = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert files
        for name in files:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_console_script(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "charlab.cli", "breaking", "--config", str(CONFIGS / "breaking_sine.json"),
             "--out", str(tmp_path)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["t_break"] == pytest.approx(6.6583071540688845, rel=1e-12)
