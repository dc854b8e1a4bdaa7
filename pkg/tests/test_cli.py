import json
import math

import pytest

from orlicz_polytope.cli import (
    ConfigError,
    dumps_json,
    fmt,
    load_config_file,
    main,
    parse_p,
)


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path / "out")])


def read_json(tmp_path, name):
    return json.loads((tmp_path / "out" / name).read_text())


class TestConfigParsing:
    def test_parse_p(self):
        assert parse_p("inf") == math.inf
        assert parse_p("2.5") == 2.5
        with pytest.raises(ConfigError):
            parse_p("0.5")
        with pytest.raises(ConfigError):
            parse_p("Infinity")
        with pytest.raises(ConfigError):
            parse_p("abc")

    def test_flat_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# experiment\np = inf\nn = 4\nN = 100 1000 10000 100000\nseed = 3\n")
        data = load_config_file(str(cfg))
        assert data["p"] == "inf"
        assert data["N"] == "100 1000 10000 100000"

    def test_malformed_config(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("p inf\n")
        with pytest.raises(ConfigError):
            load_config_file(str(cfg))

    def test_env_seed_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ORLICZ_POLYTOPE_SEED", "77")
        assert run(tmp_path, "estimate", "--p", "inf", "--n", "3", "--N", "2", "--trials", "0") == 0
        report = read_json(tmp_path, "report.json")
        assert report["seed"] == 77


class TestSerialization:
    def test_seventeen_digit_floats(self):
        text = dumps_json({"x": 1.0 / 3.0, "nested": [2.0, None]})
        assert "0.33333333333333331" in text
        assert "null" in text
        assert fmt(math.pi) == "3.1415926535897931"


class TestEstimateCommand:
    def test_cube_value(self, tmp_path):
        assert run(tmp_path, "estimate", "--p", "inf", "--n", "10", "--N", "2", "--dir", "e1", "--trials", "0") == 0
        report = read_json(tmp_path, "report.json")
        want = (1 + 0.5 - math.sqrt(1 + 0.25)) / 2
        assert report["orlicz_value"] == pytest.approx(want, rel=1e-8)
        assert report["mc_mean"] is None

    def test_with_mc(self, tmp_path):
        assert run(tmp_path, "estimate", "--p", "2", "--n", "4", "--N", "50", "--trials", "40", "--seed", "5") == 0
        report = read_json(tmp_path, "report.json")
        assert report["ratio"] == pytest.approx(report["mc_mean"] / report["orlicz_value"], rel=1e-12)
        csv_lines = (tmp_path / "out" / "report.csv").read_text().strip().split("\n")
        assert csv_lines[0] == "N,orlicz_value,mc_mean,ci_lo,ci_hi,ratio"

    def test_bad_p_exit_2(self, tmp_path):
        assert run(tmp_path, "estimate", "--p", "0.5", "--n", "4", "--N", "10") == 2

    def test_bad_direction_exit_2(self, tmp_path):
        assert run(tmp_path, "estimate", "--p", "2", "--n", "4", "--N", "10", "--dir", "e9") == 2

    def test_lf_endings(self, tmp_path):
        run(tmp_path, "estimate", "--p", "inf", "--n", "3", "--N", "2", "--trials", "0")
        for name in ("report.json", "report.csv", "manifest.json"):
            assert b"\r" not in (tmp_path / "out" / name).read_bytes()


class TestScanCommand:
    GRID = ["--N", "100", "--N", "1000", "--N", "10000", "--N", "100000"]

    def test_crosspolytope_scan(self, tmp_path):
        assert run(tmp_path, "scan", "--p", "1", "--n", "30", *self.GRID, "--trials", "0", "--seed", "1") == 0
        fit = read_json(tmp_path, "fit.json")
        assert fit["exponent"] == pytest.approx(1.0, abs=0.15)
        scan_lines = (tmp_path / "out" / "scan.csv").read_text().strip().split("\n")
        assert scan_lines[0] == "N,orlicz,mc,ratio"
        assert len(scan_lines) == 5

    def test_single_N_exit_2(self, tmp_path):
        assert run(tmp_path, "scan", "--p", "1", "--n", "5", "--N", "100", "--trials", "0") == 2

    def test_manifest_replay_byte_identical(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        args = ["scan", "--p", "1", "--n", "5", *self.GRID, "--trials", "10", "--seed", "4"]
        assert main([*args, "--out", str(out_a)]) == 0
        assert main(["scan", "--config", str(out_a / "manifest.json"), "--out", str(out_b)]) == 0
        for name in ("scan.csv", "fit.json", "plotdata.csv", "scan.svg"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_thread_count_invariance(self, tmp_path):
        out_a = tmp_path / "t1"
        out_b = tmp_path / "t8"
        args = ["scan", "--p", "2", "--n", "4", *self.GRID, "--trials", "8", "--seed", "9"]
        assert main([*args, "--threads", "1", "--out", str(out_a)]) == 0
        assert main([*args, "--threads", "8", "--out", str(out_b)]) == 0
        for name in ("scan.csv", "fit.json", "plotdata.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


class TestMeanWidthCommand:
    def test_ball_fit(self, tmp_path):
        assert run(
            tmp_path, "meanwidth", "--p", "2", "--n", "10",
            "--N", "100", "--N", "1000", "--N", "10000", "--N", "100000",
            "--trials", "0",
        ) == 0
        fit = read_json(tmp_path, "fit.json")
        assert fit["transform"] == "log-N"
        assert fit["r2"] >= 0.98


class TestDirectionsCommand:
    def test_ball_single_estimate(self, tmp_path):
        assert run(tmp_path, "directions", "--p", "2", "--n", "5", "--N", "100", "--dirs", "1000", "--seed", "2") == 0
        summary = read_json(tmp_path, "summary.json")
        assert summary["distinct_estimates"] == 1
        total = (
            summary["fraction_below_lower"]
            + summary["fraction_between"]
            + summary["fraction_above_upper"]
        )
        assert total == pytest.approx(1.0, abs=1e-12)
        lines = (tmp_path / "out" / "directions.csv").read_text().strip().split("\n")
        assert len(lines) == 1001


class TestValidateCommand:
    def test_default_grid_passes(self, tmp_path):
        assert run(tmp_path, "validate", "--grid", "1 2; 2 5", "--seed", "1") == 0
        report = read_json(tmp_path, "validate.json")
        assert report["all_passed"] is True
        assert {c["name"] for c in report["checks"]} == {
            "closed-form-consistency",
            "recursion-identity",
            "dual-involution",
            "sampler-ks",
        }

    def test_perturbation_hook_fails(self, tmp_path):
        assert run(tmp_path, "validate", "--grid", "1 2; 2 5", "--perturb-closed-form") == 1
        report = read_json(tmp_path, "validate.json")
        failed = [c for c in report["checks"] if not c["passed"]]
        assert any(c["name"] == "closed-form-consistency" for c in failed)

    def test_empty_grid_exit_2(self, tmp_path):
        assert run(tmp_path, "validate", "--grid", "") == 2


class TestTabulateCommand:
    def test_writes_table(self, tmp_path):
        assert run(tmp_path, "tabulate-m", "--p", "inf", "--n", "4", "--dir", "e1") == 0
        lines = (tmp_path / "out" / "m_table.csv").read_text().strip().split("\n")
        assert lines[0] == "t,M"
        values = [tuple(float(v) for v in line.split(",")) for line in lines[1:]]
        assert all(b >= a for (_, a), (_, b) in zip(values, values[1:]))
