import json
import xml.etree.ElementTree as ET

import pytest

from delaypop.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSimulate:
    def test_pielou_converges(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        code, stdout, _ = run_cli([
            "simulate", "--model", "pielou", "--beta", "3", "--lambda", "1",
            "--m", "1", "--history", "1,1", "--steps", "10000", "--out", str(out),
        ], capsys)
        assert code == 0
        kv = dict(line.split("=", 1) for line in stdout.splitlines() if "=" in line)
        assert float(kv["last_value"]) == pytest.approx(2.0, abs=1e-6)
        lines = out.read_text().splitlines()
        assert lines[0] == "n,A_n,log_A_n"
        assert len(lines) == 1 + 2 + 10000

    def test_equilibrium_seed_constant(self, capsys):
        code, stdout, _ = run_cli([
            "simulate", "--model", "bobwhite", "--alpha", "0.5", "--beta", "1",
            "--r", "2", "--m", "0", "--history", "1", "--steps", "5",
        ], capsys)
        assert code == 0
        assert "x_bar=1" in stdout

    def test_missing_history_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--model", "pielou", "--beta", "3", "--lambda", "1",
                  "--m", "1", "--steps", "10"])
        assert exc.value.code == 2

    def test_conflicting_flags(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--model", "pielou", "--beta", "3", "--lambda", "1",
                  "--alpha", "0.5", "--m", "0", "--history", "1", "--steps", "10"])
        assert exc.value.code == 2

    def test_divergence_exit_code(self, capsys):
        code, _, err = run_cli([
            "simulate", "--model", "pielou", "--beta", "2", "--lambda", "1",
            "--m", "1", "--history", "1e300,1e-300", "--steps", "50",
        ], capsys)
        assert code == 1
        assert "diverged" in err


class TestPlot:
    def test_svg_well_formed_with_one_marker(self, tmp_path, capsys):
        svg = tmp_path / "orbit.svg"
        code, _, _ = run_cli([
            "simulate", "--model", "pielou", "--beta", "3", "--lambda", "1",
            "--m", "1", "--history", "3,3", "--steps", "500", "--plot", str(svg),
        ], capsys)
        assert code == 0
        root = ET.parse(svg).getroot()  # raises if not well-formed XML
        assert root.get("viewBox") == "0 0 960 540"
        markers = [el for el in root.iter() if el.get("id") == "equilibrium"]
        assert len(markers) == 1

    def test_log_y_variant(self, tmp_path, capsys):
        svg = tmp_path / "orbit.svg"
        code, _, _ = run_cli([
            "simulate", "--model", "pielou", "--beta", "3", "--lambda", "1",
            "--m", "1", "--history", "3,3", "--steps", "200",
            "--plot", str(svg), "--log-y",
        ], capsys)
        assert code == 0
        ET.parse(svg)


class TestAnalyze:
    def test_bobwhite_report(self, capsys):
        code, stdout, _ = run_cli([
            "analyze", "--model", "bobwhite", "--alpha", "0.5", "--beta", "1",
            "--r", "1", "--m", "1",
        ], capsys)
        assert code == 0
        kv = dict(line.split("=", 1) for line in stdout.splitlines())
        assert kv["thm3_paper"] == "true"
        assert float(kv["q"]) == pytest.approx(0.169873, abs=1e-5)
        assert float(kv["liz_r_max"]) == pytest.approx(3.5)

    def test_pielou_discrepancy(self, capsys):
        code, stdout, _ = run_cli([
            "analyze", "--model", "pielou", "--beta", "3", "--lambda", "1",
            "--m", "1", "--no-sim",
        ], capsys)
        assert code == 0
        kv = dict(line.split("=", 1) for line in stdout.splitlines())
        assert float(kv["L_paper"]) == pytest.approx(0.5)
        assert float(kv["L_hat"]) == pytest.approx(0.947, abs=1e-3)
        assert kv["thm3_paper"] == "true"
        assert kv["thm3_numeric"] == "false"

    def test_invalid_beta_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["analyze", "--model", "pielou", "--beta", "1", "--lambda", "1", "--m", "0"])
        assert exc.value.code == 2

    def test_csv_out(self, tmp_path, capsys):
        out = tmp_path / "report.csv"
        code, _, _ = run_cli([
            "analyze", "--model", "pielou", "--beta", "2", "--lambda", "1",
            "--m", "0", "--no-sim", "--out", str(out),
        ], capsys)
        assert code == 0
        header, row = out.read_text().splitlines()
        assert header.startswith("family,alpha,beta,r,lambda,m,x_bar")
        assert row.startswith("pielou,")


class TestSweep:
    def test_sweep_to_file(self, tmp_path, capsys):
        config = tmp_path / "sweep.json"
        config.write_text(json.dumps({
            "family": "bobwhite",
            "fixed": {"alpha": 0.5, "beta": 1.0},
            "axes": [{"param": "r", "min": 1.0, "max": 2.0, "count": 2}],
            "m": [0, 1],
            "sim": {"n_steps": 1000, "burn_in": 500},
            "grid_size": 1000,
        }))
        out = tmp_path / "sweep.csv"
        code, _, _ = run_cli(["sweep", "--config", str(config), "--out", str(out), "--jobs", "1"], capsys)
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 5
        assert lines[0].endswith(",skipped")

    def test_bad_config_exits_1(self, tmp_path, capsys):
        config = tmp_path / "bad.json"
        config.write_text(json.dumps({"family": "bobwhite", "axes": []}))
        code, _, err = run_cli(["sweep", "--config", str(config)], capsys)
        assert code == 1
        assert "sweep failed" in err


class TestVerify:
    def test_single_suite(self, capsys):
        code, stdout, _ = run_cli(["verify", "--only", "equivariance", "--seed", "42"], capsys)
        assert code == 0
        assert stdout.startswith("PASS equivariance")

    def test_seed_determinism(self, capsys):
        _, out1, _ = run_cli(["verify", "--only", "residual", "--seed", "42"], capsys)
        _, out2, _ = run_cli(["verify", "--only", "residual", "--seed", "42"], capsys)
        assert out1 == out2

    def test_unknown_suite_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--only", "nonsense"])
        assert exc.value.code == 2
