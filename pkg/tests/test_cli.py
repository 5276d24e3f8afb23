import shutil
import subprocess
import sys

import numpy as np
import pytest

from lyapcert import load_problem, read_trace_csv
from lyapcert.cli import UsageError, main, parse_method

VIOLATING_CSV = (
    "iter,objective_gap,distance,lyapunov\n"
    "0,1,1,\n"
    "1,1,1,\n"
    "2,1,1,1\n"
    "3,1,1,2\n"
)


class TestParseMethod:
    def test_aliases(self):
        assert parse_method("hb") == "HB"
        assert parse_method("Heavy-Ball") == "HB"
        assert parse_method("NAG") == "NAG"
        assert parse_method("tmm") == "TMM"
        assert parse_method("nag-gs") == "NAGGS"
        assert parse_method("nag_gs") == "NAGGS"
        assert parse_method("naggs") == "NAGGS"

    def test_unknown(self):
        with pytest.raises(UsageError):
            parse_method("sgd")


class TestGenerate:
    def test_writes_loadable_problem(self, tmp_path, capsys):
        out = tmp_path / "p.npz"
        rc = main(["generate", "--dim", "6", "--mu", "1", "--L", "9",
                   "--seed", "4", "--out", str(out)])
        assert rc == 0
        assert "wrote quadratic problem" in capsys.readouterr().out
        p = load_problem(out)
        assert p.dim == 6
        assert p.eigvals[0] == pytest.approx(1.0)
        assert p.eigvals[-1] == pytest.approx(9.0)

    def test_missing_out(self, capsys):
        rc = main(["generate", "--dim", "6"])
        assert rc == 2
        assert "missing required --out" in capsys.readouterr().err


class TestAnalyze:
    def test_eligible_exits_zero(self, capsys):
        rc = main(["analyze", "--method", "hb", "--optimal",
                   "--mu", "1", "--L", "4"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "eligible: yes" in out
        assert "spectral_radius" in out

    def test_ineligible_exits_one(self, capsys):
        rc = main(["analyze", "--method", "tmm", "--optimal",
                   "--mu", "1", "--L", "4"])
        assert rc == 1
        assert "eligible: no" in capsys.readouterr().out

    def test_explicit_hyperparameters(self, capsys):
        rc = main(["analyze", "--method", "hb", "--alpha", "0.15",
                   "--beta", "0.5", "--mu", "1", "--L", "10"])
        assert rc == 0
        assert "eligible: yes" in capsys.readouterr().out

    def test_writes_certificate_csv(self, tmp_path, capsys):
        out = tmp_path / "cert.csv"
        rc = main(["analyze", "--method", "hb", "--optimal", "--mu", "1",
                   "--L", "4", "--dim", "7", "--out", str(out)])
        assert rc == 0
        lines = out.read_text(encoding="utf-8").strip().split("\n")
        assert lines[0] == "lambda_W,a,b,re_lambda,im_lambda,modulus,conjugate_pair"
        assert len(lines) == 8

    def test_analyze_problem_file(self, tmp_path, capsys):
        path = tmp_path / "p.npz"
        assert main(["generate", "--dim", "5", "--mu", "1", "--L", "4",
                     "--out", str(path)]) == 0
        capsys.readouterr()
        rc = main(["analyze", "--method", "nag", "--optimal",
                   "--problem", str(path)])
        assert rc == 0
        assert "coordinates: 5" in capsys.readouterr().out

    def test_optimal_conflicts_with_alpha(self, capsys):
        rc = main(["analyze", "--method", "hb", "--optimal", "--alpha", "0.1",
                   "--mu", "1", "--L", "4"])
        assert rc == 2
        assert "conflicts" in capsys.readouterr().err

    def test_missing_method(self, capsys):
        rc = main(["analyze", "--mu", "1", "--L", "4", "--optimal"])
        assert rc == 2
        assert "--method" in capsys.readouterr().err

    def test_bad_method_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["analyze", "--method", "sgd", "--optimal",
                  "--mu", "1", "--L", "4"])
        assert exc.value.code == 2


class TestRunAndCheck:
    def test_run_writes_trace(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        rc = main(["run", "--method", "hb", "--optimal", "--dim", "6",
                   "--mu", "1", "--L", "4", "--iters", "80", "--out", str(out)])
        text = capsys.readouterr().out
        assert rc == 0
        assert "diverged=no" in text
        assert "monotone decrease: yes" in text
        data = read_trace_csv(out)
        assert data["distance"].shape[0] == 80

    def test_run_divergence_exit_code(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        rc = main(["run", "--method", "hb", "--alpha", "3", "--beta", "0.5",
                   "--dim", "2", "--mu", "1", "--L", "4", "--iters", "200",
                   "--out", str(out)])
        assert rc == 1
        assert "diverged=yes" in capsys.readouterr().out

    def test_check_clean_trace(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        main(["run", "--method", "hb", "--optimal", "--dim", "6", "--mu", "1",
              "--L", "4", "--iters", "80", "--out", str(out)])
        capsys.readouterr()
        rc = main(["check", str(out)])
        assert rc == 0
        assert "monotone decrease: yes" in capsys.readouterr().out

    def test_check_flags_violations(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text(VIOLATING_CSV, encoding="utf-8")
        rc = main(["check", str(path)])
        out = capsys.readouterr().out
        assert rc == 1
        assert "NO" in out
        assert "k=2" in out

    def test_check_missing_path(self, capsys):
        rc = main(["check"])
        assert rc == 2
        assert "missing trace" in capsys.readouterr().err

    def test_check_missing_file_is_runtime_error(self, tmp_path, capsys):
        rc = main(["check", str(tmp_path / "nope.csv")])
        assert rc == 1


class TestScenarioCommand:
    def test_scenario_runs_and_reports(self, tmp_path, capsys):
        rc = main(["scenario", "nonoptimal", "--dim", "4", "--iters", "150",
                   "--out", str(tmp_path / "art")])
        out = capsys.readouterr().out
        assert rc == 0
        assert "overall: PASS" in out
        assert "artifacts:" in out
        assert (tmp_path / "art" / "nonoptimal_report.txt").is_file()

    def test_unknown_scenario(self, capsys):
        rc = main(["scenario", "nope"])
        assert rc == 2
        assert "unknown scenario" in capsys.readouterr().err

    def test_missing_name(self, capsys):
        rc = main(["scenario"])
        assert rc == 2
        assert "missing scenario name" in capsys.readouterr().err


class TestConfigFile:
    def write_config(self, tmp_path, body):
        path = tmp_path / "run.cfg"
        path.write_text(body, encoding="utf-8")
        return str(path)

    def test_config_supplies_flags(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, (
            "# analyze settings\n"
            "method = nag\n"
            "optimal = true\n"
            "mu = 1\n"
            "L = 9\n"
        ))
        rc = main(["analyze", "--config", cfg])
        out = capsys.readouterr().out
        assert rc == 0
        # tuned NAG on [1, 9] certifies radius 2/3
        assert "spectral_radius: 0.6666" in out

    def test_flag_overrides_config(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, (
            "method = nag\noptimal = true\nmu = 1\nL = 9\n"))
        rc = main(["analyze", "--config", cfg, "--method", "hb"])
        out = capsys.readouterr().out
        assert rc == 0
        # tuned HB on [1, 9] certifies radius 1/2 instead
        assert "spectral_radius: 0.5" in out
        assert "spectral_radius: 0.6666" not in out

    def test_config_before_subcommand(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, (
            "method = nag\noptimal = true\nmu = 1\nL = 9\n"))
        rc = main(["--config", cfg, "analyze"])
        assert rc == 0
        assert "spectral_radius: 0.6666" in capsys.readouterr().out

    def test_scenario_name_from_config(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, (
            f"scenario = nonoptimal\ndim = 4\niters = 150\n"
            f"out = {tmp_path / 'art'}\n"))
        rc = main(["scenario", "--config", cfg])
        assert rc == 0
        assert "overall: PASS" in capsys.readouterr().out

    def test_config_parse_error(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, "what is this\n")
        rc = main(["analyze", "--config", cfg])
        assert rc == 1
        assert "expected 'key = value'" in capsys.readouterr().err

    def test_bad_config_value(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, "method = sgd\nmu = 1\nL = 9\noptimal = yes\n")
        rc = main(["analyze", "--config", cfg])
        assert rc == 2
        assert "unknown method" in capsys.readouterr().err


class TestInstalledEntryPoint:
    def test_help_via_subprocess(self):
        exe = shutil.which("lyapcert")
        cmd = [exe, "--help"] if exe else [sys.executable, "-m", "lyapcert.cli", "--help"]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0
        for word in ("generate", "analyze", "run", "scenario", "check"):
            assert word in proc.stdout
