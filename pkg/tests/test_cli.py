"""Tests for the command-line interface."""

import subprocess
import sys

import pytest

from tipscan.cli import CliError, _build_config, build_parser, main, parse_config_file
from tipscan.pipeline import RECORDS_HEADER, WindowRecord, write_records_csv

SMALL_ANALYSIS = """
# fast end-to-end settings for tests
model = fold
sim.r = 0.0
sim.dt = 0.01
sim.tspan = 5.0
sub = 2
block_size = 100
stride = 7
mc.n_samples = 100
stop_rule = end_of_series
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "analysis.conf"
    path.write_text(SMALL_ANALYSIS)
    return str(path)


class TestConfigFile:
    def test_parse_values_and_comments(self, config_file):
        values = parse_config_file(config_file)
        assert values["model"] == "fold"
        assert values["sim.dt"] == 0.01
        assert values["block_size"] == 100
        assert isinstance(values["block_size"], int)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("volume = 11\n")
        with pytest.raises(CliError, match="volume"):
            parse_config_file(str(path))

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("model fold\n")
        with pytest.raises(CliError, match="key = value"):
            parse_config_file(str(path))


class TestBuildConfig:
    def parse(self, argv):
        return build_parser().parse_args(argv)

    def test_preset_defaults(self):
        cfg = _build_config(self.parse(["analyze", "--model", "fold"]))
        assert cfg.model == "fold"
        assert cfg.sim.dt == 0.002
        assert cfg.block_size == 1250

    def test_file_overrides_preset(self, config_file):
        cfg = _build_config(self.parse(["analyze", "--config", config_file]))
        assert cfg.sim.dt == 0.01
        assert cfg.stride == 7

    def test_flag_overrides_file(self, config_file):
        cfg = _build_config(self.parse(["analyze", "--config", config_file, "--stride", "3"]))
        assert cfg.stride == 3

    def test_seed_applies_to_sim_and_mc(self):
        cfg = _build_config(self.parse(["analyze", "--model", "fold", "--seed", "7"]))
        assert cfg.sim.seed == 7
        assert cfg.mc.seed == 7

    def test_model_required(self, tmp_path):
        path = tmp_path / "empty.conf"
        path.write_text("stride = 2\n")
        with pytest.raises(CliError, match="model"):
            _build_config(self.parse(["analyze", "--config", str(path)]))

    def test_epsilon_warning_for_hopf(self, tmp_path, capsys):
        path = tmp_path / "hopf.conf"
        path.write_text("model = subcritical_hopf\nsim.epsilon = 0.5\n")
        cfg = _build_config(self.parse(["analyze", "--config", str(path)]))
        assert cfg.sim.epsilon == 1.0
        assert "epsilon" in capsys.readouterr().err


class TestCommands:
    def test_analyze_writes_records(self, config_file, tmp_path, capsys):
        out = tmp_path / "results"
        code = main(["analyze", "--config", config_file, "--out", str(out)])
        assert code == 0
        path = out / "fold_records.csv"
        assert str(path) in capsys.readouterr().out
        assert path.read_text().splitlines()[0] == RECORDS_HEADER

    def test_simulate_writes_trajectory(self, config_file, tmp_path, capsys):
        code = main(["simulate", "--config", config_file, "--out", str(tmp_path)])
        assert code == 0
        lines = (tmp_path / "fold_trajectory.csv").read_text().splitlines()
        assert lines[0] == "t,x,y,lambda"
        assert len(lines) == 502
        capsys.readouterr()

    def test_out_dir_from_environment(self, config_file, tmp_path, monkeypatch, capsys):
        env_dir = tmp_path / "from_env"
        monkeypatch.setenv("TIPSCAN_OUT_DIR", str(env_dir))
        assert main(["simulate", "--config", config_file]) == 0
        assert (env_dir / "fold_trajectory.csv").exists()
        capsys.readouterr()

    def test_invalid_stride_exits_with_error(self, config_file, capsys):
        code = main(["analyze", "--config", config_file, "--stride", "0"])
        assert code == 2
        assert "stride" in capsys.readouterr().err

    def test_extrapolate_reports_crossing(self, tmp_path, capsys):
        records = [
            WindowRecord(
                end_time=float(k),
                end_lambda=0.3 - 0.001 * k,
                re_mu1=0.01 * (k - 100.0),
                re_mu2=-1.0,
            )
            for k in range(20)
        ]
        path = tmp_path / "records.csv"
        write_records_csv(records, path)
        assert main(["extrapolate", "--records", str(path)]) == 0
        out = capsys.readouterr().out
        assert "t_cross = 100" in out
        assert "lambda_cross = 0.2" in out

    def test_extrapolate_insufficient_data(self, tmp_path, capsys):
        path = tmp_path / "records.csv"
        write_records_csv([WindowRecord(end_time=0.0, end_lambda=0.3, re_mu1=-1.0)], path)
        assert main(["extrapolate", "--records", str(path)]) == 2
        assert "10" in capsys.readouterr().err

    def test_portrait_writes_geometry_sets(self, tmp_path, capsys):
        code = main(
            [
                "portrait",
                "--model",
                "fold",
                "--lambdas",
                "0.1",
                "--grid-points",
                "50",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        text = (tmp_path / "fold_portrait_lam0.1.csv").read_text()
        lines = text.splitlines()
        assert lines[0] == "set,x,y"
        names = {line.split(",")[0] for line in lines[1:]}
        assert "critical_manifold" in names
        assert "nullcline_y" in names
        assert "trajectory_0" in names
        capsys.readouterr()

    def test_presets_table(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out
        for name in ("fold", "subcritical_hopf", "singular_hopf"):
            assert name in out
        assert "block_size" in out
        assert "0.002" in out

    def test_console_entry_point(self, config_file, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "tipscan.cli", "presets"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "fold" in result.stdout
