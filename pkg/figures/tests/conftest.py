"""Shared fixtures: benchmark CSVs produced through the pipeline CLI.

The renderer consumes the analysis pipeline only through its file
formats, so the fixtures shell out to the ``tipscan`` command line and
never import it.
"""

import subprocess
import sys

import pytest

FOLD_CONFIG = """
model = fold
stride = 100
"""


def run_tipscan(args, out_dir):
    result = subprocess.run(
        [sys.executable, "-m", "tipscan.cli", *args, "--out", str(out_dir)],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0, result.stderr
    return result.stdout.strip().splitlines()[-1]


@pytest.fixture(scope="session")
def fold_outputs(tmp_path_factory):
    out = tmp_path_factory.mktemp("fold_csvs")
    cfg = out / "fold.conf"
    cfg.write_text(FOLD_CONFIG)
    traj = run_tipscan(["simulate", "--config", str(cfg), "--seed", "0"], out)
    records = run_tipscan(["analyze", "--config", str(cfg), "--seed", "0"], out)
    return {"trajectory": traj, "records": records}


@pytest.fixture(scope="session")
def fold_portrait(tmp_path_factory):
    out = tmp_path_factory.mktemp("fold_portrait")
    return run_tipscan(
        ["portrait", "--model", "fold", "--lambdas", "0.1", "--grid-points", "100"], out
    )
