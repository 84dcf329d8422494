import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))


def latcr(*args):
    proc = subprocess.run(
        ["latcr", *args], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    """Small CSV sets for every figure family, produced via the CLI."""
    out = tmp_path_factory.mktemp("figcsv")
    latcr("figure", "fig3", "--out-dir", str(out),
          "--set", "mu_values=1e-3,1e-5", "--set", "pc_points=8")
    latcr("figure", "fig4a", "--out-dir", str(out), "--simulate",
          "--slots", "2000", "--seed", "7",
          "--set", "sigma_s_db_step=10", "--set", "chi2_values=0.01,0.9")
    latcr("figure", "fig4b", "--out-dir", str(out), "--set", "chi2_points=9")
    latcr("figure", "fig5", "--out-dir", str(out), "--set", "pm_points=8")
    latcr("figure", "fig6", "--out-dir", str(out), "--set", "chi2_db_step=10")
    return out
