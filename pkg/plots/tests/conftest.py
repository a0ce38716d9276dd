import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

# coarse quadrature and short scans: the figures only need valid CSVs
FAST_CONFIG = """
[ensemble]
opt_points = 61
spin_points = 21

[scan]
start = -15
stop = 15
points = 15
"""

LEVELS_CONFIG = """
[scan]
start = 0
stop = 2000
points = 41
"""

SATURATION_CONFIG = """
[ensemble]
opt_points = 61
spin_points = 21

[lambda]
omega_p = 12.0948631
omega_c = 10.4744587

[scan]
start = 3
stop = 300
points = 12
"""


def _run_cli(kind: str, config_text: str, out_path: Path) -> Path:
    cfg = out_path.with_suffix(".ini")
    cfg.write_text(config_text)
    subprocess.run(
        [sys.executable, "-m", "nvsim", kind,
         "--config", str(cfg), "--out", str(out_path)],
        check=True,
    )
    return out_path


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    """Default-run CSVs for all four figure kinds, generated via the CLI."""
    root = tmp_path_factory.mktemp("csvs")
    _run_cli("levels", LEVELS_CONFIG, root / "levels.csv")
    _run_cli("eit", FAST_CONFIG, root / "eit.csv")
    _run_cli("ndfwm", FAST_CONFIG + "\n[lambda]\nomega_p = 12.09\nomega_c = 10.47\n",
             root / "ndfwm.csv")
    _run_cli("saturation", SATURATION_CONFIG, root / "saturation.csv")
    return root
