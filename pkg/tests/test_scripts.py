import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


@pytest.mark.parametrize(
    "name, args",
    [
        ("reproduce_examples.py", ["--sweep-points", "3"]),
        ("open_system_sweep.py", ["--trials", "2"]),
        ("povm_sweep.py", ["--angles", "3", "--setups", "5"]),
    ],
)
def test_script_runs(name, args):
    proc = subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip()
