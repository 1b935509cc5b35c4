import subprocess
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def run_script(name, *args):
    return subprocess.run([sys.executable, str(SCRIPTS / name), *map(str, args)],
                          capture_output=True, text=True, check=True)


def test_headline_script_smoke():
    out = run_script("headline_experiment.py", "--trials", 200, "--samples", 50).stdout
    assert "optimal" in out and "standard" in out and "theta=" in out


def test_divergence_study_smoke():
    proc = run_script("divergence_seed_study.py", "--seeds", 2, "--n", 4, "--samples", 1000)
    assert len(proc.stdout.strip().splitlines()) == 3
    assert "increasing on" in proc.stderr
