"""Run the acceptance criteria and print one line per criterion."""
import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parents[1]
proc = subprocess.run([sys.executable, "-m", "pytest", str(root / "tests" / "test_acceptance.py"),
                       "-q", "-p", "no:cacheprovider"], capture_output=True, text=True)
lines = [l for l in proc.stdout.splitlines() if l.startswith("criterion")]
print("\n".join(lines))
print(proc.stdout.strip().splitlines()[-1])
sys.exit(proc.returncode)
