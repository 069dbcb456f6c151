"""Regenerate the byte-compared CLI goldens in tests/golden/.

Each entry of tests/golden/cases.json is a ddbar argument list whose second
item is a path relative to the shipped fixtures directory.

    python scripts/regen_goldens.py
"""

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"
FIXTURES = ROOT / "src" / "ddbar" / "fixtures"


def run_case(args: list[str]) -> bytes:
    argv = [args[0], str(FIXTURES / args[1]), *args[2:]]
    proc = subprocess.run([sys.executable, "-m", "ddbar", *argv], capture_output=True, check=False)
    if proc.returncode != 0:
        raise SystemExit(f"{' '.join(argv)}: exit {proc.returncode}\n{proc.stderr.decode()}")
    return proc.stdout


def main():
    cases = json.loads((GOLDEN / "cases.json").read_text(encoding="utf-8"))
    for name, args in cases.items():
        (GOLDEN / name).write_bytes(run_case(args))
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
