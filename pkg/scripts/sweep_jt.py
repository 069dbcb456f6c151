"""Sweep the J_t deformation of the Abelian Iwasawa structure over a grid in t.

Prints, per sample, the weak/strong verdicts, sGG, Delta^2 and whether the
metric omega_t is balanced, then the jump summary.

    python scripts/sweep_jt.py [D] [grid]      e.g.  1/8  grid:0:1/8:4:0:1/8:3
"""

import sys
from pathlib import Path

from ddbar.cli import main

FIXTURE = str(Path(__file__).resolve().parents[1] / "src" / "ddbar" / "fixtures" / "iwasawa_abelian_Jt.cplx")
OMEGA_T = (
    "i/2*e(1,-1) + i/4*(1-2*D)/(1-t*conj(t))*e(2,-2) + i/2*e(3,-3)"
    " + i/4*e(1,-2) + i/4*e(2,-1)"
)

if __name__ == "__main__":
    D = sys.argv[1] if len(sys.argv) > 1 else "1/8"
    grid = sys.argv[2] if len(sys.argv) > 2 else "grid:0:1/8:4:0:1/8:3"
    sys.exit(main(["sweep", FIXTURE, "--params", f"D={D}", "--sweep", f"t={grid}",
                   "--metric", OMEGA_T, "--jobs", "4"]))
