"""Export the finite model of the Nakamura manifold, lattice case (ii), as .dcplx.

On the lattice with imaginary period b = (2m+1)pi the functions exp(+-2iy)
(y = Im z1) descend to the quotient while exp(+-iy) do not. The model is the
invariant complex plus its two twists by exp(+-2iy), whose logarithmic
derivatives are +-(zeta1 - conj zeta1).

    python scripts/build_nakamura_model.py [out.dcplx]
"""

import sys
from pathlib import Path

from ddbar.doublecomplex import dump_raw_complex
from ddbar.exterior import e
from ddbar.structure import load_manifold, twisted_complex

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "ddbar" / "fixtures" / "nakamura"


def build():
    se = load_manifold(FIXTURES / "nakamura_invariant.cplx")
    theta = e(1) - e(-1)
    twists = {"": theta * 0, "exp(2iy)": theta, "exp(-2iy)": -theta}
    return twisted_complex(se, twists, name="nakamura-ii")


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else FIXTURES / "nakamura_ii.dcplx"
    dc = build()
    out.write_text(dump_raw_complex(dc), encoding="utf-8")
    print(f"wrote {out} ({sum(dc.dim(p, q) for p, q in dc.bidegrees())} basis forms)")


if __name__ == "__main__":
    main(sys.argv)
