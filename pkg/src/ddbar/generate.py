"""Random nilpotent structure equations with invariant complex structure.

``d eta^k`` only involves ``eta^j`` and their conjugates for ``j < k``, so the
resulting Lie algebra is nilpotent (hence unimodular). Only (2,0) and (1,1)
terms are drawn, so the complex structure is integrable; Jacobi (d^2 = 0) is
not automatic and candidates are filtered through :func:`validate`.
"""

from __future__ import annotations

import random
from itertools import combinations

from .structure import StructureEquations, parse_manifold, validate

COEFFICIENTS = ("1", "-1", "i", "-i", "1/2", "2", "1+i", "-1/3")


def _terms(k: int) -> list[tuple[int, int]]:
    lower = range(1, k)
    holo = [(a, b) for a, b in combinations(lower, 2)]
    mixed = [(a, -b) for a in lower for b in lower]
    return holo + mixed


def random_text(n: int, rng: random.Random, density: float = 0.4, abelian: bool = False,
                name: str = "random") -> str:
    lines = [
        "[manifold]",
        f'name = "{name}"',
        f"dim = {n}",
        "params = []",
        "",
        "[structure]",
    ]
    for k in range(1, n + 1):
        parts = []
        for a, b in _terms(k):
            if abelian and b > 0:
                continue
            if rng.random() < density:
                parts.append(f"({rng.choice(COEFFICIENTS)})*e({a},{b})")
        lines.append(f'd{k} = "{" + ".join(parts) if parts else "0"}"')
    return "\n".join(lines) + "\n"


def random_nilpotent(n: int, rng: random.Random, density: float = 0.4, abelian: bool = False,
                     max_tries: int = 1000, nontrivial: bool = True) -> tuple[str, StructureEquations]:
    """Draw until the equations satisfy d^2 = 0 (and, optionally, are not all zero)."""
    for _ in range(max_tries):
        text = random_text(n, rng, density, abelian)
        se = parse_manifold(text)
        if nontrivial and all(not f.terms for f in se.differentials()):
            continue
        if validate(se).ok:
            return text, se
    raise RuntimeError(f"no valid structure found in {max_tries} draws")
