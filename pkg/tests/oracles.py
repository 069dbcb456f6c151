"""Independent reference implementations used to cross-check the library.

Nothing here reuses the library's sign conventions or rank code: signs come
from cycle decomposition of explicit permutations, differentials from a
term-by-term Leibniz expansion, ranks and characteristic polynomials from
sympy.
"""

from __future__ import annotations

from itertools import combinations

import sympy

from ddbar.exterior import BasisForm, Form
from ddbar.scalar import Scalar


def position(j: int, n: int) -> int:
    """Slot of a signed generator in the canonical order eta^1..eta^n, conj eta^1..conj eta^n."""
    return j - 1 if j > 0 else n - j - 1


def permutation_sign(perm: list[int]) -> int:
    """Sign via cycle decomposition."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def word_sign(word: list[int], n: int) -> tuple[int, BasisForm | None]:
    """Sign of the permutation sorting ``word`` into canonical order."""
    slots = [position(j, n) for j in word]
    if len(set(slots)) != len(slots):
        return 0, None
    order = sorted(range(len(slots)), key=lambda i: slots[i])
    sign = permutation_sign(order)
    holo = tuple(sorted(j for j in word if j > 0))
    anti = tuple(sorted(-j for j in word if j < 0))
    return sign, BasisForm(holo, anti)


def word_of(b: BasisForm) -> list[int]:
    return list(b.holo) + [-j for j in b.anti]


def wedge_oracle(a: Form, b: Form, n: int) -> dict:
    out: dict = {}
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            sign, z = word_sign(word_of(x) + word_of(y), n)
            if sign:
                out[z] = out.get(z, Scalar(0)) + cx * cy * sign
    return {k: v for k, v in out.items() if v}


def conjugate_oracle(a: Form, n: int) -> dict:
    """Conjugate each factor in place, then sort."""
    out = {}
    for x, c in a.terms.items():
        sign, z = word_sign([-j for j in word_of(x)], n)
        out[z] = out.get(z, Scalar(0)) + c.conj() * sign
    return {k: v for k, v in out.items() if v}


def conj_generator(d: list[Form], j: int, n: int) -> dict:
    """d of conj(eta^j), by conjugating every factor of d eta^j."""
    return conjugate_oracle(d[j - 1], n)


def leibniz(d: list[Form], b: BasisForm, n: int) -> dict:
    """d(g1 ^ ... ^ gk) = sum_i (-1)^i g1 ^ .. ^ d(gi) ^ .. ^ gk, expanded word by word."""
    word = word_of(b)
    out: dict = {}
    for i, g in enumerate(word):
        dg = {x: c for x, c in d[g - 1].terms.items()} if g > 0 else conj_generator(d, -g, n)
        for x, c in dg.items():
            full = word[:i] + word_of(x) + word[i + 1:]
            sign, z = word_sign(full, n)
            if sign:
                coef = c * sign * (-1 if i % 2 else 1)
                out[z] = out.get(z, Scalar(0)) + coef
    return {k: v for k, v in out.items() if v}


def bigraded_basis(p: int, q: int, n: int) -> list[BasisForm]:
    idx = range(1, n + 1)
    return [BasisForm(h, a) for h in combinations(idx, p) for a in combinations(idx, q)]


def leibniz_matrices(d: list[Form], n: int) -> tuple[dict, dict]:
    """Matrices of del and delbar at every bidegree from the Leibniz oracle."""
    dels, delbars = {}, {}
    for p in range(n + 1):
        for q in range(n + 1):
            src = bigraded_basis(p, q, n)
            tgt_d = bigraded_basis(p + 1, q, n) if p < n else []
            tgt_b = bigraded_basis(p, q + 1, n) if q < n else []
            md = [[Scalar(0)] * len(src) for _ in tgt_d]
            mb = [[Scalar(0)] * len(src) for _ in tgt_b]
            for c, b in enumerate(src):
                for z, v in leibniz(d, b, n).items():
                    if (z.p, z.q) == (p + 1, q):
                        md[tgt_d.index(z)][c] = v
                    elif (z.p, z.q) == (p, q + 1):
                        mb[tgt_b.index(z)][c] = v
                    else:
                        raise AssertionError(f"non-integrable term {z}")
            dels[(p, q)] = md
            delbars[(p, q)] = mb
    return dels, delbars


# -- sympy-based cohomology ------------------------------------------------------

def to_sympy(m: list, rows: int, cols: int) -> sympy.Matrix:
    if rows == 0 or cols == 0:
        return sympy.zeros(rows, cols)
    return sympy.Matrix(rows, cols, lambda i, j: sympy.Rational(m[i][j].re) + sympy.I * sympy.Rational(m[i][j].im))


def sympy_rank(m: sympy.Matrix) -> int:
    if 0 in m.shape:
        return 0
    return m.rank(simplify=True)


class SympyCohomology:
    """Cohomology dimensions from oracle matrices with sympy ranks."""

    def __init__(self, dels: dict, delbars: dict, n: int):
        self.n = n
        self.dims = {(p, q): len(bigraded_basis(p, q, n)) for p in range(n + 1) for q in range(n + 1)}
        self.D = {}
        self.B = {}
        for (p, q), m in dels.items():
            self.D[(p, q)] = to_sympy(m, self.dims.get((p + 1, q), 0), self.dims[(p, q)])
        for (p, q), m in delbars.items():
            self.B[(p, q)] = to_sympy(m, self.dims.get((p, q + 1), 0), self.dims[(p, q)])

    def dim(self, p, q):
        return self.dims.get((p, q), 0)

    def _d(self, p, q):
        if (p, q) in self.D:
            return self.D[(p, q)]
        return sympy.zeros(0, self.dim(p, q))

    def _b(self, p, q):
        if (p, q) in self.B:
            return self.B[(p, q)]
        return sympy.zeros(0, self.dim(p, q))

    def _ddbar(self, p, q):
        if p < 0 or q < 0 or p + 1 > self.n or q + 1 > self.n:
            return sympy.zeros(self.dim(p + 1, q + 1), self.dim(p, q))
        return self._d(p, q + 1) * self._b(p, q)

    def dolbeault(self, p, q):
        prev = sympy_rank(self._b(p, q - 1)) if q > 0 else 0
        return self.dim(p, q) - sympy_rank(self._b(p, q)) - prev

    def bott_chern(self, p, q):
        stacked = self._d(p, q).col_join(self._b(p, q))
        kern = self.dim(p, q) - sympy_rank(stacked)
        img = sympy_rank(self._ddbar(p - 1, q - 1)) if p > 0 and q > 0 else 0
        return kern - img

    def aeppli(self, p, q):
        kern = self.dim(p, q) - sympy_rank(self._ddbar(p, q))
        cols = []
        if p > 0:
            cols.append(self._d(p - 1, q))
        if q > 0:
            cols.append(self._b(p, q - 1))
        img = sympy_rank(sympy.Matrix.hstack(*cols)) if cols else 0
        return kern - img

    def betti(self, k):
        def total(j):
            src = [(p, j - p) for p in range(self.n + 1) if 0 <= j - p <= self.n]
            tgt = [(p, j + 1 - p) for p in range(self.n + 1) if 0 <= j + 1 - p <= self.n]
            rows = sum(self.dim(*b) for b in tgt)
            cols = sum(self.dim(*b) for b in src)
            M = sympy.zeros(rows, cols)
            c0 = 0
            for p, q in src:
                r0 = 0
                for tp, tq in tgt:
                    if (tp, tq) == (p + 1, q):
                        M[r0:r0 + self.dim(tp, tq), c0:c0 + self.dim(p, q)] = self._d(p, q)
                    if (tp, tq) == (p, q + 1):
                        M[r0:r0 + self.dim(tp, tq), c0:c0 + self.dim(p, q)] = self._b(p, q)
                    r0 += self.dim(tp, tq)
                c0 += self.dim(p, q)
            return M, cols

        M, cols = total(k)
        rk = sympy_rank(M) if k < 2 * self.n else 0
        prev = sympy_rank(total(k - 1)[0]) if k > 0 else 0
        return cols - rk - prev


# -- positivity ------------------------------------------------------------------------

def charpoly_positive(H: list) -> bool:
    """Positive definiteness of a Hermitian matrix by Descartes' rule on det(x I - H).

    The roots are real, so the number of positive roots equals the number of
    sign changes in the coefficient sequence; all n roots positive iff the
    coefficients strictly alternate.
    """
    n = len(H)
    M = to_sympy(H, n, n)
    x = sympy.Symbol("x")
    coeffs = [sympy.nsimplify(sympy.expand(c)) for c in M.charpoly(x).all_coeffs()]
    if any(sympy.im(c) != 0 for c in coeffs):
        raise AssertionError("characteristic polynomial of a Hermitian matrix must be real")
    signs = [sympy.sign(c) for c in coeffs]
    if any(s == 0 for s in signs):
        return False
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    return changes == n
