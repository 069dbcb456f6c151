"""Exact linear algebra over Q(i).

Matrices are lists of rows of :class:`Scalar`; a matrix maps column vectors
of its source space (length = number of columns) to the target.  Subspaces
are represented by a list of spanning column vectors.  Pivoting always takes
the first nonzero entry, so kernel bases are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalar import ONE, ZERO, Scalar

Matrix = list  # list[list[Scalar]]
Vector = list  # list[Scalar]


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def shape(m: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not m:
        return (0, cols or 0)
    return (len(m), len(m[0]))


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """``a @ b``; ``cols`` gives the column count when ``b`` has no rows."""
    if not a:
        return []
    k = len(a[0])
    if not b:
        c = cols if cols is not None else 0
        return [[ZERO] * c for _ in a]
    c = len(b[0])
    out = []
    for row in a:
        acc = [ZERO] * c
        for t in range(k):
            x = row[t]
            if not x:
                continue
            brow = b[t]
            for j in range(c):
                y = brow[j]
                if y:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def apply(m: Matrix, v: Vector) -> Vector:
    out = []
    for row in m:
        acc = ZERO
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def transpose(m: Matrix, rows_if_empty: int = 0) -> Matrix:
    if not m:
        return [[] for _ in range(rows_if_empty)]
    return [list(col) for col in zip(*m)]


def is_zero_matrix(m: Matrix) -> bool:
    return all(not x for row in m for x in row)


def conj_matrix(m: Matrix) -> Matrix:
    return [[x.conj() for x in row] for row in m]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def rref(m: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (exact)."""
    rows = [list(r) for r in m]
    if not rows:
        return [], []
    nc = len(rows[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        if pv != ONE:
            inv = ONE / pv
            rows[r] = [x * inv if x else x for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [x - f * y if y else x for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    # eliminate on the smaller side
    if len(m) > len(m[0]):
        m = transpose(m)
    return len(rref(m)[1])


def kernel(m: Matrix, ncols: int) -> list[Vector]:
    """Basis of the null space of ``m`` (a map from a space of dim ``ncols``)."""
    if not m:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(m, ncols)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for row, pc in zip(red, piv):
            if row[free]:
                v[pc] = -row[free]
        basis.append(v)
    return basis


def columns(m: Matrix, ncols: int) -> list[Vector]:
    if not m:
        return [[] for _ in range(ncols)]
    return [[row[j] for row in m] for j in range(ncols)]


def span_basis(vectors: Sequence[Vector], dim: int) -> list[Vector]:
    """A linearly independent spanning subset-equivalent basis (rref rows)."""
    if not vectors or dim == 0:
        return []
    red, _ = rref([list(v) for v in vectors], dim)
    return red


def span_dim(vectors: Sequence[Vector], dim: int) -> int:
    if not vectors or dim == 0:
        return 0
    return rank([list(v) for v in vectors])


def image(m: Matrix, ncols: int, nrows: int) -> list[Vector]:
    """Basis of the column space of ``m`` (vectors of length ``nrows``)."""
    if nrows == 0 or ncols == 0:
        return []
    return span_basis(columns(m, ncols), nrows)


def intersection(u: Sequence[Vector], v: Sequence[Vector], dim: int) -> list[Vector]:
    """Basis of span(u) ∩ span(v), via the kernel of the concatenation [U | -V]."""
    u = span_basis(u, dim)
    v = span_basis(v, dim)
    if not u or not v:
        return []
    k = len(u)
    stacked = [[u[j][i] for j in range(k)] + [-v[j][i] for j in range(len(v))] for i in range(dim)]
    out = []
    for coeffs in kernel(stacked, k + len(v)):
        w = [ZERO] * dim
        for j in range(k):
            c = coeffs[j]
            if c:
                w = [a + c * b for a, b in zip(w, u[j])]
        out.append(w)
    return span_basis(out, dim)


def contains(space: Sequence[Vector], vectors: Sequence[Vector], dim: int) -> bool:
    """Whether every vector in ``vectors`` lies in span(space)."""
    if not vectors:
        return True
    base = span_dim(space, dim)
    return span_dim(list(space) + list(vectors), dim) == base


def solve(m: Matrix, b: Vector, ncols: int) -> Vector | None:
    """One solution ``x`` of ``m x = b`` or None (free variables set to 0)."""
    if not m:
        return [ZERO] * ncols
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [ZERO] * ncols
    for row, pc in zip(red, piv):
        x[pc] = row[ncols]
    return x


def det(m: Matrix) -> Scalar:
    n = len(m)
    rows = [list(r) for r in m]
    d = ONE
    for c in range(n):
        pr = next((i for i in range(c, n) if rows[i][c]), None)
        if pr is None:
            return ZERO
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            d = -d
        pv = rows[c][c]
        d = d * pv
        inv = ONE / pv
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


def inverse(m: Matrix) -> Matrix | None:
    n = len(m)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref(aug, 2 * n)
    if len(piv) < n or piv[n - 1] != n - 1:
        return None
    return [row[n:] for row in red]


def realify(m: Matrix) -> Matrix:
    """The real 2x2-block form [[A, -B], [B, A]] of ``A + iB``."""
    top = [[x.re for x in row] + [-x.im for x in row] for row in m]
    bot = [[x.im for x in row] + [x.re for x in row] for row in m]
    return [[Scalar(x) for x in row] for row in top + bot]


def to_fraction_rows(m: Matrix) -> list[list[Fraction]]:
    return [[x.re for x in row] for row in m]
