"""Finite double complexes: bigraded bases plus exact matrices of del and delbar.

The ``.dcplx`` text format (TOML) is::

    [complex]
    name = "toy"
    n = 1
    unimodular = false          # optional; enables duality-based checks
    [complex."0,0"]
    basis = ["1"]
    del = [["0"]]               # rows index (p+1,q), columns index (p,q)
    delbar = [["0"]]            # rows index (p,q+1)
    conj = [["1"]]              # optional: rows index (q,p); conj(v) = C @ v̄

Entries are exact strings ``a/b+c/d*i`` (bare integers are accepted too).
Blocks for empty sources or targets are omitted.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Hashable

from . import linalg as la
from .scalar import ZERO, ExpressionError, Scalar, format_scalar, parse_scalar

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib


class ComplexError(ValueError):
    """A double complex failed to load or violates d^2 = 0 identities."""


Bidegree = tuple[int, int]


@dataclass
class DoubleComplex:
    n: int
    bases: dict[Bidegree, list[Hashable]]
    dels: dict[Bidegree, la.Matrix]
    delbars: dict[Bidegree, la.Matrix]
    conjs: dict[Bidegree, la.Matrix] | None = None
    unimodular: bool | None = None
    name: str = ""
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    # -- shape -------------------------------------------------------------
    def dim(self, p: int, q: int) -> int:
        return len(self.bases.get((p, q), ()))

    def bidegrees(self) -> list[Bidegree]:
        return [(p, q) for p in range(self.n + 1) for q in range(self.n + 1)]

    @property
    def has_conjugation(self) -> bool:
        return self.conjs is not None

    def _mat(self, store, p, q, tp, tq) -> la.Matrix:
        rows, cols = self.dim(tp, tq), self.dim(p, q)
        m = store.get((p, q))
        if m is None or rows == 0 or cols == 0:
            return la.zeros(rows, cols)
        return m

    def del_(self, p: int, q: int) -> la.Matrix:
        """Matrix of del: (p,q) -> (p+1,q)."""
        return self._mat(self.dels, p, q, p + 1, q)

    def delbar(self, p: int, q: int) -> la.Matrix:
        """Matrix of delbar: (p,q) -> (p,q+1)."""
        return self._mat(self.delbars, p, q, p, q + 1)

    def ddbar(self, p: int, q: int) -> la.Matrix:
        """Matrix of del∘delbar: (p,q) -> (p+1,q+1)."""
        key = ("ddbar", p, q)
        if key not in self._memo:
            self._memo[key] = la.matmul(
                self.del_(p, q + 1), self.delbar(p, q), cols=self.dim(p, q)
            )
        return self._memo[key]

    def conj(self, p: int, q: int) -> la.Matrix:
        if self.conjs is None:
            raise ComplexError("complex carries no conjugation")
        return self._mat(self.conjs, p, q, q, p)

    def total_bidegrees(self, k: int) -> list[Bidegree]:
        return [(p, k - p) for p in range(self.n + 1) if 0 <= k - p <= self.n]

    def total_dim(self, k: int) -> int:
        return sum(self.dim(p, q) for p, q in self.total_bidegrees(k))

    def total_d(self, k: int) -> la.Matrix:
        """Matrix of d = del + delbar from total degree k to k+1 (blocks ordered by p)."""
        src = self.total_bidegrees(k)
        tgt = self.total_bidegrees(k + 1)
        offs_t, o = {}, 0
        for b in tgt:
            offs_t[b] = o
            o += self.dim(*b)
        rows = la.zeros(o, self.total_dim(k))
        c0 = 0
        for p, q in src:
            d = self.dim(p, q)
            for tb, m in (((p + 1, q), self.del_(p, q)), ((p, q + 1), self.delbar(p, q))):
                if tb not in offs_t:
                    continue
                r0 = offs_t[tb]
                for i, row in enumerate(m):
                    for j, x in enumerate(row):
                        if x:
                            rows[r0 + i][c0 + j] = x
            c0 += d
        return rows

    # -- forms <-> vectors ---------------------------------------------------
    def index(self, p: int, q: int) -> dict:
        key = ("index", p, q)
        if key not in self._memo:
            self._memo[key] = {b: i for i, b in enumerate(self.bases.get((p, q), ()))}
        return self._memo[key]

    def to_vector(self, form, p: int, q: int) -> la.Vector:
        idx = self.index(p, q)
        v = [ZERO] * self.dim(p, q)
        for b, c in form.terms.items():
            if b.bidegree != (p, q):
                if c:
                    raise ValueError(f"form has a component outside bidegree ({p},{q})")
                continue
            v[idx[b]] = c
        return v

    def to_form(self, vec: la.Vector, p: int, q: int):
        from .exterior import Form

        return Form({b: c for b, c in zip(self.bases[(p, q)], vec) if c})

    # -- checks ----------------------------------------------------------------
    def identity_failures(self) -> list[str]:
        """Which of del^2 = 0, delbar^2 = 0, del delbar + delbar del = 0 fail."""
        bad = []
        for p, q in self.bidegrees():
            c = self.dim(p, q)
            if not c:
                continue
            dd = la.matmul(self.del_(p + 1, q), self.del_(p, q), cols=c)
            if not la.is_zero_matrix(dd):
                bad.append(f"del^2 != 0 at ({p},{q})")
            bb = la.matmul(self.delbar(p, q + 1), self.delbar(p, q), cols=c)
            if not la.is_zero_matrix(bb):
                bad.append(f"delbar^2 != 0 at ({p},{q})")
            db = la.matmul(self.del_(p, q + 1), self.delbar(p, q), cols=c)
            bd = la.matmul(self.delbar(p + 1, q), self.del_(p, q), cols=c)
            if db and not la.is_zero_matrix(la.add(db, bd)):
                bad.append(f"del delbar + delbar del != 0 at ({p},{q})")
        return bad

    def conjugation_failures(self) -> list[str]:
        """Conjugation must be an involution intertwining del and delbar."""
        if self.conjs is None:
            return []
        bad = []
        for p, q in self.bidegrees():
            c = self.dim(p, q)
            if not c:
                continue
            if self.dim(q, p) != c:
                bad.append(f"dim({p},{q}) != dim({q},{p})")
                continue
            C = self.conj(p, q)
            back = la.matmul(self.conj(q, p), la.conj_matrix(C), cols=c)
            if back != la.identity(c):
                bad.append(f"conjugation is not an involution at ({p},{q})")
            # conj(delbar v) = del conj(v):  C_{p,q+1} conj(Dbar) = Del_{q,p} C_{p,q}
            lhs = la.matmul(self.conj(p, q + 1), la.conj_matrix(self.delbar(p, q)), cols=c)
            rhs = la.matmul(self.del_(q, p), C, cols=c)
            if lhs != rhs:
                bad.append(f"conjugation does not swap del and delbar at ({p},{q})")
        return bad

    def digest(self) -> str:
        return hashlib.sha256(dump_raw_complex(self).encode()).hexdigest()


# ---------------------------------------------------------------------------
# .dcplx serialisation

def _fmt_matrix(m: la.Matrix) -> str:
    rows = ", ".join("[" + ", ".join(json.dumps(format_scalar(x)) for x in row) + "]" for row in m)
    return f"[{rows}]"


def dump_raw_complex(dc: DoubleComplex) -> str:
    lines = ["[complex]", f"name = {json.dumps(dc.name)}", f"n = {dc.n}"]
    if dc.unimodular is not None:
        lines.append(f"unimodular = {'true' if dc.unimodular else 'false'}")
    for p, q in dc.bidegrees():
        if not dc.dim(p, q):
            continue
        lines.append("")
        lines.append(f'[complex."{p},{q}"]')
        labels = [b.label() if hasattr(b, "label") else str(b) for b in dc.bases[(p, q)]]
        lines.append("basis = [" + ", ".join(json.dumps(s) for s in labels) + "]")
        if dc.dim(p + 1, q):
            lines.append(f"del = {_fmt_matrix(dc.del_(p, q))}")
        if dc.dim(p, q + 1):
            lines.append(f"delbar = {_fmt_matrix(dc.delbar(p, q))}")
        if dc.conjs is not None:
            lines.append(f"conj = {_fmt_matrix(dc.conj(p, q))}")
    return "\n".join(lines) + "\n"


def _parse_matrix(raw, rows: int, cols: int, where: str) -> la.Matrix:
    if not isinstance(raw, list) or len(raw) != rows:
        raise ComplexError(f"{where}: expected {rows} rows")
    out = []
    for r in raw:
        if not isinstance(r, list) or len(r) != cols:
            raise ComplexError(f"{where}: expected {cols} columns per row")
        row = []
        for x in r:
            try:
                row.append(Scalar(x) if isinstance(x, int) else parse_scalar(str(x)))
            except (ExpressionError, ZeroDivisionError) as exc:
                raise ComplexError(f"{where}: bad entry {x!r}: {exc}") from None
        out.append(row)
    return out


def load_raw_complex(text: str, check: bool = True) -> DoubleComplex:
    """Parse a ``.dcplx`` document and verify the anticommutation identities."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ComplexError(f"syntax error: {exc}") from None
    sec = doc.get("complex")
    if not isinstance(sec, dict):
        raise ComplexError("missing [complex] section")
    blocks: dict[Bidegree, dict] = {}
    for key, val in sec.items():
        if isinstance(val, dict):
            try:
                p, q = (int(s) for s in key.split(","))
            except ValueError:
                raise ComplexError(f"bad bidegree key {key!r}") from None
            if p < 0 or q < 0:
                raise ComplexError(f"negative bidegree {key!r}")
            blocks[(p, q)] = val
    n = sec.get("n")
    if n is None:
        n = max((max(b) for b in blocks), default=0)
    if any(p > n or q > n for p, q in blocks):
        raise ComplexError("bidegree exceeds n")
    bases = {}
    for b, val in blocks.items():
        labels = val.get("basis", [])
        if len(set(labels)) != len(labels):
            raise ComplexError(f"duplicate basis label at {b}")
        bases[b] = [str(s) for s in labels]

    def dim(p, q):
        return len(bases.get((p, q), ()))

    dels, delbars, conjs = {}, {}, {}
    has_conj = any("conj" in v for v in blocks.values())
    for (p, q), val in blocks.items():
        src = dim(p, q)
        if "del" in val and src and dim(p + 1, q):
            dels[(p, q)] = _parse_matrix(val["del"], dim(p + 1, q), src, f"del at ({p},{q})")
        if "delbar" in val and src and dim(p, q + 1):
            delbars[(p, q)] = _parse_matrix(val["delbar"], dim(p, q + 1), src, f"delbar at ({p},{q})")
        if has_conj and src:
            if "conj" not in val:
                raise ComplexError(f"conj missing at ({p},{q})")
            conjs[(p, q)] = _parse_matrix(val["conj"], dim(q, p), src, f"conj at ({p},{q})")
    dc = DoubleComplex(
        n=int(n),
        bases=bases,
        dels=dels,
        delbars=delbars,
        conjs=conjs if has_conj else None,
        unimodular=sec.get("unimodular"),
        name=str(sec.get("name", "")),
    )
    if check:
        bad = dc.identity_failures() + dc.conjugation_failures()
        if bad:
            raise ComplexError("; ".join(bad))
    return dc
