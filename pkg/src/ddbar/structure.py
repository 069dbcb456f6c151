"""Structure equations of Lie algebras with complex structure.

A ``.cplx`` file (TOML) gives the differentials of a (1,0)-coframe::

    [manifold]
    name = "iwasawa-abelian"
    dim = 3
    params = ["D"]

    [structure]
    d3 = "e(1,-1) + e(1,-2) + D*e(2,-2)"

    [coframe]                   # optional: new (1,0)-coframe eta_t
    eta2 = "e(2) + t*e(-2)"

Missing ``d<k>`` lines mean ``d eta^k = 0``; missing ``eta<k>`` lines mean
``eta^k_t = eta^k``.  Differentials of conjugate generators are derived by
conjugation.  Parameters are bound per call, never stored in the parsed object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from . import linalg as la
from .doublecomplex import DoubleComplex
from .exterior import BasisForm, Form, basis, canonicalize, conjugate, eval_form
from .scalar import (
    BasisAtom,
    BinOp,
    ExpressionError,
    Expr,
    Num,
    Scalar,
    basis_atoms,
    free_params,
    parse_expr,
)

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib


class ManifoldSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{message} ({loc})"
        super().__init__(message)


class NonIntegrable(ValueError):
    pass


class SingularChange(ValueError):
    pass


@dataclass(frozen=True)
class CoframeChange:
    """New generators ``eta^k_t`` as degree-1 form expressions in the old coframe."""

    n: int
    exprs: tuple  # n trees (BasisAtom words of length 1)
    sources: tuple = ()

    @classmethod
    def identity(cls, n: int) -> "CoframeChange":
        return cls(n, tuple(BasisAtom((k,)) for k in range(1, n + 1)))

    @classmethod
    def from_strings(cls, n: int, rows: Mapping[int, str] | list[str]) -> "CoframeChange":
        if isinstance(rows, list):
            rows = {k + 1: s for k, s in enumerate(rows)}
        exprs, srcs = [], []
        for k in range(1, n + 1):
            s = rows.get(k, f"e({k})")
            exprs.append(parse_expr(s, allow_forms=True))
            srcs.append(s)
        return cls(n, tuple(exprs), tuple(srcs))

    def params(self) -> set[str]:
        out = set()
        for e in self.exprs:
            out |= free_params(e)
        return out

    def matrix(self, assignment: Mapping[str, Scalar]) -> la.Matrix:
        """The 2n x 2n matrix taking (eta, conj eta) to (eta_t, conj eta_t)."""
        n = self.n
        top = []
        for k, tree in enumerate(self.exprs, 1):
            f = eval_form(tree, assignment, n)
            if f.is_zero() or any(b.p + b.q != 1 for b in f.terms):
                raise ExpressionError(f"eta{k}: coframe entries must be 1-forms")
            top.append(
                [f.coefficient(BasisForm((j,), ())) for j in range(1, n + 1)]
                + [f.coefficient(BasisForm((), (j,))) for j in range(1, n + 1)]
            )
        bottom = [[x.conj() for x in row[n:] + row[:n]] for row in top]
        return top + bottom


@dataclass(frozen=True)
class StructureEquations:
    n: int
    params: tuple
    d_exprs: tuple  # n expression trees
    name: str = ""
    sources: tuple = ()
    coframe: CoframeChange | None = None

    def differentials(self, assignment: Mapping[str, Scalar] | None = None) -> list[Form]:
        """d eta^k (k = 1..n) in the base coframe, evaluated."""
        a = assignment or {}
        return [eval_form(t, a, self.n) for t in self.d_exprs]

    def instantiate(self, assignment: Mapping[str, Scalar] | None = None) -> "Structure":
        """Concrete equations at ``assignment``, with the coframe change applied."""
        s = Structure(self.n, tuple(self.differentials(assignment)), self.name)
        if self.coframe is not None:
            s = apply_coframe(s, self.coframe.matrix(assignment or {}))
        return s

    def all_params(self) -> set[str]:
        out = set(self.params)
        for t in self.d_exprs:
            out |= free_params(t)
        if self.coframe is not None:
            out |= self.coframe.params()
        return out


def form_to_expr(f: Form) -> Expr:
    terms = [BinOp("*", Num(c), BasisAtom(b.word())) for b, c in f.sorted_terms()]
    if not terms:
        return Num(Scalar(0))
    acc = terms[0]
    for t in terms[1:]:
        acc = BinOp("+", acc, t)
    return acc


@dataclass(frozen=True)
class Structure:
    """Structure equations with every coefficient evaluated."""

    n: int
    d: tuple  # d eta^k as Forms, k = 1..n
    name: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def d_generator(self, j: int) -> Form:
        if j > 0:
            return self.d[j - 1]
        key = ("dbar-gen", j)
        if key not in self._cache:
            self._cache[key] = conjugate(self.d[-j - 1])
        return self._cache[key]

    def d_basis(self, b: BasisForm) -> Form:
        """d of a basis monomial by the graded Leibniz rule."""
        key = ("d", b)
        if key in self._cache:
            return self._cache[key]
        word = b.word()
        out: dict[BasisForm, Scalar] = {}
        for pos, j in enumerate(word):
            dj = self.d_generator(j)
            if dj.is_zero():
                continue
            pre, post = word[:pos], word[pos + 1:]
            sgn = -1 if pos & 1 else 1
            for x, c in dj.terms.items():
                s, y = canonicalize(pre + x.word() + post)
                if not s:
                    continue
                v = c if s * sgn > 0 else -c
                prev = out.get(y)
                out[y] = v if prev is None else prev + v
        res = Form(out)
        self._cache[key] = res
        return res

    def d_form(self, f: Form) -> Form:
        out = Form()
        for b, c in f.terms.items():
            out = out + self.d_basis(b).scale(c)
        return out

    def to_equations(self, name: str | None = None) -> StructureEquations:
        return StructureEquations(
            n=self.n,
            params=(),
            d_exprs=tuple(form_to_expr(f) for f in self.d),
            name=self.name if name is None else name,
            sources=tuple(f.to_text() for f in self.d),
        )


# ---------------------------------------------------------------------------
# parsing

def _locate_key(text: str, section: str, key: str) -> tuple[int | None, int | None]:
    """Line and column of the opening quote of ``key = "..."`` in ``section``."""
    cur = None
    for lineno, line in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*\[\s*([A-Za-z_]+)\s*\]", line)
        if m:
            cur = m.group(1)
            continue
        if cur == section:
            m = re.match(rf"\s*{re.escape(key)}\s*=\s*", line)
            if m:
                return lineno, m.end() + 2  # 1-based, skip the quote
    return None, None


def parse_manifold(text: str) -> StructureEquations:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        msg = str(exc)
        line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
        m = re.search(r"line (\d+), column (\d+)", msg)
        if line is None and m:
            line, col = int(m.group(1)), int(m.group(2))
        elif line is None and "end of document" in msg:
            line = text.count("\n") + 1
            col = len(text.rsplit("\n", 1)[-1]) + 1
        raise ManifoldSyntaxError(f"syntax error: {msg.split(' (at')[0]}", line, col) from None

    man = doc.get("manifold")
    if not isinstance(man, dict):
        raise ManifoldSyntaxError("missing [manifold] section")
    n = man.get("dim")
    if not isinstance(n, int) or n < 1:
        raise ManifoldSyntaxError("[manifold] dim must be a positive integer", *_locate_key(text, "manifold", "dim"))
    params = man.get("params", [])
    if isinstance(params, str):
        params = [p.strip() for p in params.split(",") if p.strip()]
    if len(set(params)) != len(params):
        raise ManifoldSyntaxError("duplicate parameter name")
    for pname in params:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", pname) or pname in ("i", "e", "conj"):
            raise ManifoldSyntaxError(f"bad parameter name {pname!r}")

    def parse_section(section: str, prefix: str) -> dict[int, tuple[Expr, str]]:
        out: dict[int, tuple[Expr, str]] = {}
        for key, val in doc.get(section, {}).items():
            line, col0 = _locate_key(text, section, key)
            m = re.fullmatch(rf"{prefix}(\d+)", key)
            if not m:
                raise ManifoldSyntaxError(f"unknown key {key!r} in [{section}]", line)
            k = int(m.group(1))
            if not 1 <= k <= n:
                raise ManifoldSyntaxError(f"generator index {k} out of range 1..{n}", line)
            if k in out:
                raise ManifoldSyntaxError(f"duplicate generator {key}", line)
            src = str(val)
            try:
                tree = parse_expr(src, allow_forms=True)
            except ExpressionError as exc:
                col = None if exc.column is None or col0 is None else col0 + exc.column - 1
                raise ManifoldSyntaxError(str(exc).split(" (column")[0], line, col) from None
            for atom in basis_atoms(tree):
                for j in atom.word:
                    if abs(j) > n:
                        raise ManifoldSyntaxError(f"index {j} out of range 1..{n}", line)
            out[k] = (tree, src)
        return out

    diffs = parse_section("structure", "d")
    d_exprs, sources = [], []
    for k in range(1, n + 1):
        tree, src = diffs.get(k, (Num(Scalar(0)), "0"))
        d_exprs.append(tree)
        sources.append(src)

    coframe = None
    if "coframe" in doc:
        rows = parse_section("coframe", "eta")
        exprs, srcs = [], []
        for k in range(1, n + 1):
            tree, src = rows.get(k, (BasisAtom((k,)), f"e({k})"))
            exprs.append(tree)
            srcs.append(src)
        coframe = CoframeChange(n, tuple(exprs), tuple(srcs))

    se = StructureEquations(
        n=n,
        params=tuple(params),
        d_exprs=tuple(d_exprs),
        name=str(man.get("name", "")),
        sources=tuple(sources),
        coframe=coframe,
    )
    undeclared = se.all_params() - set(params)
    if undeclared:
        raise ManifoldSyntaxError(f"undeclared parameter(s): {', '.join(sorted(undeclared))}")
    return se


def load_manifold(path) -> StructureEquations:
    with open(path, encoding="utf-8") as fh:
        return parse_manifold(fh.read())


# ---------------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    d_squared_zero: bool
    integrable: bool
    abelian: bool
    unimodular: bool
    d_squared: dict = field(default_factory=dict)  # k -> text of d(d eta^k) when nonzero
    obstruction: dict = field(default_factory=dict)  # k -> (0,2) part of d eta^k

    @property
    def ok(self) -> bool:
        return self.d_squared_zero and self.integrable

    def as_dict(self) -> dict:
        return {
            "d2_zero": self.d_squared_zero,
            "integrable": self.integrable,
            "abelian": self.abelian,
            "unimodular": self.unimodular,
            "d2_failures": {str(k): v for k, v in self.d_squared.items()},
            "obstruction": {str(k): v for k, v in self.obstruction.items()},
        }


def _as_structure(se, assignment) -> Structure:
    if isinstance(se, Structure):
        return se
    return se.instantiate(assignment)


def is_unimodular(s: Structure) -> bool:
    """d vanishes on all forms of degree 2n-1 iff every ad_X is traceless."""
    n = s.n
    for p, q in ((n - 1, n), (n, n - 1)):
        for b in basis(p, q, n):
            if not s.d_basis(b).is_zero():
                return False
    return True


def validate(se, assignment: Mapping[str, Scalar] | None = None) -> ValidationReport:
    s = _as_structure(se, assignment)
    d2 = {}
    for k in range(1, s.n + 1):
        dd = s.d_form(s.d[k - 1])
        if not dd.is_zero():
            d2[k] = dd.to_text()
    obstruction = {}
    abelian = True
    for k, f in enumerate(s.d, 1):
        bad = f.component(0, 2)
        if not bad.is_zero():
            obstruction[k] = bad.to_text()
        if any(b.bidegree != (1, 1) for b in f.terms):
            abelian = False
    return ValidationReport(
        d_squared_zero=not d2,
        integrable=not obstruction,
        abelian=abelian,
        unimodular=is_unimodular(s),
        d_squared=d2,
        obstruction=obstruction,
    )


def build_complex(se, assignment: Mapping[str, Scalar] | None = None) -> DoubleComplex:
    """Split d into del and delbar on the full invariant exterior algebra."""
    s = _as_structure(se, assignment)
    n = s.n
    bases = {(p, q): basis(p, q, n) for p in range(n + 1) for q in range(n + 1)}
    index = {bd: {b: i for i, b in enumerate(bs)} for bd, bs in bases.items()}
    dels, delbars, conjs = {}, {}, {}
    for (p, q), bs in bases.items():
        dm = la.zeros(len(bases.get((p + 1, q), ())), len(bs))
        bm = la.zeros(len(bases.get((p, q + 1), ())), len(bs))
        cm = la.zeros(len(bases[(q, p)]), len(bs))
        for j, b in enumerate(bs):
            for x, c in s.d_basis(b).terms.items():
                if x.bidegree == (p + 1, q):
                    dm[index[(p + 1, q)][x]][j] = c
                elif x.bidegree == (p, q + 1):
                    bm[index[(p, q + 1)][x]][j] = c
                else:
                    raise NonIntegrable(
                        f"d{b.label()} has a component of bidegree {x.bidegree}"
                    )
            sign, cb = (-1 if (p * q) & 1 else 1), BasisForm(b.anti, b.holo)
            cm[index[(q, p)][cb]][j] = Scalar(sign)
        dels[(p, q)] = dm
        delbars[(p, q)] = bm
        conjs[(p, q)] = cm
    return DoubleComplex(
        n=n,
        bases=bases,
        dels=dels,
        delbars=delbars,
        conjs=conjs,
        unimodular=is_unimodular(s),
        name=s.name,
    )


class TwistedBasis(NamedTuple):
    """Basis form of the summand twisted by the character named ``tag``."""

    tag: str
    form: BasisForm

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.form.bidegree

    def label(self) -> str:
        return f"{self.tag}*{self.form.label()}" if self.tag else self.form.label()


def twisted_complex(se, twists: Mapping[str, Form], assignment: Mapping[str, Scalar] | None = None,
                    name: str | None = None) -> DoubleComplex:
    """Direct sum over ``tag -> theta`` of the invariant complexes with ``d + theta∧``.

    ``theta`` is the logarithmic derivative of a character (a closed invariant
    1-form): ``d(f w) = f (theta∧w + dw)`` when ``df = f theta``.  The empty
    tag with ``theta = 0`` is the untwisted summand.  Conjugation pairs the
    summands of ``theta`` and ``conj(theta)``; it is attached only when every
    summand has its partner.
    """
    s = _as_structure(se, assignment)
    n = s.n
    tags = list(twists)
    for tag, th in twists.items():
        if any(b.p + b.q != 1 for b in th.terms):
            raise ValueError(f"twist {tag!r} is not a 1-form")
        if not s.d_form(th).is_zero():
            raise ValueError(f"twist {tag!r} is not closed")
    partner = {}
    for tag in tags:
        cj = conjugate(twists[tag])
        partner[tag] = next((u for u in tags if twists[u] == cj), None)
    with_conj = all(v is not None for v in partner.values())

    inv = {(p, q): basis(p, q, n) for p in range(n + 1) for q in range(n + 1)}
    pos = {bd: {b: i for i, b in enumerate(bs)} for bd, bs in inv.items()}
    bases, dels, delbars, conjs = {}, {}, {}, {}
    for (p, q), bs in inv.items():
        m = len(bs)
        bases[(p, q)] = [TwistedBasis(tag, b) for tag in tags for b in bs]
        rd, rb = len(inv.get((p + 1, q), ())), len(inv.get((p, q + 1), ()))
        dm = la.zeros(rd * len(tags), m * len(tags))
        bm = la.zeros(rb * len(tags), m * len(tags))
        for t, tag in enumerate(tags):
            th = twists[tag]
            for j, b in enumerate(bs):
                for x, c in (s.d_basis(b) + th * Form({b: Scalar(1)})).terms.items():
                    if x.bidegree == (p + 1, q):
                        dm[t * rd + pos[(p + 1, q)][x]][t * m + j] = c
                    elif x.bidegree == (p, q + 1):
                        bm[t * rb + pos[(p, q + 1)][x]][t * m + j] = c
                    else:
                        raise NonIntegrable(f"d{b.label()} has a component of bidegree {x.bidegree}")
        dels[(p, q)], delbars[(p, q)] = dm, bm
        if with_conj:
            cm = la.zeros(len(inv[(q, p)]) * len(tags), m * len(tags))
            sign = Scalar(-1 if (p * q) & 1 else 1)
            for t, tag in enumerate(tags):
                u = tags.index(partner[tag])
                for j, b in enumerate(bs):
                    cm[u * len(inv[(q, p)]) + pos[(q, p)][BasisForm(b.anti, b.holo)]][t * m + j] = sign
            conjs[(p, q)] = cm
    dc = DoubleComplex(
        n=n,
        bases=bases,
        dels=dels,
        delbars=delbars,
        conjs=conjs if with_conj else None,
        unimodular=is_unimodular(s) and with_conj,
        name=name if name is not None else s.name,
    )
    bad = dc.identity_failures()
    if bad:
        raise ValueError("twisted differentials do not form a double complex: " + "; ".join(bad))
    return dc


# ---------------------------------------------------------------------------
# coframe changes

def apply_coframe(s: Structure, M: la.Matrix) -> Structure:
    """Rewrite ``s`` in the coframe whose (eta_t, conj eta_t) = M (eta, conj eta)."""
    n = s.n
    Minv = la.inverse(M)
    if Minv is None:
        raise SingularChange("coframe change is not invertible")

    def old_gen(col: int) -> int:
        return col + 1 if col < n else -(col - n + 1)

    # old generator (signed index) as a 1-form in the new generators
    old_in_new: dict[int, Form] = {}
    for r in range(2 * n):
        terms = {}
        for c in range(2 * n):
            x = Minv[r][c]
            if x:
                terms[BasisForm((c + 1,), ()) if c < n else BasisForm((), (c - n + 1,))] = x
        old_in_new[old_gen(r)] = Form(terms)

    def substitute(f: Form) -> Form:
        out = Form()
        for b, c in f.terms.items():
            acc = Form.scalar(c)
            for j in b.word():
                acc = acc * old_in_new[j]
            out = out + acc
        return out

    new_d = []
    for k in range(n):
        dk = Form()
        for c in range(2 * n):
            x = M[k][c]
            if x:
                dk = dk + s.d_generator(old_gen(c)).scale(x)
        new_d.append(substitute(dk))
    return Structure(n, tuple(new_d), s.name)


def change_coframe(se, change: CoframeChange, assignment: Mapping[str, Scalar] | None = None) -> StructureEquations:
    """New structure equations after the coframe change, evaluated at ``assignment``.

    The result is parameter-free; its (0,2) components, if any, are reported
    by :func:`validate` as the integrability obstruction.
    """
    a = assignment or {}
    s = _as_structure(se, a)
    out = apply_coframe(s, change.matrix(a))
    name = (s.name + "_t") if s.name else ""
    return out.to_equations(name)
