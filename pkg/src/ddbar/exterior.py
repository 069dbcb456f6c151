"""Bigraded exterior algebra on eta^1..eta^n and their conjugates.

A basis monomial is stored as ``BasisForm(holo, anti)``; the canonical factor
order is all holomorphic factors (ascending) followed by all antiholomorphic
factors (ascending).  Every sign in the package is relative to this order.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping, NamedTuple

from .scalar import (
    ONE,
    ZERO,
    ExpressionError,
    Scalar,
    eval_expr,
    format_scalar,
    parse_expr,
)


class BasisForm(NamedTuple):
    holo: tuple
    anti: tuple

    @property
    def p(self) -> int:
        return len(self.holo)

    @property
    def q(self) -> int:
        return len(self.anti)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (len(self.holo), len(self.anti))

    def word(self) -> tuple:
        return self.holo + tuple(-j for j in self.anti)

    def sort_key(self):
        return (len(self.holo), len(self.anti), self.holo, self.anti)

    def label(self) -> str:
        return "e(" + ",".join(str(j) for j in self.word()) + ")"


UNIT = BasisForm((), ())


def _factor_key(j: int):
    return (0, j) if j > 0 else (1, -j)


def canonicalize(word: Iterable[int]) -> tuple[int, BasisForm | None]:
    """Sort a word of signed indices into canonical order.

    Returns ``(sign, basis_form)``; a repeated factor gives ``(0, None)``.
    """
    w = list(word)
    keys = [_factor_key(j) for j in w]
    if len(set(keys)) != len(keys):
        return 0, None
    inversions = 0
    for a in range(len(keys)):
        ka = keys[a]
        for b in range(a + 1, len(keys)):
            if keys[b] < ka:
                inversions += 1
    holo = tuple(sorted(j for j in w if j > 0))
    anti = tuple(sorted(-j for j in w if j < 0))
    return (-1 if inversions & 1 else 1), BasisForm(holo, anti)


def _merge_sign(a: tuple, b: tuple) -> int:
    """Sign of shuffling sorted ``b`` into sorted ``a``; 0 on overlap."""
    # count pairs (x in a, y in b) with y < x
    inv = 0
    bi = 0
    for x in a:
        while bi < len(b) and b[bi] < x:
            bi += 1
        if bi < len(b) and b[bi] == x:
            return 0
        inv += bi
    return -1 if inv & 1 else 1


def wedge_basis(x: BasisForm, y: BasisForm) -> tuple[int, BasisForm | None]:
    """``x ^ y`` for basis monomials, as ``(sign, result)``."""
    s1 = _merge_sign(x.holo, y.holo)
    if not s1:
        return 0, None
    s2 = _merge_sign(x.anti, y.anti)
    if not s2:
        return 0, None
    # move the holomorphic block of y past the antiholomorphic block of x
    sign = s1 * s2 * (-1 if (len(x.anti) * len(y.holo)) & 1 else 1)
    holo = tuple(sorted(x.holo + y.holo))
    anti = tuple(sorted(x.anti + y.anti))
    return sign, BasisForm(holo, anti)


def conjugate_basis(x: BasisForm) -> tuple[int, BasisForm]:
    sign = -1 if (len(x.holo) * len(x.anti)) & 1 else 1
    return sign, BasisForm(x.anti, x.holo)


def basis(p: int, q: int, n: int) -> list[BasisForm]:
    if not (0 <= p <= n and 0 <= q <= n):
        raise ValueError(f"bidegree ({p},{q}) out of range for n={n}")
    idx = range(1, n + 1)
    return [BasisForm(h, a) for h in combinations(idx, p) for a in combinations(idx, q)]


class Form:
    """Finite Q(i)-combination of basis monomials (possibly of mixed degree)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[BasisForm, Scalar] | None = None):
        clean = {}
        if terms:
            for k, v in terms.items():
                if v:
                    clean[k] = v if isinstance(v, Scalar) else Scalar.coerce(v)
        self.terms: dict[BasisForm, Scalar] = clean

    @classmethod
    def from_word(cls, word: Iterable[int], coef: Scalar = ONE) -> "Form":
        sign, b = canonicalize(word)
        if not sign:
            return cls()
        return cls({b: coef * sign})

    @classmethod
    def scalar(cls, s: Scalar) -> "Form":
        return cls({UNIT: Scalar.coerce(s)})

    @classmethod
    def generator(cls, j: int) -> "Form":
        return cls.from_word((j,))

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def bidegrees(self) -> set[tuple[int, int]]:
        return {b.bidegree for b in self.terms}

    @property
    def bidegree(self) -> tuple[int, int]:
        bd = self.bidegrees()
        if len(bd) != 1:
            raise ValueError(f"form is not of pure bidegree: {sorted(bd)}")
        return next(iter(bd))

    @property
    def degree(self) -> int:
        degs = {p + q for p, q in self.bidegrees()}
        if len(degs) != 1:
            raise ValueError("form is not homogeneous")
        return degs.pop()

    def component(self, p: int, q: int) -> "Form":
        return Form({b: c for b, c in self.terms.items() if b.bidegree == (p, q)})

    def coefficient(self, b: BasisForm) -> Scalar:
        return self.terms.get(b, ZERO)

    def max_index(self) -> int:
        return max((max(b.holo + b.anti, default=0) for b in self.terms), default=0)

    # arithmetic
    def _lift(self, other) -> "Form":
        if isinstance(other, Form):
            return other
        return Form.scalar(Scalar.coerce(other))

    def __add__(self, other):
        if not isinstance(other, (Form, Scalar, int)):
            return NotImplemented
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Form(out)

    __radd__ = __add__

    def __neg__(self):
        return Form({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Form, Scalar, int)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: Scalar) -> "Form":
        s = Scalar.coerce(s)
        if not s:
            return Form()
        return Form({k: v * s for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(ONE / Scalar.coerce(other))
        return NotImplemented

    def conjugate(self) -> "Form":
        return conjugate(self)

    def is_real(self) -> bool:
        return conjugate(self) == self

    def __eq__(self, other) -> bool:
        if isinstance(other, Form):
            return self.terms == other.terms
        if isinstance(other, (Scalar, int)):
            return self == Form.scalar(Scalar.coerce(other))
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[BasisForm, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for b, c in self.sorted_terms():
            if c.im == 0:
                neg = c.re < 0
                mag = format_scalar(-c if neg else c)
            else:
                neg = False
                mag = f"({format_scalar(c)})"
            term = b.label() if mag == "1" else f"{mag}*{b.label()}"
            if not parts:
                parts.append(("-" if neg else "") + term)
            else:
                parts.append((" - " if neg else " + ") + term)
        return "".join(parts)

    def __repr__(self):
        return f"Form({self.to_text()})"

    __str__ = to_text


def wedge(a: Form, b: Form) -> Form:
    out: dict[BasisForm, Scalar] = {}
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            sign, z = wedge_basis(x, y)
            if not sign:
                continue
            c = cx * cy
            if sign < 0:
                c = -c
            prev = out.get(z)
            out[z] = c if prev is None else prev + c
    return Form(out)


def wedge_all(forms: Iterable[Form]) -> Form:
    acc = Form.scalar(ONE)
    for f in forms:
        acc = wedge(acc, f)
    return acc


def power(a: Form, k: int) -> Form:
    """``a^k`` (wedge power, no factorial normalisation)."""
    return wedge_all([a] * k)


def conjugate(a: Form) -> Form:
    out = {}
    for x, c in a.terms.items():
        sign, y = conjugate_basis(x)
        cc = c.conj()
        out[y] = cc if sign > 0 else -cc
    return Form(out)


def e(*word: int) -> Form:
    """Shorthand used in tests and scripts: ``e(1, -2)`` is eta^1 ^ conj(eta^2)."""
    return Form.from_word(word)


def parse_form(text: str, assignment: Mapping[str, Scalar] | None = None, n: int | None = None) -> Form:
    """Parse and evaluate a form expression like ``i/2*e(1,-1) + D*e(2,-2)``."""
    tree = parse_expr(text, allow_forms=True)
    return eval_form(tree, assignment or {}, n)


def eval_form(tree, assignment: Mapping[str, Scalar], n: int | None = None) -> Form:
    def atom(word):
        if n is not None:
            for j in word:
                if abs(j) > n:
                    raise ExpressionError(f"index {j} out of range 1..{n}")
        return Form.from_word(word)

    v = eval_expr(tree, assignment, atom)
    if isinstance(v, Scalar):
        return Form.scalar(v)
    return v
