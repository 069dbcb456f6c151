"""Exact Gaussian-rational scalars and the coefficient expression language.

Scalars are elements of Q(i) stored as a pair of :class:`fractions.Fraction`.
Expressions are parsed into small immutable trees and evaluated against a
parameter assignment; the same tree type also carries basis-form atoms
``e(i1,...,ik)`` (see :mod:`ddbar.exterior`), so a single grammar serves both
coefficients and form expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union


class ExpressionError(ValueError):
    """Syntax error in a coefficient or form expression."""

    def __init__(self, message: str, column: int | None = None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class UnboundParameter(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"UnboundParameter {self.name}"


class DivisionByZero(ZeroDivisionError):
    pass


Rational = Union[int, Fraction]


class Scalar:
    """A Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational | "Scalar" = 0, im: Rational = 0):
        if isinstance(re, Scalar):
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im)
            return
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.re, self.im))

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {x!r} to Scalar")

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re + other, self.im)
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re - other, self.im)
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar(a * c)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        """Squared modulus ``re^2 + im^2``."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "Scalar":
        n = self.norm2()
        if n == 0:
            raise DivisionByZero("division by zero in Q(i)")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                if other == 0:
                    raise DivisionByZero("division by zero in Q(i)")
                return Scalar(self.re / other, self.im / other)
            return NotImplemented
        if not other.im:
            if other.re == 0:
                raise DivisionByZero("division by zero in Q(i)")
            return Scalar(self.re / other.re, self.im / other.re)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"Scalar({self.re}, {self.im})"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def conj(s: Scalar) -> Scalar:
    return s.conj()


def is_real(s: Scalar) -> bool:
    return s.is_real()


def format_scalar(s: Scalar) -> str:
    """Canonical text form ``a/b+c/d*i`` (parseable by :func:`parse_scalar`)."""
    if s.im == 0:
        return str(s.re)
    im = "i" if s.im == 1 else "-i" if s.im == -1 else f"{s.im}*i"
    if s.re == 0:
        return im
    if s.im > 0:
        return f"{s.re}+{im}"
    return f"{s.re}{im}"


# ---------------------------------------------------------------------------
# expression trees

@dataclass(frozen=True)
class Num:
    value: Scalar


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Conj:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class BasisAtom:
    """``e(i1,...,ik)``: positive j is eta^j, negative -j is the conjugate."""

    word: tuple


Expr = Union[Num, Param, Neg, Conj, BinOp, BasisAtom]


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/(),;]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ExpressionError(f"unexpected character {text[col - 1]!r}", col)
        kind = m.lastgroup
        start = m.start(kind) + 1
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := unary (('*'|'/') unary)*
    # unary  := '-' unary | '+' unary | atom
    # atom   := NUM | 'i' | NAME | 'conj' '(' expr ')' | 'e' '(' ints ')' | '(' expr ')'

    def __init__(self, text: str, allow_forms: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_forms = allow_forms

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ExpressionError(f"expected {value!r}, got {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise ExpressionError("empty expression", 1)
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionError(f"unexpected {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self) -> Expr:
        kind, val, col = self.take()
        if kind == "num":
            return Num(Scalar(int(val)))
        if kind == "name":
            if val == "i":
                return Num(I)
            if val == "conj":
                self.take("(")
                e = self.expr()
                self.take(")")
                return Conj(e)
            if val == "e" and self.peek()[1] == "(":
                if not self.allow_forms:
                    raise ExpressionError("basis forms not allowed in a coefficient", col)
                return self.basis()
            return Param(val)
        if val == "(":
            e = self.expr()
            self.take(")")
            return e
        raise ExpressionError(f"unexpected {val or 'end of input'!r}", col)

    def basis(self) -> BasisAtom:
        self.take("(")
        word = []
        if self.peek()[1] == ")":
            self.take()
            return BasisAtom(())
        while True:
            sign = 1
            tok = self.peek()
            if tok[1] == "-":
                self.take()
                sign = -1
            kind, val, col = self.take()
            if kind != "num" or int(val) == 0:
                raise ExpressionError("basis index must be a nonzero integer", col)
            word.append(sign * int(val))
            sep = self.take()
            if sep[1] == ")":
                break
            if sep[1] not in (",", ";"):
                raise ExpressionError(f"expected ',' or ')', got {sep[1]!r}", sep[2])
        return BasisAtom(tuple(word))


def parse_expr(text: str, allow_forms: bool = False) -> Expr:
    """Parse a coefficient expression (or a form expression if ``allow_forms``)."""
    return _Parser(text, allow_forms).parse()


def parse_scalar(text: str) -> Scalar:
    """Parse a parameter-free expression such as ``1/2+1/3*i``."""
    return eval_expr(parse_expr(text), {})


def free_params(e: Expr) -> set[str]:
    if isinstance(e, Param):
        return {e.name}
    if isinstance(e, (Neg, Conj)):
        return free_params(e.arg)
    if isinstance(e, BinOp):
        return free_params(e.left) | free_params(e.right)
    return set()


def basis_atoms(e: Expr) -> list[BasisAtom]:
    if isinstance(e, BasisAtom):
        return [e]
    if isinstance(e, (Neg, Conj)):
        return basis_atoms(e.arg)
    if isinstance(e, BinOp):
        return basis_atoms(e.left) + basis_atoms(e.right)
    return []


def eval_expr(e: Expr, assignment: Mapping[str, Scalar], form_atom=None):
    """Evaluate ``e`` exactly.

    ``form_atom`` converts a :class:`BasisAtom` into a value supporting the
    arithmetic protocol (used by the exterior algebra); without it, basis
    atoms are rejected.
    """
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Param):
        try:
            return Scalar.coerce(assignment[e.name])
        except KeyError:
            raise UnboundParameter(e.name) from None
    if isinstance(e, Neg):
        return -eval_expr(e.arg, assignment, form_atom)
    if isinstance(e, Conj):
        v = eval_expr(e.arg, assignment, form_atom)
        return v.conj() if isinstance(v, Scalar) else v.conjugate()
    if isinstance(e, BinOp):
        a = eval_expr(e.left, assignment, form_atom)
        b = eval_expr(e.right, assignment, form_atom)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if isinstance(b, Scalar):
            return a / b
        raise ExpressionError("division by a form")
    if isinstance(e, BasisAtom):
        if form_atom is None:
            raise ExpressionError("basis form in a scalar context")
        return form_atom(e.word)
    raise TypeError(f"not an expression: {e!r}")


def evaluate(text_or_expr, assignment: Mapping[str, Scalar] | None = None) -> Scalar:
    e = parse_expr(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    return eval_expr(e, assignment or {})


def parse_assignment(text: str) -> dict[str, Scalar]:
    """Parse ``k=v,k2=v2`` (values are parameter-free expressions)."""
    out: dict[str, Scalar] = {}
    if not text or not text.strip():
        return out
    for item in _split_top(text, ","):
        if "=" not in item:
            raise ExpressionError(f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        k = k.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", k) or k in ("i", "e", "conj"):
            raise ExpressionError(f"bad parameter name {k!r}")
        out[k] = parse_scalar(v)
    return out


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in (s.strip() for s in parts) if p]
