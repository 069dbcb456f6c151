"""Invariant Hermitian metrics: positivity, balanced/Gauduchon/sG, LCB, and a
certificate search for closed positive (n-1,n-1)-forms.

A real (1,1)-form is written ``ω = i Σ H_jk η^j ∧ conj(η^k)`` with H Hermitian.
Positivity is decided exactly by leading principal minors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import linalg as la
from .cohomology import im_delbar
from .doublecomplex import DoubleComplex
from .exterior import BasisForm, Form, e, power, wedge, wedge_all
from .scalar import I, ONE, ZERO, Scalar


class MetricError(ValueError):
    pass


def hermitian_matrix(omega: Form, n: int) -> la.Matrix:
    """H with ω = i Σ H_jk e(j,-k)."""
    if not omega.is_zero() and omega.bidegrees() != {(1, 1)}:
        raise MetricError(f"expected a (1,1)-form, got bidegrees {sorted(omega.bidegrees())}")
    return [[-I * omega.coefficient(BasisForm((j,), (k,))) for k in range(1, n + 1)] for j in range(1, n + 1)]


def volume_form(n: int) -> Form:
    """Π_j (i η^j ∧ conj η^j), a positive top form."""
    return wedge_all(e(j, -j).scale(I) for j in range(1, n + 1))


def induced_hermitian_matrix(Omega: Form, n: int) -> la.Matrix:
    """H(Ω) with Ω ∧ (i φ ∧ conj φ) = (φ* H(Ω) φ) vol for (1,0)-forms φ."""
    if not Omega.is_zero() and Omega.bidegrees() != {(n - 1, n - 1)}:
        raise MetricError(f"expected an ({n-1},{n-1})-form")
    top = BasisForm(tuple(range(1, n + 1)), tuple(range(1, n + 1)))
    vol = volume_form(n).coefficient(top)
    c = [[wedge(Omega, e(j, -k).scale(I)).coefficient(top) / vol for k in range(1, n + 1)] for j in range(1, n + 1)]
    return la.transpose(c)


def is_hermitian(H: la.Matrix) -> bool:
    return all(H[i][j] == H[j][i].conj() for i in range(len(H)) for j in range(len(H)))


def leading_minors(H: la.Matrix) -> list[Scalar]:
    return [la.det([row[:k] for row in H[:k]]) for k in range(1, len(H) + 1)]


def is_positive_definite(H: la.Matrix) -> bool:
    """Sylvester's criterion, exact."""
    if not is_hermitian(H):
        raise MetricError("matrix is not Hermitian")
    for m in leading_minors(H):
        if m.im != 0:
            raise MetricError("non-real principal minor")
        if m.re <= 0:
            return False
    return True


def check_positive(form: Form, n: int) -> bool:
    """Positivity of a real (1,1)-form, or of a real (n-1,n-1)-form via H(Ω)."""
    if form.is_zero():
        return False
    if not form.is_real():
        raise MetricError("form is not real")
    bd = form.bidegree
    if bd == (1, 1):
        return is_positive_definite(hermitian_matrix(form, n))
    if bd == (n - 1, n - 1):
        return is_positive_definite(induced_hermitian_matrix(form, n))
    raise MetricError(f"positivity is defined here for (1,1) or ({n-1},{n-1}) forms, got {bd}")


def verify_power(omega: Form, Omega: Form, n: int) -> bool:
    return power(omega, n - 1) == Omega


# -- metric conditions ---------------------------------------------------------

@dataclass
class MetricReport:
    positive: bool
    balanced: bool
    gauduchon: bool
    strongly_gauduchon: bool
    lcb: str  # "yes" | "no" | "not-applicable"
    lee_form: Optional[Form] = None
    power: Optional[Form] = None
    hermitian: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "positive": self.positive,
            "balanced": self.balanced,
            "gauduchon": self.gauduchon,
            "strongly_gauduchon": self.strongly_gauduchon,
            "lcb": self.lcb,
            "lee_form": None if self.lee_form is None else self.lee_form.to_text(),
            "power": None if self.power is None else self.power.to_text(),
            "hermitian": [[str(x) for x in row] for row in self.hermitian],
        }

    def flat(self) -> dict:
        return {
            "positive": self.positive,
            "balanced": self.balanced,
            "gauduchon": self.gauduchon,
            "sg": self.strongly_gauduchon,
            "lcb": self.lcb,
        }


def _require_forms(dc: DoubleComplex):
    n = dc.n
    if not dc.bases.get((0, 0)) or not isinstance(dc.bases[(0, 0)][0], BasisForm):
        raise MetricError("metric checks need a complex built from structure equations")
    return n


def balanced_conditions(dc: DoubleComplex, Omega: Form) -> tuple[bool, bool, bool]:
    """(balanced, Gauduchon, strongly Gauduchon) for Ω = ω^{n-1}."""
    n = _require_forms(dc)
    v = dc.to_vector(Omega, n - 1, n - 1)
    dv = la.apply(dc.del_(n - 1, n - 1), v)
    bv = la.apply(dc.delbar(n - 1, n - 1), v)
    balanced = not any(dv) and not any(bv)
    gauduchon = not any(la.apply(dc.ddbar(n - 1, n - 1), v))
    sg = gauduchon and la.contains(im_delbar(dc, n, n - 1), [dv], dc.dim(n, n - 1))
    return balanced, gauduchon, sg


def lee_form(dc: DoubleComplex, Omega: Form) -> Optional[Form]:
    """Invariant real θ with dΩ = θ ∧ Ω and dθ = 0, or None.

    For positive Ω, θ -> θ ∧ Ω is injective on 1-forms, so the (n,n-1) part
    ``del Ω = θ^{1,0} ∧ Ω`` determines θ^{1,0}.
    """
    n = _require_forms(dc)
    v = dc.to_vector(Omega, n - 1, n - 1)
    dOm = la.apply(dc.del_(n - 1, n - 1), v)
    cols = [dc.to_vector(wedge(e(j), Omega), n, n - 1) for j in range(1, n + 1)]
    A = la.transpose(cols) if cols and cols[0] else []
    a = la.solve(A, dOm, n)
    if a is None:
        return None
    theta10 = Form({BasisForm((j,), ()): a[j - 1] for j in range(1, n + 1)})
    theta = theta10 + theta10.conjugate()
    # full check, including the (n-1,n) component
    bv = la.apply(dc.delbar(n - 1, n - 1), v)
    dOmega = dc.to_form(dOm, n, n - 1) + dc.to_form(bv, n - 1, n)
    if wedge(theta, Omega) != dOmega:
        return None
    if not _d_form(dc, theta).is_zero():
        return None
    return theta


def _d_form(dc: DoubleComplex, f: Form) -> Form:
    out = Form()
    for p, q in f.bidegrees():
        v = dc.to_vector(f.component(p, q), p, q)
        if dc.dim(p + 1, q):
            out = out + dc.to_form(la.apply(dc.del_(p, q), v), p + 1, q)
        if dc.dim(p, q + 1):
            out = out + dc.to_form(la.apply(dc.delbar(p, q), v), p, q + 1)
    return out


def check_lcb(dc: DoubleComplex, omega: Form) -> tuple[str, Optional[Form]]:
    n = dc.n
    Omega = power(omega, n - 1)
    theta = lee_form(dc, Omega)
    return ("yes", theta) if theta is not None else ("no", None)


def check_metric(dc: DoubleComplex, omega: Form) -> MetricReport:
    n = _require_forms(dc)
    if not omega.is_real():
        raise MetricError("metric form is not real")
    H = hermitian_matrix(omega, n)
    positive = is_positive_definite(H)
    Omega = power(omega, n - 1)
    balanced, gauduchon, sg = balanced_conditions(dc, Omega)
    if positive:
        lcb, theta = check_lcb(dc, omega)
    else:
        lcb, theta = "not-applicable", None
    return MetricReport(
        positive=positive,
        balanced=balanced,
        gauduchon=gauduchon,
        strongly_gauduchon=sg,
        lcb=lcb,
        lee_form=theta,
        power=Omega,
        hermitian=H,
    )


def check_balanced(dc: DoubleComplex, omega: Form) -> MetricReport:
    return check_metric(dc, omega)


# -- certificate search ----------------------------------------------------------

def standard_metric(n: int) -> Form:
    return sum((e(j, -j).scale(Scalar(0, Fraction(1, 2))) for j in range(1, n + 1)), Form())


def closed_real_forms(dc: DoubleComplex, p: int, q: int | None = None) -> list[Form]:
    """Rational basis of the real d-closed forms of bidegree (p,p)."""
    q = p if q is None else q
    N = dc.dim(p, q)
    C = dc.conj(p, q)
    blocks = []
    # reality C(x - iy) = x + iy, del(x + iy) = 0, delbar(x + iy) = 0
    rows_c = [[C[i][j] - (ONE if i == j else ZERO) for j in range(N)] + [-I * C[i][j] - (I if i == j else ZERO) for j in range(N)] for i in range(N)]
    blocks.extend(rows_c)
    for M in (dc.del_(p, q), dc.delbar(p, q)):
        blocks.extend([list(row) + [I * x for x in row] for row in M])
    real = [[Scalar(x.re) for x in row] for row in blocks] + [[Scalar(x.im) for x in row] for row in blocks]
    sol = la.kernel(real, 2 * N)
    return [dc.to_form([Scalar(v[i].re, v[N + i].re) for i in range(N)], p, q) for v in sol]


def _realvec(dc, f: Form, p, q) -> list[Fraction]:
    v = dc.to_vector(f, p, q)
    return [x.re for x in v] + [x.im for x in v]


def _project(dc: DoubleComplex, f: Form, basis: list[Form], p: int) -> Form:
    """Orthogonal projection (coefficient inner product) onto span(basis)."""
    K = [_realvec(dc, b, p, p) for b in basis]
    target = _realvec(dc, f, p, p)
    gram = [[Scalar(sum(a * b for a, b in zip(u, w))) for w in K] for u in K]
    rhs = [Scalar(sum(a * b for a, b in zip(u, target))) for u in K]
    c = la.solve(gram, rhs, len(K))
    out = Form()
    for ci, b in zip(c, basis):
        out = out + b.scale(ci)
    return out


@dataclass
class Certificate:
    Omega: Form
    trial: int
    method: str

    def as_dict(self) -> dict:
        return {"Omega": self.Omega.to_text(), "trial": self.trial, "method": self.method}


def _random_positive(n: int, rng: random.Random) -> Form:
    """A random positive (1,1)-form with small rational entries (diagonally dominant)."""
    H = [[ZERO] * n for _ in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            z = Scalar(Fraction(rng.randint(-4, 4), 8), Fraction(rng.randint(-4, 4), 8))
            H[j][k] = z
            H[k][j] = z.conj()
    for j in range(n):
        off = sum(abs(H[j][k].re) + abs(H[j][k].im) for k in range(n) if k != j)
        H[j][j] = Scalar(off + Fraction(rng.randint(1, 8), 4))
    return sum(
        (e(j + 1, -(k + 1)).scale(I * H[j][k]) for j in range(n) for k in range(n) if H[j][k]),
        Form(),
    )


def find_balanced(dc: DoubleComplex, budget: int = 64, seed: int = 0) -> Optional[Certificate]:
    """Search for a d-closed positive real (n-1,n-1)-form.

    Trials, in order, each consuming one unit of budget: the (n-1)-th power of
    the diagonal metric; its projection onto closed forms; then, for trial k,
    a candidate drawn from ``Random(f"{seed}:{k}")``: alternately the projected
    power of a random positive metric and a random integer combination of the
    closed basis added to the projected diagonal candidate.
    """
    n = _require_forms(dc)
    p = n - 1
    if budget <= 0:
        return None
    diag = power(standard_metric(n), p)
    closed_basis: list[Form] | None = None

    def closed(f: Form) -> bool:
        return all(not x for x in la.apply(dc.del_(p, p), dc.to_vector(f, p, p))) and all(
            not x for x in la.apply(dc.delbar(p, p), dc.to_vector(f, p, p))
        )

    def good(f: Form) -> bool:
        return not f.is_zero() and f.is_real() and closed(f) and check_positive(f, n)

    if good(diag):
        return Certificate(diag, 0, "diagonal")
    closed_basis = closed_real_forms(dc, p)
    if not closed_basis:
        return None
    base = _project(dc, diag, closed_basis, p)
    if budget > 1 and good(base):
        return Certificate(base, 1, "projected-diagonal")
    for k in range(2, budget):
        rng = random.Random(f"{seed}:{k}")
        if k % 2 == 0:
            cand = _project(dc, power(_random_positive(n, rng), p), closed_basis, p)
            method = "projected-random-metric"
        else:
            cand = base
            for b in closed_basis:
                c = rng.randint(-2, 2)
                if c:
                    cand = cand + b.scale(Scalar(Fraction(c, 4)))
            method = "random-combination"
        if good(cand):
            return Certificate(cand, k, method)
    return None
