"""Decision layer: ddbar-degrees, sGG, the (n-1,n)-th strong and weak ddbar-Lemmas."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from . import linalg as la
from .cohomology import (
    CohomologyTable,
    cohomology_table,
    im_ddbar,
    im_sum,
    ker_both,
    natural_map_ranks,
    t_map_rank,
)
from .doublecomplex import DoubleComplex
from .scalar import I, ZERO, Scalar


def delta_degree(table: CohomologyTable, k: int) -> int:
    """sum_{p+q=k} (h_BC + h_A) - 2 b_k."""
    s = sum(table.bc.get((p, k - p), 0) + table.a.get((p, k - p), 0) for p in range(k + 1))
    return s - 2 * table.betti.get(k, 0)


def check_ddbar_lemma(table: CohomologyTable) -> bool:
    return all(delta_degree(table, k) == 0 for k in range(1, 2 * table.n + 1))


@dataclass
class SGGReport:
    verdict: bool
    iii_dolbeault_to_aeppli_injective: bool
    iv_t_vanishes: bool
    vi_bc_equals_dolbeault: bool
    vii_betti_equality: bool

    @property
    def consistent(self) -> bool:
        vals = {
            self.iii_dolbeault_to_aeppli_injective,
            self.iv_t_vanishes,
            self.vi_bc_equals_dolbeault,
            self.vii_betti_equality,
        }
        return len(vals) == 1


def check_sgg(dc: DoubleComplex, table: CohomologyTable | None = None) -> SGGReport:
    n = dc.n
    t = table or cohomology_table(dc)
    ranks = natural_map_ranks(dc, n, n - 1)
    vii = t.betti[1] == 2 * t.dolbeault[(0, 1)]
    return SGGReport(
        verdict=vii,
        iii_dolbeault_to_aeppli_injective=ranks.injective["dolbeault_to_a"],
        iv_t_vanishes=t_map_rank(dc) == 0,
        vi_bc_equals_dolbeault=t.bc[(0, 1)] == t.dolbeault[(0, 1)],
        vii_betti_equality=vii,
    )


@dataclass
class StrongLemmaReport:
    verdict: bool
    direct: bool
    numeric: bool


def strong_lemma_direct(dc: DoubleComplex) -> bool:
    """ker del ∩ ker delbar ∩ (im del + im delbar) ⊆ im del delbar at (n-1,n)."""
    n = dc.n
    p, q = n - 1, n
    dim = dc.dim(p, q)
    closed_exact = la.intersection(ker_both(dc, p, q), im_sum(dc, p, q), dim)
    return la.contains(im_ddbar(dc, p, q), closed_exact, dim)


def check_strong_lemma(dc: DoubleComplex, table: CohomologyTable | None = None) -> StrongLemmaReport:
    t = table or cohomology_table(dc)
    direct = strong_lemma_direct(dc)
    numeric = t.betti[1] == 2 * t.a[(0, 1)]
    return StrongLemmaReport(verdict=direct, direct=direct, numeric=numeric)


# -- weak lemma ---------------------------------------------------------------

def _real_system(blocks: list[list], rows: int) -> la.Matrix:
    """Realify ``sum_j K_j r_j = 0`` for complex K_j acting on real unknowns r_j."""
    re_rows = [[] for _ in range(rows)]
    im_rows = [[] for _ in range(rows)]
    for K, ncols in blocks:
        for i in range(rows):
            row = K[i] if K else [ZERO] * ncols
            re_rows[i].extend(Scalar(x.re) for x in row)
            im_rows[i].extend(Scalar(x.im) for x in row)
    return re_rows + im_rows


def _scale(m: la.Matrix, s: Scalar) -> la.Matrix:
    return [[x * s for x in row] for row in m]


def weak_lemma_test_space(dc: DoubleComplex) -> list[la.Vector]:
    """Real basis (as complex vectors) of {α real (n-1,n-1) : delbar α ∈ im del}."""
    n = dc.n
    N = dc.dim(n - 1, n - 1)
    M = dc.dim(n - 2, n) if n >= 2 else 0
    T = dc.dim(n - 1, n)
    if N == 0:
        return []
    C = dc.conj(n - 1, n - 1)
    Id = la.identity(N)
    # reality: C(x - iy) - (x + iy) = 0
    real_rows = _real_system(
        [(la.add(C, _scale(Id, Scalar(-1))), N), (la.add(_scale(C, -I), _scale(Id, -I)), N), (None, M), (None, M)],
        N,
    )
    Db = dc.delbar(n - 1, n - 1)
    Dl = dc.del_(n - 2, n) if M else []
    # delbar(x + iy) - del(u + iz) = 0
    exact_rows = _real_system(
        [(Db, N), (_scale(Db, I), N), (_scale(Dl, Scalar(-1)), M), (_scale(Dl, -I), M)],
        T,
    ) if T else []
    sol = la.kernel(real_rows + exact_rows, 2 * N + 2 * M)
    vecs = [[Scalar(v[i].re, v[N + i].re) for i in range(N)] for v in sol]
    # keep a real basis of the projection to α
    out: list[la.Vector] = []
    realified: list[la.Vector] = []
    for v in vecs:
        rv = [x.re for x in v] + [x.im for x in v]
        if la.span_dim([[Scalar(x) for x in r] for r in realified + [rv]], 2 * N) > len(realified):
            realified.append(rv)
            out.append(v)
    return out


@dataclass
class WeakLemmaReport:
    verdict: bool | None  # None: no conjugation available
    test_space_dim: int = 0
    failing_dim: int = 0


def check_weak_lemma(dc: DoubleComplex) -> WeakLemmaReport:
    """(n-1,n)-th weak ddbar-Lemma.

    β ranges over all complex (n-2,n-1)-forms, so ``i * del delbar β`` sweeps
    the same complex subspace as ``del delbar β``; the factor i drops out.
    """
    if not dc.has_conjugation or dc.n < 2:
        return WeakLemmaReport(verdict=None)
    n = dc.n
    S = weak_lemma_test_space(dc)
    Db = dc.delbar(n - 1, n - 1)
    imgs = [la.apply(Db, v) for v in S]
    target = im_ddbar(dc, n - 1, n)
    dim = dc.dim(n - 1, n)
    base = la.span_dim(target, dim)
    failing = la.span_dim(list(target) + imgs, dim) - base
    return WeakLemmaReport(verdict=failing == 0, test_space_dim=len(S), failing_dim=failing)


def weak_lemma_witnesses(dc: DoubleComplex) -> list[tuple[la.Vector, la.Vector | None]]:
    """For each basis α of the test space, β with delbar α = i del delbar β (or None)."""
    n = dc.n
    src = dc.dim(n - 2, n - 1)
    out = []
    for a in weak_lemma_test_space(dc):
        rhs = [-I * x for x in la.apply(dc.delbar(n - 1, n - 1), a)]
        out.append((a, la.solve(dc.ddbar(n - 2, n - 1), rhs, src)))
    return out


# -- report -------------------------------------------------------------------

@dataclass
class CriteriaReport:
    n: int
    delta: dict
    sgg: SGGReport
    strong: StrongLemmaReport
    weak: WeakLemmaReport
    ddbar_lemma: bool
    t_rank: int
    map_ranks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    inconsistent: bool = False

    def flat(self) -> dict:
        """Verdicts keyed as accepted by ``--expect``."""
        d = {
            "sgg": self.sgg.verdict,
            "strong": self.strong.verdict,
            "strong_numeric": self.strong.numeric,
            "weak": self.weak.verdict,
            "ddbar": self.ddbar_lemma,
            "t_rank": self.t_rank,
        }
        for k, v in self.delta.items():
            d[f"delta{k}"] = v
        return d

    def as_dict(self) -> dict:
        return {
            "delta": {str(k): v for k, v in self.delta.items()},
            "sgg": {**asdict(self.sgg), "consistent": self.sgg.consistent},
            "strong": asdict(self.strong),
            "weak": asdict(self.weak),
            "ddbar_lemma": self.ddbar_lemma,
            "t_rank": self.t_rank,
            "map_ranks": self.map_ranks,
            "notes": list(self.notes),
            "inconsistent": self.inconsistent,
        }


def criteria_report(dc: DoubleComplex, table: CohomologyTable | None = None) -> CriteriaReport:
    t = table or cohomology_table(dc)
    n = dc.n
    delta = {k: delta_degree(t, k) for k in range(1, 2 * n + 1)}
    sgg = check_sgg(dc, t)
    strong = check_strong_lemma(dc, t)
    weak = check_weak_lemma(dc)
    ddbar = check_ddbar_lemma(t)
    r_top = natural_map_ranks(dc, n - 1, n)
    r_sgg = natural_map_ranks(dc, n, n - 1)

    notes = []
    if not sgg.consistent:
        notes.append(
            "sGG characterizations disagree: "
            f"(iii)={sgg.iii_dolbeault_to_aeppli_injective} (iv)={sgg.iv_t_vanishes} "
            f"(vi)={sgg.vi_bc_equals_dolbeault} (vii)={sgg.vii_betti_equality}"
        )
    if strong.direct != strong.numeric:
        notes.append(f"strong lemma: direct={strong.direct} but b1 == 2 h_A^(0,1) is {strong.numeric}")
    if strong.direct != (sgg.verdict and delta[1] == 0):
        notes.append("strong lemma differs from (sGG and Delta^1 = 0)")
    if strong.direct and weak.verdict is False:
        notes.append("strong lemma holds but weak lemma fails")
    if ddbar and not strong.direct:
        notes.append("ddbar-Lemma holds but strong lemma fails")
    if not r_top.surjective["bc_to_del"]:
        notes.append(f"natural map H_BC^({n-1},{n}) -> H_del^({n-1},{n}) is not surjective")
    if dc.unimodular:
        full = {k: delta_degree(t, k) for k in range(2 * n + 1)}
        for k in range(2 * n + 1):
            if full[k] < 0:
                notes.append(f"Delta^{k} = {full[k]} < 0")
            if full[k] != full[2 * n - k]:
                notes.append(f"Delta^{k} != Delta^{2 * n - k}")
    return CriteriaReport(
        n=n,
        delta=delta,
        sgg=sgg,
        strong=strong,
        weak=weak,
        ddbar_lemma=ddbar,
        t_rank=t_map_rank(dc),
        map_ranks={f"{n-1},{n}": r_top.as_dict(), f"{n},{n-1}": r_sgg.as_dict()},
        notes=sorted(set(notes), key=notes.index),
        inconsistent=bool(notes) and bool(dc.unimodular),
    )
