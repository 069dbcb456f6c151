"""Dolbeault, conjugate-Dolbeault, Bott-Chern, Aeppli and de Rham dimensions.

Every quotient dimension is rank arithmetic on the exact matrices of a
:class:`~ddbar.doublecomplex.DoubleComplex`.  The rank of a natural map
``S/R_S -> T/R_T`` induced by the identity (with ``R_S ⊆ R_T``) is
``dim(S + R_T) - dim(R_T)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from . import linalg as la
from .doublecomplex import DoubleComplex


# -- subspaces at a bidegree (memoised on the complex) ----------------------

def _memo(dc: DoubleComplex, key, fn):
    if key not in dc._memo:
        dc._memo[key] = fn()
    return dc._memo[key]


def ker_del(dc, p, q):
    return _memo(dc, ("ker_del", p, q), lambda: la.kernel(dc.del_(p, q), dc.dim(p, q)) if dc.dim(p + 1, q) else _full(dc, p, q))


def ker_delbar(dc, p, q):
    return _memo(dc, ("ker_delbar", p, q), lambda: la.kernel(dc.delbar(p, q), dc.dim(p, q)) if dc.dim(p, q + 1) else _full(dc, p, q))


def ker_both(dc, p, q):
    """ker del ∩ ker delbar, as the kernel of the stacked system."""
    def go():
        stacked = dc.del_(p, q) + dc.delbar(p, q)
        if not stacked:
            return _full(dc, p, q)
        return la.kernel(stacked, dc.dim(p, q))
    return _memo(dc, ("ker_both", p, q), go)


def ker_ddbar(dc, p, q):
    def go():
        m = dc.ddbar(p, q)
        if not m:
            return _full(dc, p, q)
        return la.kernel(m, dc.dim(p, q))
    return _memo(dc, ("ker_ddbar", p, q), go)


def im_del(dc, p, q):
    """Image of del landing in (p,q)."""
    return _memo(dc, ("im_del", p, q), lambda: _image(dc.del_(p - 1, q), dc.dim(p - 1, q), dc.dim(p, q)) if p > 0 else [])


def im_delbar(dc, p, q):
    """Image of delbar landing in (p,q)."""
    return _memo(dc, ("im_delbar", p, q), lambda: _image(dc.delbar(p, q - 1), dc.dim(p, q - 1), dc.dim(p, q)) if q > 0 else [])


def im_ddbar(dc, p, q):
    """Image of del delbar landing in (p,q)."""
    return _memo(dc, ("im_ddbar", p, q), lambda: _image(dc.ddbar(p - 1, q - 1), dc.dim(p - 1, q - 1), dc.dim(p, q)) if p > 0 and q > 0 else [])


def im_sum(dc, p, q):
    """im del + im delbar in (p,q)."""
    return _memo(dc, ("im_sum", p, q), lambda: la.span_basis(im_del(dc, p, q) + im_delbar(dc, p, q), dc.dim(p, q)))


def _full(dc, p, q):
    d = dc.dim(p, q)
    return la.identity(d)


def _image(m, ncols, nrows):
    if not ncols or not nrows:
        return []
    return la.image(m, ncols, nrows)


def _in_range(dc, p, q) -> bool:
    return 0 <= p <= dc.n and 0 <= q <= dc.n


# -- dimensions ---------------------------------------------------------------

def dolbeault(dc: DoubleComplex, p: int, q: int) -> int:
    if not _in_range(dc, p, q):
        return 0
    return len(ker_delbar(dc, p, q)) - len(im_delbar(dc, p, q))


def del_cohomology(dc: DoubleComplex, p: int, q: int) -> int:
    if not _in_range(dc, p, q):
        return 0
    return len(ker_del(dc, p, q)) - len(im_del(dc, p, q))


def bott_chern(dc: DoubleComplex, p: int, q: int) -> int:
    if not _in_range(dc, p, q):
        return 0
    return len(ker_both(dc, p, q)) - len(im_ddbar(dc, p, q))


def aeppli(dc: DoubleComplex, p: int, q: int) -> int:
    if not _in_range(dc, p, q):
        return 0
    return len(ker_ddbar(dc, p, q)) - len(im_sum(dc, p, q))


def betti(dc: DoubleComplex, k: int) -> int:
    """Dimension of the cohomology of d = del + delbar in total degree k."""
    if k < 0 or k > 2 * dc.n:
        return 0

    def rank_d(j):
        if j < 0 or j >= 2 * dc.n:
            return 0
        return _memo(dc, ("rank_d", j), lambda: la.rank(dc.total_d(j)))

    return dc.total_dim(k) - rank_d(k) - rank_d(k - 1)


# -- natural maps --------------------------------------------------------------

def _map_rank(source, target_rel, dim) -> int:
    return la.span_dim(list(source) + list(target_rel), dim) - la.span_dim(target_rel, dim)


@dataclass
class MapRanks:
    p: int
    q: int
    h_bc: int
    h_dolbeault: int
    h_del: int
    h_a: int
    bc_to_dolbeault: int
    bc_to_del: int
    dolbeault_to_a: int
    del_to_a: int
    bc_to_a: int
    t_rank: int

    @property
    def injective(self) -> dict:
        return {
            "bc_to_dolbeault": self.bc_to_dolbeault == self.h_bc,
            "bc_to_del": self.bc_to_del == self.h_bc,
            "dolbeault_to_a": self.dolbeault_to_a == self.h_dolbeault,
            "del_to_a": self.del_to_a == self.h_del,
            "bc_to_a": self.bc_to_a == self.h_bc,
        }

    @property
    def surjective(self) -> dict:
        return {
            "bc_to_dolbeault": self.bc_to_dolbeault == self.h_dolbeault,
            "bc_to_del": self.bc_to_del == self.h_del,
            "dolbeault_to_a": self.dolbeault_to_a == self.h_a,
            "del_to_a": self.del_to_a == self.h_a,
            "bc_to_a": self.bc_to_a == self.h_a,
        }

    def as_dict(self) -> dict:
        d = asdict(self)
        d["injective"] = self.injective
        return d


def t_map_rank(dc: DoubleComplex) -> int:
    """Rank of T: H_A^{n-1,n-1} -> H_delbar^{n,n-1}, [Ω] -> [del Ω]."""
    n = dc.n

    def go():
        src = ker_ddbar(dc, n - 1, n - 1)
        if not src:
            return 0
        dmat = dc.del_(n - 1, n - 1)
        imgs = [la.apply(dmat, v) for v in src]
        return _map_rank(imgs, im_delbar(dc, n, n - 1), dc.dim(n, n - 1))

    return _memo(dc, ("t_rank",), go)


def natural_map_ranks(dc: DoubleComplex, p: int, q: int) -> MapRanks:
    dim = dc.dim(p, q)
    bc_src = ker_both(dc, p, q)
    return MapRanks(
        p=p,
        q=q,
        h_bc=bott_chern(dc, p, q),
        h_dolbeault=dolbeault(dc, p, q),
        h_del=del_cohomology(dc, p, q),
        h_a=aeppli(dc, p, q),
        bc_to_dolbeault=_map_rank(bc_src, im_delbar(dc, p, q), dim),
        bc_to_del=_map_rank(bc_src, im_del(dc, p, q), dim),
        dolbeault_to_a=_map_rank(ker_delbar(dc, p, q), im_sum(dc, p, q), dim),
        del_to_a=_map_rank(ker_del(dc, p, q), im_sum(dc, p, q), dim),
        bc_to_a=_map_rank(bc_src, im_sum(dc, p, q), dim),
        t_rank=t_map_rank(dc),
    )


# -- the full table -------------------------------------------------------------

@dataclass
class CohomologyTable:
    n: int
    dolbeault: dict = field(default_factory=dict)  # (p,q) -> int
    del_: dict = field(default_factory=dict)
    bc: dict = field(default_factory=dict)
    a: dict = field(default_factory=dict)
    betti: dict = field(default_factory=dict)  # k -> int
    dims: dict = field(default_factory=dict)

    def h(self, kind: str, p: int, q: int) -> int:
        return getattr(self, {"dol": "dolbeault", "del": "del_", "bc": "bc", "a": "a"}[kind]).get((p, q), 0)

    def as_dict(self) -> dict:
        def tab(d):
            return {f"{p},{q}": v for (p, q), v in sorted(d.items())}

        return {
            "n": self.n,
            "dims": tab(self.dims),
            "dolbeault": tab(self.dolbeault),
            "del": tab(self.del_),
            "bott_chern": tab(self.bc),
            "aeppli": tab(self.a),
            "betti": {str(k): v for k, v in sorted(self.betti.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CohomologyTable":
        def untab(t):
            return {tuple(int(x) for x in k.split(",")): v for k, v in t.items()}

        return cls(
            n=d["n"],
            dolbeault=untab(d["dolbeault"]),
            del_=untab(d["del"]),
            bc=untab(d["bott_chern"]),
            a=untab(d["aeppli"]),
            betti={int(k): v for k, v in d["betti"].items()},
            dims=untab(d.get("dims", {})),
        )


def cohomology_table(dc: DoubleComplex) -> CohomologyTable:
    t = CohomologyTable(n=dc.n)
    for p, q in dc.bidegrees():
        t.dims[(p, q)] = dc.dim(p, q)
        t.dolbeault[(p, q)] = dolbeault(dc, p, q)
        t.del_[(p, q)] = del_cohomology(dc, p, q)
        t.bc[(p, q)] = bott_chern(dc, p, q)
        t.a[(p, q)] = aeppli(dc, p, q)
    for k in range(2 * dc.n + 1):
        t.betti[k] = betti(dc, k)
    return t
