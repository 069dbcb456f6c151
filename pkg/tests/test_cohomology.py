import random
from math import comb

import pytest

from ddbar.cohomology import (
    aeppli,
    betti,
    bott_chern,
    cohomology_table,
    del_cohomology,
    dolbeault,
    im_ddbar,
    ker_del,
    natural_map_ranks,
    t_map_rank,
)
from ddbar.generate import random_nilpotent
from ddbar.scalar import parse_assignment
from ddbar.structure import build_complex

from conftest import complex_of, load
from oracles import SympyCohomology, leibniz_matrices

# Frozen from the sympy/Leibniz oracle (tests/oracles.py), rows p = 0..3, columns q = 0..3.
HP_TABLES = {
    "dol": [[1, 2, 2, 1], [3, 6, 6, 3], [3, 6, 6, 3], [1, 2, 2, 1]],
    "bc": [[1, 2, 3, 1], [2, 4, 6, 2], [3, 6, 8, 3], [1, 2, 3, 1]],
    "a": [[1, 3, 2, 1], [3, 8, 6, 3], [2, 6, 4, 2], [1, 3, 2, 1]],
}
ABELIAN_TABLES = {
    "dol": [[1, 3, 3, 1], [2, 5, 4, 1], [1, 4, 5, 2], [1, 3, 3, 1]],
    "bc": [[1, 2, 1, 1], [2, 4, 6, 3], [1, 6, 6, 3], [1, 3, 3, 1]],
    "a": [[1, 3, 3, 1], [3, 6, 6, 1], [3, 6, 4, 2], [1, 1, 2, 1]],
}
IWASAWA_BETTI = [1, 4, 8, 10, 8, 4, 1]


def unimodular_complexes():
    out = [
        ("torus", complex_of("torus3.cplx")),
        ("hp", complex_of("iwasawa_hp.cplx")),
    ]
    for D in ("0", "1/8", "1/5"):
        out.append((f"abelian D={D}", complex_of("iwasawa_abelian.cplx", f"D={D}")))
        for t in ("1/4", "1/2", "i/3"):
            out.append((f"Jt D={D} t={t}", complex_of("iwasawa_abelian_Jt.cplx", f"D={D},t={t}")))
    rng = random.Random(11)
    for k in range(8):
        _, se = random_nilpotent(3, rng, abelian=k % 3 == 0)
        out.append((f"random{k}", build_complex(se)))
    return out


UNIMODULAR = unimodular_complexes()
IDS = [u[0] for u in UNIMODULAR]


def test_torus_binomials():
    dc = complex_of("torus3.cplx")
    for p in range(4):
        for q in range(4):
            expected = comb(3, p) * comb(3, q)
            assert dolbeault(dc, p, q) == del_cohomology(dc, p, q) == expected
            assert bott_chern(dc, p, q) == aeppli(dc, p, q) == expected
    assert [betti(dc, k) for k in range(7)] == [comb(6, k) for k in range(7)]


@pytest.mark.parametrize("name,params,tables", [
    ("iwasawa_hp.cplx", "", HP_TABLES),
    ("iwasawa_abelian.cplx", "D=1/8", ABELIAN_TABLES),
])
def test_frozen_tables(name, params, tables):
    t = cohomology_table(complex_of(name, params))
    for kind, rows in tables.items():
        assert [[t.h(kind, p, q) for q in range(4)] for p in range(4)] == rows
    assert [t.betti[k] for k in range(7)] == IWASAWA_BETTI


@pytest.mark.parametrize("name,params", [
    ("iwasawa_hp.cplx", ""),
    ("iwasawa_abelian.cplx", "D=1/5"),
    ("iwasawa_abelian_Jt.cplx", "D=1/8,t=i/3"),
])
def test_agrees_with_sympy_oracle(name, params):
    s = load(name).instantiate(parse_assignment(params))
    oracle = SympyCohomology(*leibniz_matrices(list(s.d), s.n), s.n)
    t = cohomology_table(build_complex(s))
    for p in range(4):
        for q in range(4):
            assert t.h("dol", p, q) == oracle.dolbeault(p, q)
            assert t.h("bc", p, q) == oracle.bott_chern(p, q)
            assert t.h("a", p, q) == oracle.aeppli(p, q)
    assert [t.betti[k] for k in range(7)] == [oracle.betti(k) for k in range(7)]


@pytest.mark.parametrize("D", ["0", "1/8", "1/5"])
def test_abelian_iwasawa_family(D):
    t = cohomology_table(complex_of("iwasawa_abelian.cplx", f"D={D}"))
    assert t.dolbeault[(0, 1)] == 3
    assert t.bc[(2, 2)] == 6
    assert t.betti[1] == 4


def test_hp_iwasawa_low_degree():
    t = cohomology_table(complex_of("iwasawa_hp.cplx"))
    assert (t.dolbeault[(0, 1)], t.bc[(0, 1)], t.a[(0, 1)], t.betti[1]) == (2, 2, 3, 4)


def test_map_ranks_torus():
    dc = complex_of("torus3.cplx")
    for p in range(4):
        for q in range(4):
            r = natural_map_ranks(dc, p, q)
            assert all(r.injective.values()) and all(r.surjective.values())
    assert t_map_rank(dc) == 0


@pytest.mark.parametrize("D", ["0", "1/8", "1/5"])
def test_abelian_bc_to_dolbeault_not_injective(D):
    r = natural_map_ranks(complex_of("iwasawa_abelian.cplx", f"D={D}"), 2, 3)
    assert not r.injective["bc_to_dolbeault"]


def test_hp_t_map_vanishes():
    assert t_map_rank(complex_of("iwasawa_hp.cplx")) == 0


@pytest.mark.parametrize("label,dc", UNIMODULAR, ids=IDS)
def test_duality_and_conjugation_symmetry(label, dc):
    n = dc.n
    t = cohomology_table(dc)
    for p in range(n + 1):
        for q in range(n + 1):
            assert t.bc[(p, q)] == t.a[(n - q, n - p)]
            assert t.bc[(p, q)] == t.bc[(q, p)]
            assert t.a[(p, q)] == t.a[(q, p)]
            assert t.dolbeault[(p, q)] == t.del_[(q, p)]
            for kind in ("dol", "del", "bc", "a"):
                assert 0 <= t.h(kind, p, q) <= dc.dim(p, q)


@pytest.mark.parametrize("label,dc", UNIMODULAR, ids=IDS)
def test_map_rank_bounds(label, dc):
    n = dc.n
    for p in range(n + 1):
        for q in range(n + 1):
            r = natural_map_ranks(dc, p, q)
            assert r.bc_to_a <= min(r.h_bc, r.h_a)
            assert r.bc_to_a <= r.bc_to_dolbeault and r.bc_to_a <= r.dolbeault_to_a
            assert r.bc_to_a <= r.bc_to_del and r.bc_to_a <= r.del_to_a


@pytest.mark.parametrize("label,dc", UNIMODULAR, ids=IDS)
def test_top_bidegree_bott_chern(label, dc):
    n = dc.n
    expected = len(ker_del(dc, n - 1, n)) - len(im_ddbar(dc, n - 1, n))
    assert bott_chern(dc, n - 1, n) == expected


@pytest.mark.parametrize("label,dc", UNIMODULAR, ids=IDS)
def test_bc_to_del_surjective_at_top(label, dc):
    n = dc.n
    assert natural_map_ranks(dc, n - 1, n).surjective["bc_to_del"]


@pytest.mark.parametrize("label,dc", UNIMODULAR, ids=IDS)
def test_frolicher_and_numerical_inequalities(label, dc):
    t = cohomology_table(dc)
    n = dc.n
    for k in range(2 * n + 1):
        dol = sum(t.dolbeault.get((p, k - p), 0) for p in range(k + 1))
        assert dol >= t.betti[k]
    assert t.bc[(0, 1)] <= t.dolbeault[(0, 1)] <= t.a[(0, 1)]
    assert t.betti[1] <= 2 * t.dolbeault[(0, 1)]


def test_table_dict_roundtrip():
    t = cohomology_table(complex_of("iwasawa_hp.cplx"))
    assert type(t).from_dict(t.as_dict()) == t


def test_betti_invariant_under_coframe_change():
    base = cohomology_table(complex_of("iwasawa_abelian.cplx", "D=1/8"))
    moved = cohomology_table(complex_of("iwasawa_abelian_Jt.cplx", "D=1/8,t=1/2"))
    assert base.betti == moved.betti


def test_non_unimodular_duality_can_fail():
    # d eta^1 = eta^{1 1bar}: not unimodular, Bott-Chern/Aeppli duality is not expected
    from ddbar.structure import parse_manifold

    se = parse_manifold('[manifold]\nname = "x"\ndim = 2\nparams = []\n[structure]\nd1 = "e(1,-1)"\n')
    dc = build_complex(se)
    assert dc.unimodular is False
    t = cohomology_table(dc)
    assert any(t.bc[(p, q)] != t.a[(2 - q, 2 - p)] for p in range(3) for q in range(3))
