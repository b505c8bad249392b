"""Spectral-sequence pages, degeneration, the filtration criterion, the
E_1 bridge, vanishing prediction, and functoriality."""

from fractions import Fraction

import pytest

from bggbench.fields import QQ
from bggbench.jets import poly_format, poly_parse
from bggbench.rcomplex import ChainMap, FilteredFreeComplex, Homotopy
from bggbench.spectral import (
    WindowError,
    check_degeneration_criterion,
    compute_page,
    degenerates_at,
    e1_total_complex,
    is_null_homotopic_action,
    map_on_pages,
    page_dim,
    predict_vanishing,
    sum_with_page_check,
)


def P(s, e=1):
    return poly_parse(QQ, s, e)


def cx(nvars, precision, ranks, diffs):
    return FilteredFreeComplex(QQ, nvars, precision, ranks, diffs)


def koszul_t(N=6):
    return cx(1, N, {0: 1, 1: 1}, {0: [[P("t")]]})


def tsquare(N=8):
    return cx(1, N, {0: 1, 1: 1}, {0: [[P("t^2")]]})


def paper_example(N=6):
    return cx(1, N, {0: 2, 1: 2},
              {0: [[P("1"), P("-t")], [P("t"), P("0")]]})


def genus2_shape(N=6):
    """R --(x1,x2)^T--> R^2 over two variables."""
    return cx(2, N, {0: 1, 1: 2}, {0: [[P("t1", 2)], [P("t2", 2)]]})


# -- pages -------------------------------------------------------------------


def test_page_zero_differential_stays_e1():
    k = cx(1, 6, {0: 1, 1: 1}, {})
    for r in (1, 2, 3):
        t = compute_page(k, r, 3)
        for p in range(4):
            assert t.dim(p, -p) == 1
            assert t.dim(p, 1 - p) == 1
        assert t.all_differentials_zero()


def test_page_e1_tensor_structure():
    k = paper_example()
    t = compute_page(k, 1, 3)
    # E_1^{p,q} = H^{p+q}(K (x) k) (x) Sym^p W, here 1-dimensional everywhere
    for p in range(4):
        assert t.dim(p, -p) == 1
        assert t.dim(p, 1 - p) == 1


def test_page_koszul_e2_vanishes():
    k = koszul_t()
    t = compute_page(k, 2, 3)
    for p in range(1, 4):
        assert t.dim(p, -p) == 0
    # H^0(K) = 0 reflected; the H^1 = R/t column survives at p = 0
    assert t.dim(0, 1) == 1
    assert t.dim(1, 0) == 0


def test_page_paper_example_d2_nonzero():
    k = paper_example()
    e2 = compute_page(k, 2, 3)
    # d_1 = 0 so E_2 = E_1
    e1 = compute_page(k, 1, 3)
    assert e1.dims == e2.dims
    d = e2.differential(0, 0)
    assert d is not None and not d.is_zero()
    e3 = compute_page(k, 3, 3)
    assert e3.dim(0, 0) == 0
    assert e3.dim(2, -1) == 0
    # the limit of H^1 = R/t^2 survives: gr pieces at p = 0 and p = 1
    assert e3.dim(0, 1) == 1
    assert e3.dim(1, 0) == 1


def test_page_window_refusal():
    k = koszul_t(4)
    with pytest.raises(WindowError):
        compute_page(k, 3, 3)


def test_page_recursion_invariant():
    from bggbench.linalg import mat_rank
    k = paper_example(8)
    for r in (1, 2, 3):
        cur = compute_page(k, r, 4)
        nxt = compute_page(k, r + 1, 4)
        for (p, q), dim in cur.dims.items():
            if p + r > 4:
                continue
            out = cur.differential(p, q)
            inc = cur.differential(p - r, q + r - 1)
            rank_out = mat_rank(out) if out is not None else 0
            rank_in = mat_rank(inc) if inc is not None else 0
            assert nxt.dim(p, q) == dim - rank_out - rank_in


# -- degeneration and the criterion -------------------------------------------


def test_degeneration_tsquare():
    k = tsquare()
    assert degenerates_at(k, 3, pmax=4).degenerates
    assert not degenerates_at(k, 2, pmax=4).degenerates


def test_degeneration_linear():
    assert degenerates_at(koszul_t(), 2, pmax=4).degenerates
    assert degenerates_at(genus2_shape(), 2, pmax=3).degenerates


def test_degeneration_paper_example():
    k = paper_example()
    assert not degenerates_at(k, 2, pmax=3).degenerates
    assert degenerates_at(k, 3, pmax=3).degenerates


def test_criterion_paper_example_witness():
    k = paper_example()
    rep = check_degeneration_criterion(k, 1, kmax=4)
    assert not rep.passed
    w = rep.witness
    assert w.spot == 1 and w.level == 2
    assert w.format(QQ, single_var=True) == "x=(t,1), dx=(0,t^2)"


def test_criterion_linear_passes():
    assert check_degeneration_criterion(koszul_t(), 1, kmax=4).passed
    assert check_degeneration_criterion(genus2_shape(), 1, kmax=4).passed


def test_criterion_tsquare():
    k = tsquare()
    assert check_degeneration_criterion(k, 2, kmax=5).passed
    rep = check_degeneration_criterion(k, 1, kmax=5)
    assert not rep.passed
    # x = 1 has dx = t^2 in m^2 but not in d(m K)
    assert rep.witness.level == 2
    assert poly_format(QQ, rep.witness.x[0], True) == "1"
    assert poly_format(QQ, rep.witness.dx[0], True) == "t^2"


def test_criterion_matches_degeneration_on_knowns():
    # lemma alignment: criterion at r <=> degeneration at r+1
    for k, r_ok in ((koszul_t(8), 1), (tsquare(8), 2)):
        kmax = 5
        crit = check_degeneration_criterion(k, r_ok, kmax=kmax)
        degen = degenerates_at(k, r_ok + 1, pmax=kmax - r_ok - 1,
                               through="precision")
        assert crit.passed and degen.degenerates
        crit = check_degeneration_criterion(k, r_ok - 1, kmax=kmax) \
            if r_ok > 1 else check_degeneration_criterion(k, 0, kmax=kmax)
        degen = degenerates_at(k, r_ok, pmax=kmax - r_ok,
                               through="precision")
        assert crit.passed == degen.degenerates


# -- E1 bridge, vanishing ------------------------------------------------------


def test_e1_total_koszul():
    total, rep = e1_total_complex(koszul_t())
    assert rep.ok
    assert [s.dim for s in total.spots] == [1, 1]
    assert total.coeff(0, 1).data == [[Fraction(1)]]


def test_e1_total_zero_differential():
    k = cx(1, 6, {0: 1, 1: 1}, {})
    total, rep = e1_total_complex(k)
    assert rep.ok
    assert total.coeff(0, 1).is_zero()


def test_e1_total_genus2_shape():
    total, rep = e1_total_complex(genus2_shape())
    assert rep.ok
    assert [s.dim for s in total.spots] == [1, 2]
    assert total.coeff(0, 1).column(0) == [Fraction(1), Fraction(0)]
    assert total.coeff(0, 2).column(0) == [Fraction(0), Fraction(1)]


def test_e1_total_paper_example():
    total, rep = e1_total_complex(paper_example())
    assert rep.ok
    assert total.coeff(0, 1).is_zero()


def test_predict_vanishing_koszul():
    rep = predict_vanishing(koszul_t(), T=4)
    assert rep.certified == [0]
    assert rep.direct_zero[0] is True
    assert not rep.discrepancies


def test_predict_vanishing_zero_complex():
    k = cx(1, 6, {0: 2, 1: 2}, {0: [[P("1"), P("0")], [P("0"), P("1")]]})
    rep = predict_vanishing(k, T=4)
    assert set(rep.certified) == {0, 1}
    assert not rep.discrepancies


def test_predict_vanishing_single_free_spot():
    k = cx(1, 6, {0: 1}, {})
    rep = predict_vanishing(k, T=4)
    assert rep.certified == []
    assert rep.direct_zero[0] is False


# -- chain maps, homotopies, sums ---------------------------------------------


def test_null_homotopic_multiplication_by_t():
    k = koszul_t()
    f = ChainMap(k, k, {0: [[P("t")]], 1: [[P("t")]]})
    s = Homotopy(k, k, {1: [[P("1")]]})
    rep = is_null_homotopic_action(f, s, pmax=3, rmax=3)
    assert rep.ok


def test_identity_map_on_pages():
    k = paper_example()
    ident = ChainMap(k, k, {0: [[P("1"), P("0")], [P("0"), P("1")]],
                            1: [[P("1"), P("0")], [P("0"), P("1")]]})
    rep = map_on_pages(ident, 1, 3)
    for m in rep.matrices.values():
        assert m == type(m).identity(QQ, m.nrows)


def test_zero_map_on_pages():
    k = koszul_t()
    zero = ChainMap(k, k, {})
    rep = map_on_pages(zero, 1, 3)
    assert rep.all_zero


def test_sum_page_additivity_and_degeneration():
    k1, k2 = koszul_t(8), tsquare(8)
    rep = sum_with_page_check([k1, k2], r=2, pmax=3)
    assert rep.additivity_ok
    total = rep.total
    assert not degenerates_at(total, 2, pmax=3).degenerates
    assert degenerates_at(total, 3, pmax=3).degenerates
    # summand 1 alone degenerates at E_2 already
    assert degenerates_at(k1, 2, pmax=3).degenerates
    # two linear summands degenerate at E_2 (the derived-category corollary)
    lin = sum_with_page_check([koszul_t(8), koszul_t(8)], r=1, pmax=3)
    assert lin.additivity_ok
    assert degenerates_at(lin.total, 2, pmax=3).degenerates
