"""Filtered free complexes: validation, reduction, homogeneity, induced
module, chain maps, sums."""

from fractions import Fraction

import pytest

from bggbench.fields import QQ
from bggbench.jets import poly_parse
from bggbench.rcomplex import (
    ChainMap,
    FilteredComplexError,
    FilteredFreeComplex,
    Homotopy,
    homogeneous_degree,
    induce_emodule,
    reduce_mod_m,
    sum_complexes,
    validate_complex,
)


def P(s, e=1):
    return poly_parse(QQ, s, e)


def cx(nvars, precision, ranks, diffs):
    return FilteredFreeComplex(QQ, nvars, precision, ranks, diffs)


def koszul_t(N=6):
    """R --t--> R."""
    return cx(1, N, {0: 1, 1: 1}, {0: [[P("t")]]})


def paper_example(N=6):
    """R^2 --[[1,-t],[t,0]]--> R^2, the paper's 2x2 example."""
    return cx(1, N, {0: 2, 1: 2},
              {0: [[P("1"), P("-t")], [P("t"), P("0")]]})


def test_validate_koszul():
    assert validate_complex(koszul_t()).ok


def test_validate_rejects_nonzero_square():
    k = cx(1, 6, {0: 1, 1: 1, 2: 1}, {0: [[P("1")]], 1: [[P("1")]]})
    rep = validate_complex(k)
    assert not rep.ok
    assert "(d o d)[0][0] = 1" in rep.problems[0]


def test_validate_paper_example():
    assert validate_complex(paper_example()).ok


def test_reduce_mod_m_paper_example():
    k = paper_example()
    assert k.constant_matrix(0).data == [
        [Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]]
    red = reduce_mod_m(k)
    assert red.homology_dims == {0: 1, 1: 1}


def test_reduce_mod_m_t_identity():
    k = cx(1, 6, {0: 2, 1: 2}, {0: [[P("t"), P("0")], [P("0"), P("t")]]})
    red = reduce_mod_m(k)
    assert red.homology_dims == {0: 2, 1: 2}


def test_reduce_mod_m_identity():
    k = cx(1, 6, {0: 1, 1: 1}, {0: [[P("1")]]})
    red = reduce_mod_m(k)
    assert red.homology_dims == {0: 0, 1: 0}


def test_homogeneous_degree():
    assert homogeneous_degree(cx(1, 6, {0: 1, 1: 1},
                                 {0: [[P("t^2")]]})).degree == 2
    two = cx(2, 6, {0: 1, 1: 2}, {0: [[P("t1", 2)], [P("-t2", 2)]]})
    rep = homogeneous_degree(two)
    assert rep.homogeneous and rep.degree == 1
    rep = homogeneous_degree(paper_example())
    assert not rep.homogeneous


def test_homogeneous_degree_zero_complex():
    rep = homogeneous_degree(cx(1, 6, {0: 1}, {}))
    assert rep.homogeneous and rep.degree is None


def test_induce_emodule_koszul():
    p = induce_emodule(koszul_t(), top_degree=1)
    assert p.components == {1: 1, 0: 1}
    assert p.act(1, 1).data == [[Fraction(1)]]


def test_induce_emodule_tsquare():
    k = cx(1, 6, {0: 1, 1: 1}, {0: [[P("t^2")]]})
    p = induce_emodule(k, top_degree=1)
    assert p.components == {1: 1, 0: 1}
    assert p.act(1, 1).is_zero()


def test_induce_emodule_paper_example_zero_action():
    p = induce_emodule(paper_example(), top_degree=1)
    assert p.components == {1: 1, 0: 1}
    # the class (0,1) maps to (-t, 0), which reduces into the image of the
    # constant part, so the induced action is zero
    assert p.act(1, 1).is_zero()


def test_chain_map_validation():
    k = koszul_t()
    ident = ChainMap(k, k, {0: [[P("1")]], 1: [[P("1")]]})
    assert ident.validate().ok
    with pytest.raises(FilteredComplexError):
        ChainMap(k, k, {0: [[P("1")]], 1: [[P("t")]]})


def test_homotopy_boundary_expression():
    k = koszul_t()
    s = Homotopy(k, k, {1: [[P("1")]]})
    # d o s + s o d at both spots equals multiplication by t
    assert s.boundary_expression(0) == [[P("t")]]
    assert s.boundary_expression(1) == [[P("t")]]


def test_sum_complexes():
    k = koszul_t()
    z = cx(1, 6, {0: 0}, {})
    s = sum_complexes([k, z])
    assert s.ranks == k.ranks
    assert s.diff(0) == k.diff(0)
    t2 = cx(1, 6, {0: 1, 1: 1}, {0: [[P("t^2")]]})
    s2 = sum_complexes([k, t2])
    assert s2.rank(0) == 2 and s2.rank(1) == 2
    assert s2.diff(0)[0][0] == P("t") and s2.diff(0)[1][1] == P("t^2")
    assert s2.diff(0)[0][1] == {} and s2.diff(0)[1][0] == {}


def test_sum_rejects_mismatch():
    with pytest.raises(FilteredComplexError):
        sum_complexes([koszul_t(), cx(2, 6, {0: 1}, {})])
    with pytest.raises(FilteredComplexError):
        sum_complexes([koszul_t(6), koszul_t(8)])
