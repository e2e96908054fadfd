from fractions import Fraction

import pytest

from pvakit.liealg import abelian1, sl2_standard
from pvakit.quantum import (LExpr, check_jacobi, check_table_skew, current_algebra, free_boson,
                            free_fermion, jacobi_residual, no_product, primary_check,
                            quasicommutativity_residual, skew_residual, sugawara, va_lambda_bracket,
                            virasoro, virasoro_extract, weight_check)
from pvakit.quantum_modes import sugawara_central_charge_modes


@pytest.fixture
def boson():
    va = free_boson()
    a = va.gen("a")
    return va, a, no_product(a, a) * Fraction(1, 2)


def test_t_rules(boson):
    va, a, L = boson
    assert va.vac().T() == 0
    assert no_product(a, a).T() == no_product(a.T(), a) * 2
    assert L.T() == no_product(a.T(), a)


def test_boson_brackets(boson):
    va, a, L = boson
    assert va_lambda_bracket(a, no_product(a, a)) == LExpr(va, {1: (a * 2).terms})
    ok, c = virasoro_extract(L)
    assert ok and c == va.field.one
    assert not primary_check(L, a, 1)
    assert not virasoro_extract(a)[0]


def test_quasiassociativity(boson):
    va, a, _ = boson
    aa = no_product(a, a)
    assert no_product(aa, a) - no_product(a, aa) == a.T(2)
    assert no_product(a, va.vac()) == a and no_product(va.vac(), a) == a
    assert no_product(a.T(), a) + no_product(a, a.T()) == aa.T()


def test_fermion():
    va = free_fermion()
    p = va.gen("phi")
    assert va_lambda_bracket(p, p) == LExpr(va, {0: va.vac().terms})
    assert no_product(p, p) == 0


def test_lca_jacobi():
    assert check_jacobi(virasoro()).passed
    assert check_jacobi(current_algebra(sl2_standard())).passed
    assert check_table_skew(virasoro()).passed


def test_sampled_properties(boson):
    va, a, L = boson
    aa = no_product(a, a)
    samples = [a, a.T(), aa, no_product(a.T(), a), no_product(a, aa)]
    for x in samples:
        for y in samples:
            assert not skew_residual(x, y)
            assert quasicommutativity_residual(x, y) == 0
    assert not jacobi_residual(a, aa, a.T())


def test_weights():
    va = virasoro()
    L = va.gen("L")
    LL = no_product(L, L)
    assert weight_check(L, LL, 2, 4)
    assert weight_check(LL, LL, 4, 4)


def test_sugawara_sl2():
    va, L, h = sugawara(sl2_standard(), "k")
    assert h == va.field(2)
    for g in va.labels:
        assert not primary_check(L, va.gen(g), 1)
    ok, c = virasoro_extract(L)
    k = va.field.param("k")
    assert ok and c == 3 * k / (k + 2)
    assert sugawara_central_charge_modes(sl2_standard(), 1).to_fraction() == c.subs({"k": 1}).to_fraction()


def test_sugawara_abelian_is_boson():
    va, L, h = sugawara(abelian1(), 1)
    a = va.gen("a")
    assert L == no_product(a, a) * Fraction(1, 2)


def test_critical_level():
    with pytest.raises(ZeroDivisionError):
        sugawara(sl2_standard(), -2)
