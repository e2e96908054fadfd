import pytest

from pvakit.coeff import CoeffField
from pvakit.liealg import (LieError, abelian1, casimir_adjoint_eigenvalue, dual_bases, dual_coxeter,
                           gl_matrices, is_valid, s_decomposition, sl2_kappa, sl2_standard)


def test_sl2_valid_and_casimir():
    L = sl2_standard()
    assert is_valid(L)
    assert casimir_adjoint_eigenvalue(L) == L.field(4)
    assert dual_coxeter(L) == L.field(2)


def test_scaled_form():
    assert casimir_adjoint_eigenvalue(sl2_standard(2)) == CoeffField()(2)


def test_kappa_family():
    L = sl2_kappa()
    assert is_valid(L)
    k = L.field.param("kappa")
    assert casimir_adjoint_eigenvalue(L) == -2 * k


def test_sl3():
    assert casimir_adjoint_eigenvalue(gl_matrices(3, traceless=True)) == CoeffField()(6)


def test_abelian_casimir_is_zero():
    assert not casimir_adjoint_eigenvalue(abelian1())


def test_non_scalar_casimir():
    with pytest.raises(LieError):
        casimir_adjoint_eigenvalue(gl_matrices(2))


def test_dual_bases():
    L = sl2_standard()
    for a, b in dual_bases(L):
        for x, y in dual_bases(L):
            assert L.form(a, y) == (L.field.one if a == x else L.field.zero)


def test_s_decomposition():
    L = sl2_kappa()
    dec = s_decomposition(L, L.basis("s"))
    assert len(dec.centralizer) == 1
    e = L.basis("ea")
    assert dec.project_h(e) == [L.field.zero] * 3
