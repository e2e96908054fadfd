from pvakit.diffalg import DiffAlgebra, LambdaPoly
from pvakit.liealg import sl2_kappa, sl2_standard
from pvakit.pva import (PvaSpec, affine, affine_pair, check_compatibility, check_jacobi, check_pva,
                        check_skewsymmetry, functional_bracket, gfz, magri_virasoro, master_bracket)


def test_gfz_and_mv_are_pvas():
    assert check_pva(gfz()).passed
    assert check_pva(magri_virasoro()).passed


def test_compatibility():
    H = magri_virasoro()
    K = PvaSpec(H.alg, {(0, 0): LambdaPoly(H.alg, {1: H.alg.one()})}, "K")
    assert check_compatibility(H, K).passed


def test_affine():
    assert check_pva(affine(sl2_standard())).passed
    H, K = affine_pair(sl2_kappa(), "s")
    assert check_pva(H).passed and check_pva(K).passed
    assert check_compatibility(H, K).passed


def test_non_skewadjoint_rejected():
    alg = DiffAlgebra(["u"])
    bad = PvaSpec(alg, {(0, 0): LambdaPoly(alg, {2: alg.one()})})
    rep = check_skewsymmetry(bad)
    assert not rep.passed
    assert rep.failures()[0].expr == "2*l^2"


def test_jacobi_failure_is_reported():
    alg = DiffAlgebra(["u"])
    u = alg.var(0)
    bad = PvaSpec(alg, {(0, 0): LambdaPoly(alg, {0: u.D(), 1: 2 * u * u})})
    assert not check_jacobi(bad).passed


def test_master_formula_sesquilinearity():
    S = magri_virasoro()
    u = S.alg.var(0)
    a = master_bracket(u.D(), u, S)
    b = master_bracket(u, u, S)
    assert a == -b.shift(1)


def test_functional_bracket_skew():
    S = magri_virasoro()
    u = S.alg.var(0)
    f, g = u ** 3, u * u.D(2)
    assert functional_bracket(f, g, S) == -functional_bracket(g, f, S)
