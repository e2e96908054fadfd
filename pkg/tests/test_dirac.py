from pvakit.diffalg import DiffAlgebra
from pvakit.dirac import (LaurentSymbol, binom_expand, check_coherence, check_inverse, dirac_reduce,
                          inverse_shape, nls_demo, symbol_invert)
from pvakit.liealg import sl2_kappa
from pvakit.pva import affine_pair, magri_virasoro


def test_binom_expand():
    assert binom_expand(1, 3) == {(1, 0): 1, (0, 1): 1}
    alg = DiffAlgebra(["u"])
    u = alg.var(0)
    inv = LaurentSymbol(alg, {-1: alg.one()}, 3).compose(LaurentSymbol(alg, {0: u}, 3))
    assert inv == LaurentSymbol(alg, {-1: u, -2: -u.D(), -3: u.D(2)}, 3)
    one = LaurentSymbol(alg, {1: alg.one()}, 3)
    lam_plus_d = LaurentSymbol(alg, {-1: alg.one()}, 5)
    back = one.compose(lam_plus_d.compose(LaurentSymbol(alg, {0: u}, 5), 5), 3)
    assert back == LaurentSymbol(alg, {0: u}, 3)


def test_symbol_invert():
    alg = DiffAlgebra(["u"], ["kappa"])
    k = alg.field.param("kappa")
    C = [[LaurentSymbol(alg, {1: alg.const(-k)}, 6)]]
    X = symbol_invert(C, 6)
    assert X[0][0] == LaurentSymbol(alg, {-1: alg.const(-1 / k)}, 6)
    u = alg.var(0)
    C2 = [[LaurentSymbol(alg, {1: alg.one(), 0: u}, 6)]]
    assert check_inverse(C2, symbol_invert(C2, 8), 6).passed
    assert not check_inverse(C2, symbol_invert(C2, 6), 6).passed


def test_empty_constraints_identity():
    S = magri_virasoro()
    R = dirac_reduce(S, [], 4)
    assert R.entry(0, 0).local_part() == S.entry(0, 0)


def test_nls():
    d = nls_demo()
    assert d["report"].passed
    q = d["H"].quotient_alg
    u, v = q.var(0), q.var(1)
    k = q.field.param("kappa")
    assert d["equations"] == (u.D(2) + k * u * u * v, -v.D(2) - k * u * v * v)
    assert d["kappa_eff"] == k


def test_coherence_floors():
    H, K = affine_pair(sl2_kappa(), "s")
    th = [H.alg.gen("s")]
    for M in (6, 8):
        assert check_coherence(H, th, M, 2).passed
    R = dirac_reduce(H, th, 6)
    assert inverse_shape(R.quotient_alg.var(0), R.quotient_alg.var(0), 6) == R.entry(0, 0).scale(
        -1 / R.quotient_alg.field.param("kappa"))
