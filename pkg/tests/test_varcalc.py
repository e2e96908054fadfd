from fractions import Fraction

from hypothesis import given, settings, strategies as st

from pvakit.diffalg import DiffAlgebra
from pvakit.varcalc import (FunctionalClass, closedness_defect, homotopy_integrate, is_closed,
                            is_total_derivative, variational_derivative)

P1 = DiffAlgebra(["u"])
P2 = DiffAlgebra(["u", "v"])


def test_euler_operator_kdv():
    u = P1.var(0)
    c = DiffAlgebra(["u"], ["c"])
    uc = c.var(0)
    h = (uc ** 3 + c.param("c") * uc * uc.D(2)) * Fraction(1, 2)
    assert variational_derivative(h) == [Fraction(3, 2) * uc ** 2 + c.param("c") * uc.D(2)]
    assert variational_derivative(u.D() * u ** 2) == [P1.zero()]


def test_not_closed():
    u = P1.var(0)
    assert not is_closed([u.D()])
    assert is_closed([u.D(2)])


def test_total_derivative_witness():
    u = P1.var(0)
    assert is_total_derivative(u * u.D(2)) is None
    f = u * u.D(3)
    assert is_total_derivative(f).D() == f
    g = (u ** 2 * u.D(2)).D()
    w = is_total_derivative(g)
    assert w.D() == g
    assert is_total_derivative(g + 1) is None


def test_homotopy_constant_xi():
    u = P1.var(0)
    assert homotopy_integrate([P1.one()]) == u


def test_functional_class_equality():
    u = P1.var(0)
    a = FunctionalClass(u * u.D(2))
    b = FunctionalClass(-u.D() ** 2)
    assert a == b
    assert hash(a) == hash(b)
    assert FunctionalClass(u.D() + 1) != FunctionalClass(u.D())


def _monomials(alg):
    vars_ = st.tuples(st.integers(0, alg.rank - 1), st.integers(0, 3))
    return st.tuples(st.integers(-4, 4), st.lists(vars_, max_size=4))


def _poly(alg, spec):
    f = alg.zero()
    for c, vs in spec:
        t = alg.const(c)
        for i, n in vs:
            t = t * alg.var(i, n)
        f = f + t
    return f


@settings(max_examples=120, deadline=None)
@given(st.sampled_from([P1, P2]).flatmap(
    lambda alg: st.tuples(st.just(alg), st.lists(_monomials(alg), min_size=1, max_size=4),
                          st.integers(-3, 3))))
def test_variational_complex_properties(data):
    alg, spec, c = data
    f = _poly(alg, spec)
    g = f.D() + alg.const(c)
    assert not any(variational_derivative(g))
    w = is_total_derivative(g)
    if c:
        assert w is None
    else:
        assert w is not None and w.D() == f.D()
    xi = variational_derivative(f)
    assert closedness_defect(xi).is_zero()
    h = homotopy_integrate(xi)
    assert not any(variational_derivative(h - f))
