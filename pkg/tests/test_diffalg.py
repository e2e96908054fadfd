from pvakit.diffalg import DiffAlgebra, DiffOp, LambdaPoly, shift_apply


def setup():
    alg = DiffAlgebra(["u", "v"], ["c"])
    return alg, alg.var(0), alg.var(1)


def test_leibniz():
    alg, u, v = setup()
    f, g = u * u.D(), v ** 2 + alg.param("c") * u.D(2)
    assert (f * g).D() == f.D() * g + f * g.D()


def test_derivative_of_constant():
    alg, u, v = setup()
    assert alg.const(5).D().is_zero()


def test_partial_commutes_with_degree():
    alg, u, v = setup()
    f = u ** 3 * v.D()
    assert f.partial(0, 0) == 3 * u ** 2 * v.D()
    assert f.degree() == 4
    assert f.order() == 1


def test_printing():
    alg, u, v = setup()
    f = u.D() ** 2 - alg.param("c") * u.D(4) + 3
    assert str(f) == "u'^2 - c*u^(4) + 3"


def test_shift_apply():
    alg, u, v = setup()
    y = shift_apply(2, LambdaPoly.const(u))
    assert y == LambdaPoly(alg, {2: u, 1: 2 * u.D(), 0: u.D(2)})


def test_operator_compose_and_adjoint():
    alg, u, v = setup()
    A = DiffOp(alg, [[{1: alg.one()}, {}], [{}, {0: u}]])
    B = DiffOp(alg, [[{0: u}, {}], [{}, {1: alg.one()}]])
    AB = A @ B
    assert AB.entries[0][0] == {1: u, 0: u.D()}
    assert A.adjoint().entries[0][0] == {1: -alg.one()}
    assert (A @ B).adjoint() == B.adjoint() @ A.adjoint()


def test_substitute():
    alg, u, v = setup()
    f = u * v.D()
    assert f.substitute({1: u * u}) == u * (2 * u * u.D())
