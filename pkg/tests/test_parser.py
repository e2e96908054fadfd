import pytest

from pvakit.cli import data_path
from pvakit.diffalg import DiffAlgebra, LambdaPoly
from pvakit.parser import ParseError, format_source, parse, parse_file, parse_poly

BUNDLED = ["kdv.pva", "affine-sl2.pva", "freeboson.va", "nls.dirac", "sl2.lie", "sl2-trace.lie",
           "virasoro.va", "freefermion.va"]


def test_mv_entry():
    spec = parse("params c; generators u; bracket {u,u} = (D + 2*l)*u + c*l^3;")
    alg = spec.alg
    u = alg.var(0)
    assert spec.brackets["H"][("u", "u")] == LambdaPoly(alg, {0: u.D(), 1: 2 * u, 3: alg.param("c")})


def test_derivative_spellings():
    alg = DiffAlgebra(["u"])
    assert parse_poly("u''''", alg) == parse_poly("u^(4)", alg) == alg.var(0, 4)
    assert parse_poly("D(u^2)", alg) == 2 * alg.var(0) * alg.var(0, 1)
    assert parse_poly("u'^2", alg) == alg.var(0, 1) ** 2


def test_undeclared_identifier():
    with pytest.raises(ParseError) as e:
        parse("generators u, v; bracket {u,v} = l*w;")
    assert "w" in str(e.value) and "line 1" in str(e.value)


def test_division_by_parameter_polynomial():
    alg = DiffAlgebra(["u"], ["k"])
    k = alg.field.param("k")
    assert parse_poly("3*k/(2*k + 4)*u", alg) == alg.var(0).scale(3 * k / (2 * k + 4))


def test_syntax_error_position():
    with pytest.raises(ParseError) as e:
        parse("generators u;\nbracket {u,u} = (l + ;")
    assert "line 2" in str(e.value)


@pytest.mark.parametrize("name", BUNDLED)
def test_roundtrip(name):
    spec = parse_file(data_path(name))
    text = format_source(spec)
    again = parse(text, spec.kind)
    assert again == spec
    assert format_source(again) == text


def test_va_expressions():
    spec = parse_file(data_path("freeboson.va"))
    from pvakit.parser import parse_va

    va = spec.va
    L = parse_va("L", va)[0]
    want = parse_va("(T + 2*l)*L + 1/12*l^3*vac", va)
    assert va.bracket_expr(L, L) == want
    with pytest.raises(ParseError):
        parse_va("a*a", va)
