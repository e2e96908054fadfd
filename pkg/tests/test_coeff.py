from fractions import Fraction

import pytest

from pvakit.coeff import CoeffField, ParameterMismatch
from pvakit.printing import format_coeff


def test_field_is_interned():
    assert CoeffField(("c",)) is CoeffField(("c",))


def test_rational_arithmetic():
    F = CoeffField()
    assert F(Fraction(1, 2)) + F(Fraction(1, 3)) == F(Fraction(5, 6))
    assert (F(3) / F(4)).to_fraction() == Fraction(3, 4)


def test_rational_function_normalizes():
    F = CoeffField(("k",))
    k = F.param("k")
    x = (k * k - 1) / (k - 1)
    assert x == k + 1
    assert format_coeff(3 * k / (2 * (k + 2))) == "3*k/(2*k + 4)"


def test_inverse_and_zero():
    F = CoeffField(("k",))
    k = F.param("k")
    assert (k + 2) * (k + 2).inverse() == F.one
    with pytest.raises(ZeroDivisionError):
        F.zero.inverse()


def test_subs():
    F = CoeffField(("k",))
    k = F.param("k")
    assert (3 * k / (k + 2)).subs({"k": 1}).to_fraction() == 1


def test_mismatch():
    a = CoeffField(("c",)).param("c")
    b = CoeffField(("d",)).param("d")
    with pytest.raises(ParameterMismatch):
        a + b
