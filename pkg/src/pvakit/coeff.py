"""Exact coefficients: rational functions in a finite set of named parameters.

A :class:`CoeffField` is the field Q(p1, ..., pk).  Its elements are
:class:`Coeff` values stored as a reduced fraction ``num / den`` of sympy
sparse polynomials over QQ, with ``den`` monic in lex order.  Equality is
equality of that canonical pair.  When ``den == 1`` (the common case) no gcd
is ever taken.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from sympy import QQ
from sympy.polys.rings import PolyRing


class ParameterMismatch(ValueError):
    pass


class CoeffField:
    """Q(params).  Instances are interned per parameter tuple."""

    __slots__ = ("params", "ring", "zero", "one", "__weakref__")

    def __new__(cls, params=()):
        return _field(tuple(params))

    def _init(self, params):
        self.params = params
        self.ring = PolyRing(list(params), QQ, "lex")
        self.zero = Coeff(self, self.ring.zero, self.ring.one)
        self.one = Coeff(self, self.ring.one, self.ring.one)
        return self

    def __repr__(self):
        return f"CoeffField({', '.join(self.params)})"

    def __reduce__(self):
        return (CoeffField, (self.params,))

    def __call__(self, value) -> "Coeff":
        if isinstance(value, Coeff):
            if value.field is self:
                return value
            return self.convert(value)
        if isinstance(value, (int, Rational)) or type(value).__name__ == "mpq":
            v = QQ(value.numerator, value.denominator) if not isinstance(value, int) else QQ(value)
            return Coeff(self, self.ring.ground_new(v), self.ring.one)
        if isinstance(value, str):
            return self.param(value)
        raise TypeError(f"cannot make a coefficient from {value!r}")

    def param(self, name: str) -> "Coeff":
        if name not in self.params:
            raise ParameterMismatch(f"unknown parameter {name!r} (declared: {self.params})")
        return Coeff(self, self.ring.gens[self.params.index(name)], self.ring.one)

    def gens(self):
        return [self.param(p) for p in self.params]

    def extend(self, *names: str) -> "CoeffField":
        new = list(self.params)
        for n in names:
            if n not in new:
                new.append(n)
        return CoeffField(tuple(new))

    def union(self, other: "CoeffField") -> "CoeffField":
        return self.extend(*other.params)

    def _poly_to(self, poly, target: "CoeffField"):
        idx = [target.params.index(p) for p in self.params]
        n = len(target.params)
        out = {}
        for mon, c in poly.terms():
            e = [0] * n
            for j, k in zip(idx, mon):
                e[j] = k
            out[tuple(e)] = c
        return target.ring.from_dict(out) if out else target.ring.zero

    def convert(self, c: "Coeff") -> "Coeff":
        """Bring ``c`` from a field whose parameters are a subset of ours."""
        src = c.field
        missing = [p for p in src.params if p not in self.params]
        if missing:
            # only acceptable when c does not actually involve those parameters
            used = c.parameters()
            if used & set(missing):
                raise ParameterMismatch(f"parameters {missing} not in {self.params}")
            sub = CoeffField(tuple(p for p in src.params if p in self.params))
            c = sub._from_narrower(c)
            src = sub
        return Coeff(self, src._poly_to(c.num, self), src._poly_to(c.den, self))

    def _from_narrower(self, c: "Coeff") -> "Coeff":
        # drop unused generators of c's field
        src = c.field
        keep = [src.params.index(p) for p in self.params]

        def shrink(poly):
            out = {}
            for mon, v in poly.terms():
                out[tuple(mon[j] for j in keep)] = v
            return self.ring.from_dict(out) if out else self.ring.zero

        return Coeff(self, shrink(c.num), shrink(c.den))


@lru_cache(maxsize=None)
def _field(params):
    if len(set(params)) != len(params):
        raise ValueError(f"duplicate parameters in {params}")
    return object.__new__(CoeffField)._init(params)


def _normalize(num, den):
    if den.is_zero:
        raise ZeroDivisionError("coefficient denominator is zero")
    if num.is_zero:
        return num.ring.zero, num.ring.one
    if den.is_ground:
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
        return num, num.ring.one
    num, den = num.cancel(den)
    lc = den.LC
    if lc != 1:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


class Coeff:
    """An element of Q(params).  Immutable; hashable."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: CoeffField, num, den):
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def make(cls, field, num, den):
        num, den = _normalize(num, den)
        return cls(field, num, den)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_one(self) -> bool:
        return self.den == 1 and self.num == 1

    def is_constant(self) -> bool:
        """True if no parameter occurs."""
        return self.num.is_ground and self.den.is_ground

    def parameters(self) -> set:
        used = set()
        for poly in (self.num, self.den):
            for mon in poly.monoms():
                for p, e in zip(self.field.params, mon):
                    if e:
                        used.add(p)
        return used

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational number")
        v = self.num.LC if self.num else QQ(0)
        return Fraction(int(v.numerator), int(v.denominator))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Coeff):
            if other.field is not self.field:
                raise ParameterMismatch(f"{other.field} vs {self.field}")
            return other
        if isinstance(other, (int, Rational)) or type(other).__name__ == "mpq":
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == 1 and other.den == 1:
            return Coeff(self.field, self.num + other.num, self.den)
        return Coeff.make(self.field, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Coeff(self.field, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == 1 and other.den == 1:
            return Coeff(self.field, self.num * other.num, self.den)
        return Coeff.make(self.field, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Coeff":
        if not self.num:
            raise ZeroDivisionError("inverse of zero coefficient")
        return Coeff.make(self.field, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Coeff(self.field, self.num**n, self.den**n) if self.den == 1 else Coeff.make(
            self.field, self.num**n, self.den**n
        )

    def __eq__(self, other):
        if isinstance(other, Coeff):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.params, self.num, self.den))
        return self._hash

    def subs(self, values: dict) -> "Coeff":
        """Substitute parameters by rationals; the field is unchanged."""
        pairs = []
        for name, v in values.items():
            if name in self.field.params:
                g = self.field.ring.gens[self.field.params.index(name)]
                pairs.append((g, QQ(Fraction(v).numerator, Fraction(v).denominator)))
        if not pairs:
            return self
        num = self.num.subs(pairs) if self.num else self.num
        den = self.den.subs(pairs)
        num = self.field.ring(num) if not hasattr(num, "ring") else num
        den = self.field.ring(den) if not hasattr(den, "ring") else den
        return Coeff.make(self.field, num, den)

    def __repr__(self):
        from .printing import format_coeff

        return format_coeff(self)
