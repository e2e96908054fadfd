"""The algebra of differential polynomials P_l = F[u_i^(n)] over F = Q(params).

A monomial is a tuple of ``((i, n), e)`` pairs sorted by ``(i, n)``, with
``e >= 1``.  A :class:`DiffPoly` maps monomials to nonzero :class:`Coeff`.
Differential operators keep their coefficients on the left of ``D``.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .coeff import Coeff, CoeffField, ParameterMismatch
from . import printing


class ShapeMismatch(ValueError):
    pass


# -- monomial kernels -------------------------------------------------------

ONE = ()


@lru_cache(maxsize=1 << 16)
def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


@lru_cache(maxsize=1 << 16)
def mono_derivative(m):
    """Total derivative of a monomial as a tuple of (monomial, multiplicity)."""
    out = {}
    for k, ((i, n), e) in enumerate(m):
        d = dict(m)
        if e == 1:
            del d[(i, n)]
        else:
            d[(i, n)] = e - 1
        d[(i, n + 1)] = d.get((i, n + 1), 0) + 1
        nm = tuple(sorted(d.items()))
        out[nm] = out.get(nm, 0) + e
    return tuple(out.items())


def mono_degree(m) -> int:
    return sum(e for _, e in m)


def mono_weight(m) -> int:
    """Total number of derivatives, each u_i^(n) counting n."""
    return sum(n * e for (_, n), e in m)


# -- the ambient algebra ----------------------------------------------------


class DiffAlgebra:
    """Generators u_1..u_l and the coefficient field.  Interned."""

    __slots__ = ("gens", "field", "__weakref__")

    def __new__(cls, gens, params=()):
        return _algebra(tuple(gens), tuple(params))

    @property
    def params(self):
        return self.field.params

    @property
    def rank(self):
        return len(self.gens)

    def __repr__(self):
        return f"DiffAlgebra(gens={self.gens}, params={self.params})"

    def __reduce__(self):
        return (DiffAlgebra, (self.gens, self.params))

    def index(self, name: str) -> int:
        try:
            return self.gens.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def zero(self) -> "DiffPoly":
        return DiffPoly(self, {})

    def one(self) -> "DiffPoly":
        return self.const(1)

    def const(self, c) -> "DiffPoly":
        c = self.field(c)
        return DiffPoly(self, {ONE: c} if c else {})

    def var(self, i, n=0) -> "DiffPoly":
        if isinstance(i, str):
            i = self.index(i)
        return DiffPoly(self, {(((i, n), 1),): self.field.one})

    def gen(self, name: str) -> "DiffPoly":
        return self.var(self.index(name))

    def param(self, name: str) -> "DiffPoly":
        return self.const(self.field.param(name))

    def with_params(self, *names) -> "DiffAlgebra":
        return DiffAlgebra(self.gens, self.field.extend(*names).params)


@lru_cache(maxsize=None)
def _algebra(gens, params):
    if len(set(gens)) != len(gens):
        raise ValueError(f"duplicate generators in {gens}")
    a = object.__new__(DiffAlgebra)
    a.gens = gens
    a.field = CoeffField(params)
    return a


# -- differential polynomials ----------------------------------------------


class DiffPoly:
    __slots__ = ("alg", "terms", "_hash")

    def __init__(self, alg: DiffAlgebra, terms: dict):
        self.alg = alg
        self.terms = terms
        self._hash = None

    # construction helpers
    def _new(self, terms):
        return DiffPoly(self.alg, terms)

    def _check(self, other):
        if isinstance(other, DiffPoly):
            if other.alg is not self.alg:
                raise ParameterMismatch(f"{self.alg} vs {other.alg}")
            return other
        if isinstance(other, Coeff) or isinstance(other, int) or hasattr(other, "denominator"):
            return self.alg.const(other)
        return NotImplemented

    # predicates / accessors
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def constant_term(self) -> Coeff:
        return self.terms.get(ONE, self.alg.field.zero)

    def is_constant(self) -> bool:
        return all(m == ONE for m in self.terms)

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((mono_degree(m) for m in self.terms), default=-1)

    def order(self) -> int:
        """Maximal derivative order occurring, -1 if none."""
        return max((n for m in self.terms for (_, n), _ in m), default=-1)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def max_variable(self):
        """The largest (i, n) occurring, ordered by (n, i)."""
        vs = self.variables()
        return max(vs, key=lambda v: (v[1], v[0])) if vs else None

    # ring operations
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            if s is None:
                t[m] = c
            else:
                s = s + c
                if s:
                    t[m] = s
                else:
                    del t[m]
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "DiffPoly":
        c = self.alg.field(c)
        if not c:
            return self.alg.zero()
        if c.is_one():
            return self
        return self._new({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Coeff)) or (hasattr(other, "denominator") and not isinstance(other, DiffPoly)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                s = t.get(m)
                if s is None:
                    t[m] = c
                else:
                    s = s + c
                    if s:
                        t[m] = s
                    else:
                        del t[m]
        return self._new(t)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, DiffPoly):
            if not other.is_constant():
                raise TypeError("division by a non-constant differential polynomial")
            other = other.constant_term()
        return self.scale(self.alg.field(1) / self.alg.field(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.alg.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, DiffPoly):
            return self.alg is other.alg and self.terms == other.terms
        if isinstance(other, (int, Coeff)):
            return self == self.alg.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alg.gens, frozenset(self.terms.items())))
        return self._hash

    # calculus
    def D(self, times: int = 1) -> "DiffPoly":
        """Total derivative, applied ``times`` times."""
        f = self
        for _ in range(times):
            t = {}
            for m, c in f.terms.items():
                for nm, k in mono_derivative(m):
                    v = c * k if k != 1 else c
                    s = t.get(nm)
                    if s is None:
                        t[nm] = v
                    else:
                        s = s + v
                        if s:
                            t[nm] = s
                        else:
                            del t[nm]
            f = self._new(t)
        return f

    def partial(self, i, n=0) -> "DiffPoly":
        """Partial derivative with respect to u_i^(n)."""
        if isinstance(i, str):
            i = self.alg.index(i)
        v = (i, n)
        t = {}
        for m, c in self.terms.items():
            for k, (w, e) in enumerate(m):
                if w == v:
                    if e == 1:
                        nm = m[:k] + m[k + 1:]
                    else:
                        nm = m[:k] + ((w, e - 1),) + m[k + 1:]
                    val = c * e if e != 1 else c
                    s = t.get(nm)
                    t[nm] = val if s is None else s + val
                    if not t[nm]:
                        del t[nm]
                    break
        return self._new(t)

    def integrate_var(self, i, n) -> "DiffPoly":
        """Antiderivative in the single variable u_i^(n) (termwise)."""
        v = (i, n)
        t = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            d[v] = e + 1
            t[tuple(sorted(d.items()))] = c / (e + 1)
        return self._new(t)

    def subs_params(self, values: dict) -> "DiffPoly":
        t = {}
        for m, c in self.terms.items():
            c2 = c.subs(values)
            if c2:
                t[m] = c2
        return self._new(t)

    def map_coeffs(self, fn) -> "DiffPoly":
        t = {}
        for m, c in self.terms.items():
            c2 = fn(c)
            if c2:
                t[m] = c2
        return self._new(t)

    def substitute(self, images: dict) -> "DiffPoly":
        """Replace generators: images maps generator index to a DiffPoly.

        Derivatives follow, u_i^(n) -> D^n(images[i]).  Unlisted generators stay.
        """
        cache = {}

        def image(i, n):
            key = (i, n)
            if key not in cache:
                if i in images:
                    cache[key] = images[i].D(n)
                else:
                    cache[key] = self.alg.var(i, n)
            return cache[key]

        out = self.alg.zero()
        for m, c in self.terms.items():
            term = self.alg.const(c)
            for (i, n), e in m:
                term = term * image(i, n) ** e
            out = out + term
        return out

    def to_algebra(self, alg: DiffAlgebra) -> "DiffPoly":
        """Move into an algebra with the same generators and more parameters."""
        if alg is self.alg:
            return self
        if alg.gens != self.alg.gens:
            # reindex by generator name
            idx = [alg.index(g) for g in self.alg.gens]
            t = {}
            for m, c in self.terms.items():
                nm = tuple(sorted(((idx[i], n), e) for (i, n), e in m))
                t[nm] = alg.field(c)
            return DiffPoly(alg, t)
        return DiffPoly(alg, {m: alg.field(c) for m, c in self.terms.items()})

    def homogeneous_parts(self) -> dict:
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(mono_degree(m), {})[m] = c
        return {d: self._new(t) for d, t in parts.items()}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (-mono_degree(mc[0]), mc[0]))

    def __str__(self):
        names = self.alg.gens
        return printing.join_terms(
            (c, printing.format_monomial(names, m)) for m, c in self.sorted_terms()
        )

    def __repr__(self):
        return f"DiffPoly({self})"


def D(f: DiffPoly, times: int = 1) -> DiffPoly:
    return f.D(times)


def total_derivative(f: DiffPoly) -> DiffPoly:
    return f.D()


def partial_derivative(f: DiffPoly, i, n=0) -> DiffPoly:
    return f.partial(i, n)


# -- lambda polynomials ------------------------------------------------------


class LambdaPoly:
    """Sum of c_k * lambda^k with DiffPoly coefficients (lambda central)."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: DiffAlgebra, coeffs: dict):
        self.alg = alg
        self.coeffs = {k: v for k, v in coeffs.items() if v}

    @classmethod
    def const(cls, f: DiffPoly) -> "LambdaPoly":
        return cls(f.alg, {0: f})

    @classmethod
    def zero(cls, alg) -> "LambdaPoly":
        return cls(alg, {})

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self):
        return max(self.coeffs, default=-1)

    def __getitem__(self, k):
        return self.coeffs.get(k, self.alg.zero())

    def __add__(self, other):
        if not isinstance(other, LambdaPoly):
            other = LambdaPoly.const(self.alg.zero() + other)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c[k] + v if k in c else v
        return LambdaPoly(self.alg, c)

    __radd__ = __add__

    def __neg__(self):
        return LambdaPoly(self.alg, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LambdaPoly):
            out = {}
            for a, x in self.coeffs.items():
                for b, y in other.coeffs.items():
                    p = x * y
                    out[a + b] = out[a + b] + p if a + b in out else p
            return LambdaPoly(self.alg, out)
        return LambdaPoly(self.alg, {k: v * other for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def shift(self, k=1) -> "LambdaPoly":
        """Multiply by lambda^k."""
        return LambdaPoly(self.alg, {a + k: v for a, v in self.coeffs.items()})

    def D(self) -> "LambdaPoly":
        return LambdaPoly(self.alg, {k: v.D() for k, v in self.coeffs.items()})

    def at(self, value) -> DiffPoly:
        """Evaluate at lambda = value (a rational or Coeff)."""
        out = self.alg.zero()
        value = self.alg.field(value)
        for k, v in self.coeffs.items():
            out = out + v.scale(value**k)
        return out

    def __eq__(self, other):
        if isinstance(other, LambdaPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, DiffPoly):
            return self == LambdaPoly.const(other)
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def terms(self):
        """(coeff, lambda power, monomial) triples in printing order."""
        for k in sorted(self.coeffs):
            for m, c in self.coeffs[k].sorted_terms():
                yield c, k, m

    def format(self, sym="l") -> str:
        names = self.alg.gens
        items = []
        for c, k, m in self.terms():
            parts = [p for p in (printing.lambda_power(sym, k), printing.format_monomial(names, m)) if p]
            items.append((c, "*".join(parts)))
        return printing.join_terms(items)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"LambdaPoly({self})"


def shift_apply(k: int, y: LambdaPoly) -> LambdaPoly:
    """(lambda + D)^k applied to y, with D acting on the coefficients of y."""
    if k == 0:
        return y
    out = {}
    for a, x in y.coeffs.items():
        dx = x
        for r in range(k + 1):
            if r:
                dx = dx.D()
                if not dx:
                    break
            term = dx.scale(comb(k, r)) if comb(k, r) != 1 else dx
            p = a + k - r
            out[p] = out[p] + term if p in out else term
    return LambdaPoly(y.alg, out)


# -- matrix differential operators ---------------------------------------


class DiffOp:
    """Matrix of operators sum_k f_k D^k, each entry a dict k -> DiffPoly."""

    __slots__ = ("alg", "rows", "cols", "entries")

    def __init__(self, alg, entries):
        self.alg = alg
        self.entries = [[{k: v for k, v in e.items() if v} for e in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0

    @classmethod
    def zero(cls, alg, rows, cols):
        return cls(alg, [[{} for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def identity(cls, alg, n):
        return cls(alg, [[{0: alg.one()} if i == j else {} for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, alg, entry: dict):
        return cls(alg, [[dict(entry)]])

    @classmethod
    def d(cls, alg, k=1):
        return cls.scalar(alg, {k: alg.one()})

    @classmethod
    def from_symbols(cls, rows):
        """Build from a matrix of LambdaPoly symbols (lambda -> D on the right)."""
        alg = rows[0][0].alg
        return cls(alg, [[dict(p.coeffs) for p in row] for row in rows])

    def symbol(self, i=0, j=0) -> LambdaPoly:
        return LambdaPoly(self.alg, self.entries[i][j])

    def order(self) -> int:
        return max((k for row in self.entries for e in row for k in e), default=-1)

    def is_zero(self):
        return all(not e for row in self.entries for e in row)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.entries == other.entries

    def __add__(self, other):
        self._same_shape(other)
        out = []
        for r1, r2 in zip(self.entries, other.entries):
            row = []
            for a, b in zip(r1, r2):
                e = dict(a)
                for k, v in b.items():
                    e[k] = e[k] + v if k in e else v
                row.append(e)
            out.append(row)
        return DiffOp(self.alg, out)

    def __neg__(self):
        return DiffOp(self.alg, [[{k: -v for k, v in e.items()} for e in row] for row in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return DiffOp(self.alg, [[{k: v * c for k, v in e.items()} for e in row] for row in self.entries])

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def compose(self, other: "DiffOp") -> "DiffOp":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = {}
                for m in range(self.cols):
                    _compose_entry(self.entries[i][m], other.entries[m][j], acc)
                row.append(acc)
            out.append(row)
        return DiffOp(self.alg, out)

    __matmul__ = compose

    def adjoint(self) -> "DiffOp":
        out = [[None] * self.rows for _ in range(self.cols)]
        for i in range(self.rows):
            for j in range(self.cols):
                out[j][i] = _adjoint_entry(self.entries[i][j])
        return DiffOp(self.alg, out)

    def apply(self, F) -> list:
        if len(F) != self.cols:
            raise ShapeMismatch(f"operator has {self.cols} columns, vector has {len(F)} entries")
        res = []
        for row in self.entries:
            acc = self.alg.zero()
            for e, f in zip(row, F):
                for k, c in e.items():
                    acc = acc + c * f.D(k)
            res.append(acc)
        return res

    def format_entry(self, i, j) -> str:
        e = self.entries[i][j]
        names = self.alg.gens
        items = []
        for k in sorted(e):
            for m, c in e[k].sorted_terms():
                parts = [p for p in (printing.format_monomial(names, m), printing.lambda_power("D", k)) if p]
                items.append((c, "*".join(parts)))
        return printing.join_terms(items)

    def __str__(self):
        if self.rows == self.cols == 1:
            return self.format_entry(0, 0)
        return "[" + "; ".join(", ".join(self.format_entry(i, j) for j in range(self.cols)) for i in range(self.rows)) + "]"

    def __repr__(self):
        return f"DiffOp({self})"


def _compose_entry(a: dict, b: dict, acc: dict):
    # (f D^p)(g D^q) = f sum_r C(p,r) g^(r) D^(p-r+q)
    for p, f in a.items():
        for q, g in b.items():
            dg = g
            for r in range(p + 1):
                if r:
                    dg = dg.D()
                    if not dg:
                        break
                term = f * dg
                if comb(p, r) != 1:
                    term = term.scale(comb(p, r))
                k = p - r + q
                acc[k] = acc[k] + term if k in acc else term


def _adjoint_entry(a: dict) -> dict:
    # (f D^p)* = (-D)^p f = (-1)^p sum_r C(p,r) f^(r) D^(p-r)
    out = {}
    for p, f in a.items():
        df = f
        for r in range(p + 1):
            if r:
                df = df.D()
                if not df:
                    break
            c = comb(p, r) * (-1) ** p
            term = df.scale(c)
            k = p - r
            out[k] = out[k] + term if k in out else term
    return out


def diffop_compose(A: DiffOp, B: DiffOp) -> DiffOp:
    return A.compose(B)


def diffop_adjoint(A: DiffOp) -> DiffOp:
    return A.adjoint()


def diffop_apply(A: DiffOp, F) -> list:
    return A.apply(F)
