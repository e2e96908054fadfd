"""Lambda-bracket calculus in the universal enveloping vertex algebra of a
Lie conformal algebra given by a generator table.

A word is a tuple of factors ``(g, t)`` meaning T^t applied to generator
g; the tuple stands for the right-nested product :f1 :f2 ... fk::, and
the empty tuple is the vacuum.  Canonical words have non-decreasing
factors and no repeated odd factor.  Expressions are dicts word -> Coeff.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .coeff import CoeffField
from . import printing
from .report import Report

VAC = ()


def _acc(out, word, c):
    s = out.get(word)
    if s is None:
        if c:
            out[word] = c
    else:
        s = s + c
        if s:
            out[word] = s
        else:
            del out[word]


def _add_into(out, d, c=None):
    for w, v in d.items():
        _acc(out, w, v if c is None else v * c)


def _ladd(out, k, d, c=None):
    """Add d (times c) into the lambda^k slot of out."""
    if not d:
        return
    slot = out.setdefault(k, {})
    _add_into(slot, d, c)
    if not slot:
        del out[k]


class VertexAlgebra:
    """Generators with parity and optional conformal weight, plus a bracket table."""

    def __init__(self, labels, params=(), odd=(), weights=None):
        self.labels = tuple(labels)
        self.field = CoeffField(tuple(params))
        self.odd = tuple(bool(lbl in odd) for lbl in self.labels)
        self.weights = dict(weights or {})
        self.table = {}
        self.defs = {}
        self._ins, self._np, self._br, self._T = {}, {}, {}, {}

    # -- construction ----------------------------------------------------
    def index(self, name):
        try:
            return self.labels.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def gen(self, name, t=0) -> "VaExpr":
        return VaExpr(self, {((self.index(name), t),): self.field.one})

    def vac(self) -> "VaExpr":
        return VaExpr(self, {VAC: self.field.one})

    def zero(self) -> "VaExpr":
        return VaExpr(self, {})

    def scalar(self, c) -> "VaExpr":
        c = self.field(c)
        return VaExpr(self, {VAC: c} if c else {})

    def set_bracket(self, a, b, value: dict):
        """value: dict lambda-power -> VaExpr (or raw dict)."""
        i, j = self.index(a) if isinstance(a, str) else a, self.index(b) if isinstance(b, str) else b
        raw = {}
        for k, v in value.items():
            d = v.terms if isinstance(v, VaExpr) else v
            if d:
                raw[k] = dict(d)
        self.table[(i, j)] = raw
        self._ins.clear()
        self._np.clear()
        self._br.clear()
        self._T.clear()

    def complete_table(self):
        """Fill missing (j, i) entries from (i, j) by skewsymmetry."""
        for (i, j), v in list(self.table.items()):
            if (j, i) not in self.table:
                self.table[(j, i)] = self._skew_value(i, j, v)

    def _skew_value(self, i, j, v):
        # [b_l a] = -p [a_{-l-T} b]
        sign = -self._sgn(self.odd[i], self.odd[j])
        out = {}
        for k, X in v.items():
            for r in range(k + 1):
                c = Fraction(sign * (-1) ** k * comb(k, r))
                _ladd(out, k - r, self.t_pow(X, r), self.field(c))
        return out

    # -- parity ------------------------------------------------------------
    @staticmethod
    def _sgn(p, q):
        return -1 if (p and q) else 1

    def word_parity(self, w):
        return sum(self.odd[g] for g, _ in w) % 2 == 1

    def expr_parity(self, d):
        for w in d:
            return self.word_parity(w)
        return False

    # -- T ------------------------------------------------------------------
    def t_word(self, w):
        if not w:
            return {}
        hit = self._T.get(w)
        if hit is not None:
            return hit
        (g, t), rest = w[0], w[1:]
        out = dict(self.insert((g, t + 1), rest)) if rest else {((g, t + 1),): self.field.one}
        for word, c in self.t_word(rest).items():
            _add_into(out, self.insert(w[0], word), c)
        self._T[w] = out
        return out

    def t_apply(self, d):
        out = {}
        for w, c in d.items():
            _add_into(out, self.t_word(w), c)
        return out

    def t_pow(self, d, n):
        for _ in range(n):
            d = self.t_apply(d)
        return d

    # -- normally ordered product -----------------------------------------
    def insert(self, d, w):
        """Canonical form of :d w: for a factor d and a canonical word w."""
        key = (d, w)
        hit = self._ins.get(key)
        if hit is not None:
            return hit
        one = self.field.one
        if not w:
            out = {(d,): one}
        else:
            e = w[0]
            odd_d = self.odd[d[0]]
            if d < e or (d == e and not odd_d):
                out = {(d,) + w: one}
            else:
                rest = w[1:]
                C = self.qc_correction(d, e)
                out = {}
                if d == e:
                    # odd: 2 :d:d W:: = :C W:
                    _add_into(out, self.np_expr_word(C, rest), self.field(Fraction(1, 2)))
                else:
                    sign = self._sgn(odd_d, self.odd[e[0]])
                    for word, c in self.insert(d, rest).items():
                        _add_into(out, self.insert(e, word), c * sign)
                    _add_into(out, self.np_expr_word(C, rest))
        self._ins[key] = out
        return out

    def qc_correction(self, d, e):
        """int_{-T}^0 [d_l e] dl = sum_j (-1)^j T^(j+1) B_j / (j+1)."""
        br = self.bracket_words((d,), (e,))
        out = {}
        for j, B in br.items():
            _add_into(out, self.t_pow(B, j + 1), self.field(Fraction((-1) ** j, j + 1)))
        return out

    def np_words(self, A, B):
        if not A:
            return {B: self.field.one}
        if len(A) == 1:
            return self.insert(A[0], B)
        key = (A, B)
        hit = self._np.get(key)
        if hit is not None:
            return hit
        d, Ap = A[0], A[1:]
        out = {}
        # ::d Ap: B: = :d :Ap B:: + sum_j :(T^(j+1) d)(Ap_(j) B):/(j+1)
        #             + p(d,Ap) sum_j :(T^(j+1) Ap)(d_(j) B):/(j+1)
        for word, c in self.np_words(Ap, B).items():
            _add_into(out, self.insert(d, word), c)
        g, t = d
        for j, Bj in self.bracket_words(Ap, B).items():
            f = self.field(Fraction(1, j + 1))
            for word, c in Bj.items():
                _add_into(out, self.insert((g, t + j + 1), word), c * f)
        sign = self._sgn(self.odd[g], self.word_parity(Ap))
        TAp = {Ap: self.field.one}
        k = 0
        for j, Aj in sorted(self.bracket_words((d,), B).items()):
            while k < j + 1:
                TAp = self.t_apply(TAp)
                k += 1
            f = self.field(Fraction(sign, j + 1))
            _add_into(out, self.np_expr(TAp, Aj), f)
        self._np[key] = out
        return out

    def np_expr_word(self, X, w):
        out = {}
        for word, c in X.items():
            _add_into(out, self.np_words(word, w), c)
        return out

    def np_expr(self, X, Y):
        out = {}
        for a, c in X.items():
            for b, e in Y.items():
                _add_into(out, self.np_words(a, b), c * e)
        return out

    # -- lambda bracket ------------------------------------------------------
    def bracket_words(self, A, B):
        """[A_l B] as dict lambda-power -> expression dict."""
        if not A or not B:
            return {}
        key = (A, B)
        hit = self._br.get(key)
        if hit is not None:
            return hit
        out = {}
        F = self.field
        if len(B) >= 2:
            b, C = B[:1], B[1:]
            # :[A_l b] C:
            AB = self.bracket_words(A, b)
            for k, X in AB.items():
                _ladd(out, k, self.np_expr_word(X, C))
            # p(A,b) :b [A_l C]:
            sign = self._sgn(self.word_parity(A), self.odd[b[0][0]])
            for k, Y in self.bracket_words(A, C).items():
                _ladd(out, k, self.np_expr({b: F.one}, Y), F(sign))
            # int_0^l [[A_l b]_m C] dm
            for k, X in AB.items():
                for w, c in X.items():
                    for m, Z in self.bracket_words(w, C).items():
                        _ladd(out, k + m + 1, Z, c * F(Fraction(1, m + 1)))
        elif B[0][1] > 0:
            (h, n), = B
            base = self.bracket_words(A, ((h, 0),))
            # (l + T)^n applied to the value
            for k, X in base.items():
                TX = X
                for r in range(n + 1):
                    if r:
                        TX = self.t_apply(TX)
                    _ladd(out, k + n - r, TX, F(comb(n, r)))
        elif len(A) == 1:
            (g, m), = A
            (h, _), = B
            for k, X in self.table.get((g, h), {}).items():
                _ladd(out, k + m, X, F((-1) ** m))
        else:
            # skewsymmetry: [A_l h] = -p [h_{-l-T} A]
            sign = -self._sgn(self.word_parity(A), self.word_parity(B))
            for k, Y in self.bracket_words(B, A).items():
                TY = Y
                for r in range(k + 1):
                    if r:
                        TY = self.t_apply(TY)
                    _ladd(out, k - r, TY, F(sign * (-1) ** k * comb(k, r)))
        self._br[key] = out
        return out

    def bracket_expr(self, X, Y):
        out = {}
        for a, c in X.items():
            for b, e in Y.items():
                for k, Z in self.bracket_words(a, b).items():
                    _ladd(out, k, Z, c * e)
        return out

    # -- weights -------------------------------------------------------------
    def word_weight(self, w):
        return sum(self.weights[self.labels[g]] + t for g, t in w)

    # -- printing ------------------------------------------------------------
    def format_factor(self, f):
        g, t = f
        name = self.labels[g]
        if t == 0:
            return name
        if t == 1:
            return f"T({name})"
        return f"T^{t}({name})"

    def format_word(self, w):
        if not w:
            return "vac"
        if len(w) == 1:
            return self.format_factor(w[0])
        return ":" + self.format_factor(w[0]) + " " + self.format_word(w[1:]) + ":"

    def format_expr(self, d, lam=None):
        items = []
        for w in sorted(d, key=lambda w: (len(w), w)):
            body = self.format_word(w)
            if lam:
                body = f"{lam}*{body}"
            items.append((d[w], body))
        return printing.join_terms(items)

    def format_lexpr(self, L, sym="l"):
        items = []
        for k in sorted(L):
            for w in sorted(L[k], key=lambda w: (len(w), w)):
                parts = [p for p in (printing.lambda_power(sym, k), self.format_word(w)) if p]
                items.append((L[k][w], "*".join(parts)))
        return printing.join_terms(items)


class VaExpr:
    """A canonical linear combination of words."""

    __slots__ = ("va", "terms")

    def __init__(self, va: VertexAlgebra, terms: dict):
        self.va = va
        self.terms = {w: c for w, c in terms.items() if c}

    def __add__(self, o):
        out = dict(self.terms)
        _add_into(out, _terms(self.va, o))
        return VaExpr(self.va, out)

    __radd__ = __add__

    def __neg__(self):
        return VaExpr(self.va, {w: -c for w, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-_as_expr(self.va, o))

    def __mul__(self, c):
        c = self.va.field(c)
        return VaExpr(self.va, {w: v * c for w, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, o):
        if isinstance(o, VaExpr):
            return self.terms == o.terms
        if o == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_scalar(self):
        return all(w == VAC for w in self.terms)

    def parity(self):
        return self.va.expr_parity(self.terms)

    def T(self, n=1) -> "VaExpr":
        return VaExpr(self.va, self.va.t_pow(self.terms, n))

    def __str__(self):
        return self.va.format_expr(self.terms)

    def __repr__(self):
        return f"VaExpr({self})"


class LExpr:
    """A polynomial in lambda with VaExpr coefficients."""

    __slots__ = ("va", "coeffs")

    def __init__(self, va, coeffs):
        self.va = va
        self.coeffs = {k: v for k, v in coeffs.items() if v}

    def __getitem__(self, k):
        return VaExpr(self.va, self.coeffs.get(k, {}))

    def degree(self):
        return max(self.coeffs, default=-1)

    def __eq__(self, o):
        if isinstance(o, LExpr):
            return self.coeffs == o.coeffs
        return NotImplemented

    def __sub__(self, o):
        out = {k: dict(v) for k, v in self.coeffs.items()}
        for k, v in o.coeffs.items():
            _ladd(out, k, v, self.va.field(-1))
        return LExpr(self.va, out)

    def __add__(self, o):
        out = {k: dict(v) for k, v in self.coeffs.items()}
        for k, v in o.coeffs.items():
            _ladd(out, k, v)
        return LExpr(self.va, out)

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        return self.va.format_lexpr(self.coeffs)

    def __repr__(self):
        return f"LExpr({self})"


def _terms(va, o):
    if isinstance(o, VaExpr):
        return o.terms
    return va.scalar(o).terms


def _as_expr(va, o):
    return o if isinstance(o, VaExpr) else va.scalar(o)


# -- public operations -------------------------------------------------------


def t_apply(e: VaExpr) -> VaExpr:
    return e.T()


def no_product(A: VaExpr, B: VaExpr) -> VaExpr:
    return VaExpr(A.va, A.va.np_expr(A.terms, B.terms))


def va_lambda_bracket(A: VaExpr, B: VaExpr) -> LExpr:
    return LExpr(A.va, A.va.bracket_expr(A.terms, B.terms))


def lexpr_at_shift(va, L: LExpr, neg=True) -> LExpr:
    """Substitute lambda -> -lambda-T (neg) into L, T acting on the coefficients."""
    out = {}
    for k, X in L.coeffs.items():
        TX = X
        for r in range(k + 1):
            if r:
                TX = va.t_apply(TX)
            _ladd(out, k - r, TX, va.field((-1) ** k * comb(k, r)))
    return LExpr(va, out)


def skew_residual(A: VaExpr, B: VaExpr) -> LExpr:
    """[A_l B] + p(A,B) [B_{-l-T} A]; zero when skewsymmetry holds."""
    va = A.va
    sign = va._sgn(A.parity(), B.parity())
    other = lexpr_at_shift(va, va_lambda_bracket(B, A))
    scaled = LExpr(va, {k: {w: c * sign for w, c in v.items()} for k, v in other.coeffs.items()})
    return va_lambda_bracket(A, B) + scaled


def quasicommutativity_residual(A: VaExpr, B: VaExpr) -> VaExpr:
    """:AB: - p :BA: - int_{-T}^0 [A_l B] dl."""
    va = A.va
    sign = va._sgn(A.parity(), B.parity())
    lhs = no_product(A, B) - no_product(B, A) * sign
    corr = {}
    for j, Bj in va_lambda_bracket(A, B).coeffs.items():
        _add_into(corr, va.t_pow(Bj, j + 1), va.field(Fraction((-1) ** j, j + 1)))
    return lhs - VaExpr(va, corr)


def jacobi_residual(a: VaExpr, b: VaExpr, c: VaExpr) -> dict:
    """[a_l[b_m c]] - p(a,b)[b_m[a_l c]] - [[a_l b]_{l+m} c] as (l, m) -> VaExpr dict."""
    va = a.va
    out = {}

    def add(k, m, d, s):
        slot = out.setdefault((k, m), {})
        _add_into(slot, d, va.field(s))
        if not slot:
            del out[(k, m)]

    for m, X in va.bracket_expr(b.terms, c.terms).items():
        for k, Y in va.bracket_expr(a.terms, X).items():
            add(k, m, Y, 1)
    sign = va._sgn(a.parity(), b.parity())
    for k, X in va.bracket_expr(a.terms, c.terms).items():
        for m, Y in va.bracket_expr(b.terms, X).items():
            add(k, m, Y, -sign)
    for k, X in va.bracket_expr(a.terms, b.terms).items():
        for n, Y in va.bracket_expr(X, c.terms).items():
            for r in range(n + 1):
                add(k + r, n - r, Y, -comb(n, r))
    return out


def check_jacobi(va: VertexAlgebra) -> Report:
    rep = Report()
    n = len(va.labels)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a, b, c = (va.gen(va.labels[x]) for x in (i, j, k))
                r = jacobi_residual(a, b, c)
                txt = "0" if not r else "; ".join(
                    f"l^{p}m^{q}: {va.format_expr(d)}" for (p, q), d in sorted(r.items()))
                rep.add("va-jacobi", (va.labels[i], va.labels[j], va.labels[k]), txt, not r)
    return rep


def check_table_skew(va: VertexAlgebra) -> Report:
    rep = Report()
    n = len(va.labels)
    for i in range(n):
        for j in range(i, n):
            a, b = va.gen(va.labels[i]), va.gen(va.labels[j])
            r = skew_residual(a, b)
            rep.add("va-skew", (va.labels[i], va.labels[j]), r if r else "0", not r)
    return rep


def weight_check(A: VaExpr, B: VaExpr, wA, wB) -> bool:
    """Every term of the l^j coefficient of [A_l B] has weight wA + wB - j - 1."""
    va = A.va
    for j, X in va_lambda_bracket(A, B).coeffs.items():
        for w in X:
            if va.word_weight(w) != wA + wB - j - 1:
                return False
    return True


def virasoro_extract(L: VaExpr):
    """Match [L_l L] against (T + 2l)L + l^3/12 c vac.

    Returns (True, c) on success and (False, residual LExpr) otherwise.
    """
    va = L.va
    br = va_lambda_bracket(L, L)
    c = br[3]
    if not c.is_scalar():
        return False, br
    cval = c.terms.get(VAC, va.field.zero) * 12
    want = LExpr(va, {0: L.T().terms, 1: (L * 2).terms, 3: va.scalar(cval / 12).terms})
    res = br - want
    if res:
        return False, res
    return True, cval


def primary_check(L: VaExpr, a: VaExpr, weight) -> LExpr:
    """[L_l a] - (T + weight*l) a; zero exactly when a is primary of that weight."""
    va = L.va
    want = LExpr(va, {0: a.T().terms, 1: (a * weight).terms})
    return va_lambda_bracket(L, a) - want


# -- bundled vertex algebras --------------------------------------------------


def free_boson(name="a") -> VertexAlgebra:
    va = VertexAlgebra([name], weights={name: 1})
    va.set_bracket(name, name, {1: va.vac()})
    return va


def free_fermion(name="phi") -> VertexAlgebra:
    va = VertexAlgebra([name], odd=(name,), weights={name: Fraction(1, 2)})
    va.set_bracket(name, name, {0: va.vac()})
    return va


def virasoro(c="c", name="L") -> VertexAlgebra:
    params = (c,) if isinstance(c, str) else ()
    va = VertexAlgebra([name], params=params, weights={name: 2})
    cc = va.field.param(c) if isinstance(c, str) else va.field(c)
    L = va.gen(name)
    va.set_bracket(name, name, {0: L.T(), 1: L * 2, 3: va.scalar(cc / 12)})
    return va


def current_algebra(Lie, k="k") -> VertexAlgebra:
    """[a_l b] = [a,b] + l (a|b) k vac."""
    params = list(Lie.field.params)
    if isinstance(k, str) and k not in params:
        params.append(k)
    va = VertexAlgebra(Lie.labels, params=params, weights={x: 1 for x in Lie.labels})
    F = va.field
    kk = F.param(k) if isinstance(k, str) else F(k)
    for i in range(Lie.dim):
        for j in range(Lie.dim):
            br = Lie.bracket(Lie.basis(i), Lie.basis(j))
            v0 = {((m, 0),): F(c) for m, c in enumerate(br) if c}
            val = {}
            if v0:
                val[0] = v0
            form = F(Lie.gram[i][j]) * kk
            if form:
                val[1] = {VAC: form}
            va.set_bracket(i, j, val)
    return va


def sugawara(Lie, k="k"):
    """The Sugawara vector 1/(2(k + h)) sum_i :a_i b^i: with 2h the adjoint
    Casimir eigenvalue.  Returns (vertex algebra, L, h)."""
    from .liealg import casimir_adjoint_eigenvalue, dual_bases

    va = current_algebra(Lie, k)
    F = va.field
    h = F(casimir_adjoint_eigenvalue(Lie)) / 2
    kk = F.param(k) if isinstance(k, str) else F(k)
    if not (kk + h):
        raise ZeroDivisionError("level is critical: k + h = 0")
    acc = {}
    for i, (_, b) in enumerate(dual_bases(Lie)):
        dual = {((m, 0),): F(c) for m, c in enumerate(b) if c}
        _add_into(acc, va.np_expr({((i, 0),): F.one}, dual))
    L = VaExpr(va, acc) * (F.one / (2 * (kk + h)))
    va.defs["L"] = L
    return va, L, h


def format_folded(va: VertexAlgebra, L, names=None, sym="l") -> str:
    """Print a bracket value, folding (T + w l) N for a named N when possible."""
    coeffs = L.coeffs if isinstance(L, LExpr) else L
    cands = dict(names if names is not None else va.defs)
    for i, g in enumerate(va.labels):
        cands.setdefault(g, {((i, 0),): va.field.one})
    head = ""
    rest = coeffs
    for name, V in cands.items():
        if not V or coeffs.get(0) != va.t_apply(V):
            continue
        one = coeffs.get(1, {})
        w0, c0 = next(iter(V.items()))
        w = one.get(w0, va.field.zero) / c0
        if not w or {k: c * w for k, c in V.items()} != one:
            continue
        neg, text = printing.coeff_factor(w)
        lam = f"{text}*{sym}" if text else sym
        head = f"(T {'-' if neg else '+'} {lam})*{name}"
        rest = {k: v for k, v in coeffs.items() if k not in (0, 1)}
        break
    if not head:
        return va.format_lexpr(coeffs, sym)
    if not rest:
        return head
    tail = va.format_lexpr(rest, sym)
    return head + (" - " + tail[1:] if tail.startswith("-") else " + " + tail)
