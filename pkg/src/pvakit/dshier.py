"""Homogeneous Drinfeld-Sokolov hierarchy for g with a semisimple element s.

Elements of g (x) V are lists of DiffPoly indexed by the basis of g.  A
z-series maps k to the coefficient of z^(-k); the Lax operator has a z^1
term, stored under key -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .diffalg import DiffAlgebra
from .liealg import LieAlgebraData, LieError, dual_bases, root_value, s_decomposition
from .pva import affine_pair, hamiltonian_vector
from .report import Report
from .varcalc import FunctionalClass, variational_derivative


class GV:
    """An element of g (x) V."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx, comps):
        self.ctx = ctx
        self.c = comps

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, [ctx.alg.zero()] * ctx.L.dim)

    @classmethod
    def const(cls, ctx, vec):
        return cls(ctx, [ctx.alg.const(ctx.alg.field(x)) for x in vec])

    def __add__(self, o):
        return GV(self.ctx, [a + b for a, b in zip(self.c, o.c)])

    def __sub__(self, o):
        return GV(self.ctx, [a - b for a, b in zip(self.c, o.c)])

    def __neg__(self):
        return GV(self.ctx, [-a for a in self.c])

    def scale(self, q):
        return GV(self.ctx, [a.scale(q) for a in self.c])

    def D(self):
        return GV(self.ctx, [a.D() for a in self.c])

    def bracket(self, o):
        L = self.ctx.L
        out = [self.ctx.alg.zero()] * L.dim
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(o.c):
                if not b:
                    continue
                row = self.ctx.consts[i][j]
                if not row:
                    continue
                ab = a * b
                for k, ck in row:
                    out[k] = out[k] + ab.scale(ck)
        return GV(self.ctx, out)

    def linear(self, images):
        """Apply the F-linear map sending basis vector k to images[k] (a vector)."""
        out = [self.ctx.alg.zero()] * self.ctx.L.dim
        for k, a in enumerate(self.c):
            if not a:
                continue
            for m, x in enumerate(images[k]):
                if x:
                    out[m] = out[m] + a.scale(x)
        return GV(self.ctx, out)

    def __bool__(self):
        return any(self.c)

    def __eq__(self, o):
        return all(a == b for a, b in zip(self.c, o.c))

    def __str__(self):
        parts = []
        for k, a in enumerate(self.c):
            if a:
                parts.append(f"{self.ctx.L.labels[k]}*({a})")
        return " + ".join(parts) if parts else "0"


class _Ctx:
    def __init__(self, L: LieAlgebraData, alg: DiffAlgebra):
        self.L = L
        self.alg = alg
        F = alg.field
        self.consts = [[[(k, F(c)) for k, c in enumerate(L.consts[i][j]) if c] for j in range(L.dim)]
                       for i in range(L.dim)]


def _add_series(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return out


def _bracket_series(U, X, upto):
    out = {}
    for i, u in U.items():
        for j, x in X.items():
            k = i + j
            if k > upto:
                continue
            t = u.bracket(x)
            out[k] = out[k] + t if k in out else t
    return out


def _scale_series(X, q):
    return {k: v.scale(q) for k, v in X.items()}


def exp_ad(U, X, upto, sign=1):
    """e^{sign ad U} X truncated at order upto (U has orders >= 1)."""
    out = dict(X)
    term = X
    m = 1
    while term:
        term = _bracket_series(U, term, upto)
        if not term:
            break
        out = _add_series(out, _scale_series(term, sign ** m * _inv_fact(m)))
        m += 1
    return {k: v for k, v in out.items() if k <= upto}


def _inv_fact(m):
    from fractions import Fraction

    return Fraction(1, factorial(m))


def gauge_transform(ctx, U, q, s_vec, upto):
    """e^{ad U}(D + q - z s) - D, as a series through order ``upto``.

    The D part uses [U, D] = -D(U): e^{ad U} D = D + sum_{m>=1} (ad U)^{m-1}(-D U)/m!.
    """
    base = {0: q, -1: -GV.const(ctx, s_vec)}
    out = exp_ad(U, base, upto)
    dU = {k: -v.D() for k, v in U.items() if k <= upto}
    term = dU
    m = 1
    while term:
        out = _add_series(out, _scale_series(term, _inv_fact(m)))
        term = _bracket_series(U, term, upto)
        m += 1
    return {k: v for k, v in out.items() if k <= upto}


@dataclass
class DSResult:
    L: LieAlgebraData
    alg: DiffAlgebra
    s: list
    N: int
    U: dict
    f: dict
    decomposition: object
    ctx: object
    q: GV


def lax_current(ctx) -> GV:
    """q = sum_i u^i (x) u_i with u^i the dual basis."""
    L = ctx.L
    q = GV.zero(ctx)
    for i, (_, b) in enumerate(dual_bases(L)):
        v = ctx.alg.var(i)
        q = q + GV(ctx, [v.scale(ctx.alg.field(x)) if x else ctx.alg.zero() for x in b])
    return q


def ds_gauge(L: LieAlgebraData, s, N: int = 3) -> DSResult:
    if N < 1:
        raise ValueError("truncation must be at least 1")
    s_vec = L.basis(s) if not isinstance(s, list) else s
    dec = s_decomposition(L, s_vec)
    alg = DiffAlgebra(L.labels, L.field.params)
    ctx = _Ctx(L, alg)
    F = alg.field
    basis = [L.basis(k) for k in range(L.dim)]
    to_h = [[F(x) for x in dec.project_h(e)] for e in basis]
    # U_{n+1} = -(ad s)^{-1} of the perp part
    to_U = [[-F(x) for x in dec.ad_s_inverse(dec.project_perp(e))] for e in basis]
    q = lax_current(ctx)
    U, f = {}, {}
    for n in range(N + 1):
        E = gauge_transform(ctx, U, q, s_vec, n)
        X = E.get(n, GV.zero(ctx))
        f[n] = X.linear(to_h)
        U[n + 1] = X.linear(to_U)
    return DSResult(L, alg, s_vec, N, U, f, dec, ctx, q)


def gauge_residual(R: DSResult) -> Report:
    """Recompute e^{ad U} L and compare with D + f - z s through z^-N."""
    rep = Report()
    E = gauge_transform(R.ctx, R.U, R.q, R.s, R.N)
    top = E.get(-1, GV.zero(R.ctx)) + GV.const(R.ctx, R.s)
    rep.add("gauge", (-1,), top if top else "0", not top)
    for n in range(R.N + 1):
        r = E.get(n, GV.zero(R.ctx)) - R.f[n]
        rep.add("gauge", (n,), r if r else "0", not r)
    F = R.alg.field
    basis = [R.L.basis(k) for k in range(R.L.dim)]
    to_perp = [[F(x) for x in R.decomposition.project_perp(e)] for e in basis]
    to_h = [[F(x) for x in R.decomposition.project_h(e)] for e in basis]
    for n, v in R.f.items():
        r = v.linear(to_perp)
        rep.add("f-in-h", (n,), r if r else "0", not r)
    for n, v in R.U.items():
        r = v.linear(to_h)
        rep.add("U-in-perp", (n,), r if r else "0", not r)
    return rep


def _check_central(R: DSResult, a):
    for h in R.decomposition.centralizer:
        if any(R.L.bracket(a, h)):
            raise LieError("a is not in the center of the centralizer of s")


def ds_densities(R: DSResult, a) -> list:
    """h^a_n = (a (x) 1 | f_n), n = 0..N."""
    L = R.L
    a_vec = L.basis(a) if not isinstance(a, list) else a
    _check_central(R, a_vec)
    F = R.alg.field
    weights = [F(L.form(a_vec, L.basis(k))) for k in range(L.dim)]
    out = []
    for n in range(R.N + 1):
        acc = R.alg.zero()
        for k, w in enumerate(weights):
            if w and R.f[n].c[k]:
                acc = acc + R.f[n].c[k].scale(w)
        out.append(FunctionalClass(acc, reduce=False))
    return out


def gradient_series(R: DSResult, a) -> dict:
    """F^a = e^{-ad U}(a (x) 1) through order N."""
    a_vec = R.L.basis(a) if not isinstance(a, list) else a
    return exp_ad(R.U, {0: GV.const(R.ctx, a_vec)}, R.N, sign=-1)


def assemble_gradient(R: DSResult, h) -> GV:
    """sum_i u_i (x) delta h / delta u_i."""
    dens = h.density if isinstance(h, FunctionalClass) else h
    return GV(R.ctx, variational_derivative(dens))


def ds_equations(R: DSResult, densities, H=None) -> list:
    if H is None:
        H, _ = affine_pair(R.L, R.s)
    return [hamiltonian_vector(h, H) for h in densities]


def ds_verify(R: DSResult, a, densities=None) -> Report:
    rep = Report()
    rep.extend(gauge_residual(R))
    if densities is None:
        densities = ds_densities(R, a)
    H, K = affine_pair(R.L, R.s)
    Fa = gradient_series(R, a)
    for n, h in enumerate(densities):
        r = assemble_gradient(R, h) - Fa.get(n, GV.zero(R.ctx))
        rep.add("gradient", (n,), r if r else "0", not r)
    labels = R.L.labels
    for n in range(len(densities) - 1):
        lhs = hamiltonian_vector(densities[n], H)
        rhs = hamiltonian_vector(densities[n + 1], K)
        for j, (x, y) in enumerate(zip(lhs, rhs)):
            d = x - y
            rep.add("lenard-magri", (n, labels[j]), d if d else "0", not d)
    from .pva import functional_bracket

    for S in (H, K):
        for m in range(len(densities)):
            for n in range(m + 1, len(densities)):
                v = functional_bracket(densities[m], densities[n], S)
                rep.add(f"involution-{S.name}", (m, n), v if not v.is_zero() else "0", v.is_zero())
    return rep


# -- closed-form predictions from root data ----------------------------------


def _root_pairs(L):
    out = []
    for _, (pos, neg) in L.roots.items():
        out.append((pos, neg))
        out.append((neg, pos))
    return out


def predicted_t0(R: DSResult, a) -> list:
    """db/dt0 = 0 on the centralizer, de/dt0 = alpha(a) e on root vectors."""
    L = R.L
    a_vec = L.basis(a) if not isinstance(a, list) else a
    out = [None] * L.dim
    for e, _ in _root_pairs(L):
        out[L._idx(e)] = R.alg.var(L._idx(e)).scale(R.alg.field(root_value(L, a_vec, e)))
    for k in range(L.dim):
        if out[k] is None:
            out[k] = R.alg.zero()
    return out


def predicted_t1(R: DSResult, a) -> dict:
    """de_alpha/dt1 = (alpha(a)/alpha(s)) e_alpha' + sum_beta (beta(a)/beta(s)) e_-beta [e_beta, e_alpha]."""
    L = R.L
    F = R.alg.field
    a_vec = L.basis(a) if not isinstance(a, list) else a
    pairs = _root_pairs(L)
    out = {}
    for e, _ in pairs:
        ratio = F(root_value(L, a_vec, e)) / F(root_value(L, R.s, e))
        acc = R.alg.var(L._idx(e), 1).scale(ratio)
        for eb, emb in pairs:
            rb = F(root_value(L, a_vec, eb)) / F(root_value(L, R.s, eb))
            br = L.bracket(L.basis(eb), L.basis(e))
            lin = R.alg.zero()
            for k, c in enumerate(br):
                if c:
                    lin = lin + R.alg.var(k).scale(F(c))
            acc = acc + (R.alg.var(L._idx(emb)) * lin).scale(rb)
        out[e] = acc
    return out


def predicted_h1(R: DSResult, a) -> FunctionalClass:
    """1/2 sum_alpha (alpha(a)/alpha(s)) e_-alpha e_alpha over all roots."""
    L = R.L
    F = R.alg.field
    a_vec = L.basis(a) if not isinstance(a, list) else a
    acc = R.alg.zero()
    for e, em in _root_pairs(L):
        ratio = F(root_value(L, a_vec, e)) / F(root_value(L, R.s, e))
        acc = acc + (R.alg.var(L._idx(em)) * R.alg.var(L._idx(e))).scale(ratio / 2)
    return FunctionalClass(acc, reduce=False)
