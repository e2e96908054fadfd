"""Poisson vertex algebra structures on P_l: bracket tables, the Master
Formula, functional brackets and the axiom checkers."""

from __future__ import annotations

from math import comb

from .diffalg import DiffAlgebra, DiffOp, DiffPoly, LambdaPoly, shift_apply
from .report import Report
from .varcalc import FunctionalClass, variational_derivative


class PvaSpec:
    """Generator bracket table: ``table[(i, j)]`` is {u_i lambda u_j}."""

    def __init__(self, alg: DiffAlgebra, table: dict, name: str = "H"):
        self.alg = alg
        self.name = name
        self.table = {}
        for (i, j), v in table.items():
            i = alg.index(i) if isinstance(i, str) else i
            j = alg.index(j) if isinstance(j, str) else j
            if isinstance(v, DiffPoly):
                v = LambdaPoly.const(v)
            if v.alg is not alg:
                v = LambdaPoly(alg, {k: c.to_algebra(alg) for k, c in v.coeffs.items()})
            if v:
                self.table[(i, j)] = v

    def entry(self, i, j) -> LambdaPoly:
        return self.table.get((i, j)) or LambdaPoly.zero(self.alg)

    @property
    def rank(self):
        return self.alg.rank

    def to_algebra(self, alg: DiffAlgebra) -> "PvaSpec":
        return PvaSpec(alg, {k: LambdaPoly(alg, {a: c.to_algebra(alg) for a, c in v.coeffs.items()})
                             for k, v in self.table.items()}, self.name)

    def scaled(self, c) -> "PvaSpec":
        return PvaSpec(self.alg, {k: v * self.alg.field(c) for k, v in self.table.items()}, self.name)

    def __add__(self, other: "PvaSpec") -> "PvaSpec":
        t = dict(self.table)
        for k, v in other.table.items():
            t[k] = t[k] + v if k in t else v
        return PvaSpec(self.alg, t, f"{self.name}+{other.name}")

    def poisson_structure(self) -> DiffOp:
        """H with H_ji(D) = {u_i lambda u_j}, lambda -> D on the right."""
        n = self.rank
        rows = [[{} for _ in range(n)] for _ in range(n)]
        for (i, j), v in self.table.items():
            rows[j][i] = dict(v.coeffs)
        return DiffOp(self.alg, rows)

    def __eq__(self, other):
        return isinstance(other, PvaSpec) and self.alg is other.alg and self.table == other.table

    def __repr__(self):
        items = ", ".join(f"{{{self.alg.gens[i]},{self.alg.gens[j]}}} = {v}" for (i, j), v in sorted(self.table.items()))
        return f"PvaSpec({self.name}: {items})"


def from_operator(H: DiffOp, name="H") -> PvaSpec:
    n = H.rows
    table = {}
    for i in range(n):
        for j in range(n):
            if H.entries[j][i]:
                table[(i, j)] = LambdaPoly(H.alg, H.entries[j][i])
    return PvaSpec(H.alg, table, name)


def _neg_shift(p: int, f: DiffPoly) -> LambdaPoly:
    """(-lambda - D)^p f."""
    y = shift_apply(p, LambdaPoly.const(f))
    return -y if p % 2 else y


def apply_entry(entry: LambdaPoly, y: LambdaPoly) -> LambdaPoly:
    """{u_i_{lambda+D} u_j}-> y: substitute lambda+D into the entry, acting on y."""
    out = LambdaPoly.zero(y.alg)
    for k, b in entry.coeffs.items():
        out = out + shift_apply(k, y) * b
    return out


def master_bracket(f: DiffPoly, g: DiffPoly, S: PvaSpec) -> LambdaPoly:
    """{f_lambda g} by the Master Formula."""
    alg = S.alg
    fvars = sorted(f.variables())
    gvars = sorted(g.variables())
    if not fvars or not gvars:
        return LambdaPoly.zero(alg)
    # Y_i = sum_p (-lambda-D)^p df/du_i^(p)
    Y = {}
    for (i, p) in fvars:
        t = _neg_shift(p, f.partial(i, p))
        Y[i] = Y[i] + t if i in Y else t
    gens_g = sorted({j for j, _ in gvars})
    W = {}
    for j in gens_g:
        acc = LambdaPoly.zero(alg)
        for i, y in Y.items():
            e = S.table.get((i, j))
            if e:
                acc = acc + apply_entry(e, y)
        W[j] = acc
    out = LambdaPoly.zero(alg)
    for (j, q) in gvars:
        w = W[j]
        if not w:
            continue
        out = out + shift_apply(q, w) * g.partial(j, q)
    return out


def functional_bracket(F, G, S: PvaSpec) -> FunctionalClass:
    """{int f, int g} = int sum_ij (dg/du_j) {u_i_D u_j}-> (df/du_i)."""
    f = F.density if isinstance(F, FunctionalClass) else F
    g = G.density if isinstance(G, FunctionalClass) else G
    df = variational_derivative(f)
    dg = variational_derivative(g)
    return FunctionalClass(pairing_density(df, dg, S))


def pairing_density(df, dg, S: PvaSpec) -> DiffPoly:
    acc = S.alg.zero()
    for (i, j), e in S.table.items():
        if not df[i] or not dg[j]:
            continue
        h = S.alg.zero()
        for k, b in e.coeffs.items():
            h = h + b * df[i].D(k)
        acc = acc + dg[j] * h
    return acc


def hamiltonian_vector(h, S: PvaSpec) -> list:
    """du_j/dt = {int h, u_j} = sum_i {u_i_D u_j}-> dh/du_i."""
    f = h.density if isinstance(h, FunctionalClass) else h
    return S.poisson_structure().apply(variational_derivative(f))


# -- checkers -----------------------------------------------------------------


def substitute_neg(entry: LambdaPoly) -> LambdaPoly:
    """entry(-lambda-D) with D acting on the coefficients."""
    out = LambdaPoly.zero(entry.alg)
    for k, b in entry.coeffs.items():
        t = shift_apply(k, LambdaPoly.const(b))
        out = out + (-t if k % 2 else t)
    return out


def check_skewsymmetry(S: PvaSpec) -> Report:
    rep = Report()
    g = S.alg.gens
    for i in range(S.rank):
        for j in range(i, S.rank):
            res = S.entry(i, j) + substitute_neg(S.entry(j, i))
            rep.add("skewsymmetry", (g[i], g[j]), res if res else "0", not res)
    return rep


class LMPoly:
    """Polynomial in (lambda, mu) with DiffPoly coefficients."""

    def __init__(self, alg):
        self.alg = alg
        self.c = {}

    def add(self, a, b, f):
        if not f:
            return
        k = (a, b)
        if k in self.c:
            s = self.c[k] + f
            if s:
                self.c[k] = s
            else:
                del self.c[k]
        else:
            self.c[k] = f

    def __sub__(self, other):
        out = LMPoly(self.alg)
        out.c = dict(self.c)
        for (a, b), f in other.c.items():
            out.add(a, b, -f)
        return out

    def __bool__(self):
        return bool(self.c)

    def __str__(self):
        from . import printing

        names = self.alg.gens
        items = []
        for (a, b) in sorted(self.c):
            for m, coef in self.c[(a, b)].sorted_terms():
                parts = [p for p in (printing.lambda_power("l", a), printing.lambda_power("m", b),
                                     printing.format_monomial(names, m)) if p]
                items.append((coef, "*".join(parts)))
        return printing.join_terms(items)


def jacobi_residual(S: PvaSpec, i, j, k) -> LMPoly:
    alg = S.alg
    ui, uj, uk = alg.var(i), alg.var(j), alg.var(k)
    t1 = LMPoly(alg)
    for b, c in S.entry(j, k).coeffs.items():
        for a, d in master_bracket(ui, c, S).coeffs.items():
            t1.add(a, b, d)
    t2 = LMPoly(alg)
    for a, c in S.entry(i, k).coeffs.items():
        for b, d in master_bracket(uj, c, S).coeffs.items():
            t2.add(a, b, d)
    t3 = LMPoly(alg)
    for a, c in S.entry(i, j).coeffs.items():
        for n, e in master_bracket(c, uk, S).coeffs.items():
            for r in range(n + 1):
                t3.add(a + r, n - r, e.scale(comb(n, r)))
    return t1 - t2 - t3


def check_jacobi(S: PvaSpec) -> Report:
    rep = Report()
    g = S.alg.gens
    n = S.rank
    for i in range(n):
        for j in range(n):
            for k in range(n):
                res = jacobi_residual(S, i, j, k)
                rep.add("jacobi", (g[i], g[j], g[k]), res if res else "0", not res)
    return rep


def check_pva(S: PvaSpec) -> Report:
    return check_skewsymmetry(S).extend(check_jacobi(S))


def pencil(SH: PvaSpec, SK: PvaSpec, t="t") -> PvaSpec:
    """B_H + t*B_K over the field extended by the fresh parameter t."""
    alg = SH.alg
    if SK.alg.gens != alg.gens:
        raise ValueError("brackets live on different generator sets")
    names = set(SH.alg.params) | set(SK.alg.params)
    while t in names:
        t = t + "_"
    params = list(SH.alg.params) + [p for p in SK.alg.params if p not in SH.alg.params] + [t]
    big = DiffAlgebra(alg.gens, params)
    return SH.to_algebra(big) + SK.to_algebra(big).scaled(big.field.param(t))


def check_compatibility(SH: PvaSpec, SK: PvaSpec) -> Report:
    P = pencil(SH, SK)
    rep = Report()
    for e in check_jacobi(P):
        rep.add("compatibility", e.indices, e.expr, e.passed)
    return rep


# -- builders -------------------------------------------------------------------


def gfz(gen="u") -> PvaSpec:
    alg = DiffAlgebra([gen])
    return PvaSpec(alg, {(0, 0): LambdaPoly(alg, {1: alg.one()})}, "K")


def magri_virasoro(c="c", alpha="alpha", gen="u") -> PvaSpec:
    """{u_lambda u} = (D + 2 lambda) u + c lambda^3 + alpha lambda.

    ``c`` and ``alpha`` are parameter names or rational numbers.
    """
    params = [p for p in (c, alpha) if isinstance(p, str)]
    alg = DiffAlgebra([gen], params)
    u = alg.var(0)
    cc = alg.param(c) if isinstance(c, str) else alg.const(c)
    aa = alg.param(alpha) if isinstance(alpha, str) else alg.const(alpha)
    return PvaSpec(alg, {(0, 0): LambdaPoly(alg, {0: u.D(), 1: 2 * u + aa, 3: cc})}, "H")


def affine(L, k="k", s=None, bracket=True, name="H") -> PvaSpec:
    """{a_lambda b} = [a,b] + lambda (a|b) k + (s|[a,b]).

    ``k`` is a parameter name or a number (0 drops the level term); ``s`` a
    vector or basis label or None.
    """
    params = list(L.field.params)
    if isinstance(k, str) and k not in params:
        params.append(k)
    alg = DiffAlgebra(L.labels, params)
    F = alg.field
    kk = F.param(k) if isinstance(k, str) else F(k)
    if s is not None and not isinstance(s, list):
        s = L.basis(s)
    table = {}
    for i in range(L.dim):
        for j in range(L.dim):
            br = L.bracket(L.basis(i), L.basis(j))
            c0 = alg.zero()
            if bracket:
                for m, c in enumerate(br):
                    if c:
                        c0 = c0 + alg.var(m).scale(F(c))
            if s is not None:
                c0 = c0 + alg.const(F(L.form(s, br)))
            c1 = alg.const(F(L.gram[i][j]) * kk)
            v = LambdaPoly(alg, {0: c0, 1: c1})
            if v:
                table[(i, j)] = v
    return PvaSpec(alg, table, name)


def affine_pair(L, s):
    """The compatible pair used by the homogeneous DS scheme:
    H = [a,b] + (a|b) lambda and K = (s|[a,b])."""
    H = affine(L, k=1, s=None, name="H")
    K = affine(L, k=0, s=s, bracket=False, name="K")
    return H, K
