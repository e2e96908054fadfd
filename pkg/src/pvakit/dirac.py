"""Truncated Laurent symbols in 1/lambda and Dirac reduction by constraints.

A symbol keeps the coefficients of lambda^k for k >= -floor.  Composition
follows the operator rule (A o B)(lambda) = sum_k a_k (lambda + D)^k B(lambda)
with coefficients to the left of the lambda powers.
"""

from __future__ import annotations

from fractions import Fraction

from .diffalg import DiffAlgebra, DiffPoly, LambdaPoly
from . import linalg, printing
from .pva import PvaSpec, master_bracket
from .report import Report

DEFAULT_FLOOR = 6


class SingularSymbol(ValueError):
    pass


def gbinom(n: int, j: int) -> Fraction:
    """Binomial coefficient n choose j for any integer n."""
    out = Fraction(1)
    for r in range(j):
        out = out * (n - r) / (r + 1)
    return out


def binom_expand(n: int, M: int) -> dict:
    """(lambda + D)^n as {(lambda power, D power): coefficient}, powers >= -M."""
    if M < 0:
        raise ValueError("floor must be non-negative")
    out = {}
    j = 0
    while n - j >= -M:
        c = gbinom(n, j)
        if n >= 0 and j > n:
            break
        if c:
            out[(n - j, j)] = c
        j += 1
    return out


class LaurentSymbol:
    """sum_{k >= -floor} c_k lambda^k with DiffPoly coefficients."""

    __slots__ = ("alg", "floor", "coeffs")

    def __init__(self, alg, coeffs, floor=DEFAULT_FLOOR):
        self.alg = alg
        self.floor = floor
        self.coeffs = {k: v for k, v in coeffs.items() if v and k >= -floor}

    @classmethod
    def from_lambda(cls, p: LambdaPoly, floor=DEFAULT_FLOOR):
        return cls(p.alg, dict(p.coeffs), floor)

    @classmethod
    def zero(cls, alg, floor=DEFAULT_FLOOR):
        return cls(alg, {}, floor)

    @classmethod
    def scalar(cls, alg, c, k=0, floor=DEFAULT_FLOOR):
        return cls(alg, {k: alg.const(c)}, floor)

    def degree(self):
        return max(self.coeffs, default=None)

    def truncate(self, floor):
        return LaurentSymbol(self.alg, self.coeffs, floor)

    def __getitem__(self, k):
        return self.coeffs.get(k, self.alg.zero())

    def __add__(self, o):
        c = dict(self.coeffs)
        for k, v in o.coeffs.items():
            c[k] = c[k] + v if k in c else v
        return LaurentSymbol(self.alg, c, min(self.floor, o.floor))

    def __neg__(self):
        return LaurentSymbol(self.alg, {k: -v for k, v in self.coeffs.items()}, self.floor)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        return LaurentSymbol(self.alg, {k: v.scale(c) for k, v in self.coeffs.items()}, self.floor)

    def mul_poly(self, f: DiffPoly):
        """Multiply every coefficient on the left by f."""
        return LaurentSymbol(self.alg, {k: f * v for k, v in self.coeffs.items()}, self.floor)

    def compose(self, o: "LaurentSymbol", floor=None) -> "LaurentSymbol":
        floor = min(self.floor, o.floor) if floor is None else floor
        out = {}
        for k, a in self.coeffs.items():
            for m, b in o.coeffs.items():
                j, db = 0, b
                while k + m - j >= -floor:
                    if k >= 0 and j > k:
                        break
                    if j:
                        db = db.D()
                        if not db:
                            break
                    c = gbinom(k, j)
                    if c:
                        t = a * db.scale(c)
                        p = k + m - j
                        out[p] = out[p] + t if p in out else t
                    j += 1
        return LaurentSymbol(self.alg, out, floor)

    def substitute_neg(self) -> "LaurentSymbol":
        """sum_k (-lambda - D)^k c_k with D acting on c_k."""
        out = {}
        for k, c in self.coeffs.items():
            sign = -1 if k % 2 else 1
            j, dc = 0, c
            while k - j >= -self.floor:
                if k >= 0 and j > k:
                    break
                if j:
                    dc = dc.D()
                    if not dc:
                        break
                t = dc.scale(gbinom(k, j) * sign)
                p = k - j
                out[p] = out[p] + t if p in out else t
                j += 1
        return LaurentSymbol(self.alg, out, self.floor)

    def local_part(self) -> LambdaPoly:
        return LambdaPoly(self.alg, {k: v for k, v in self.coeffs.items() if k >= 0})

    def nonlocal_part(self) -> "LaurentSymbol":
        return LaurentSymbol(self.alg, {k: v for k, v in self.coeffs.items() if k < 0}, self.floor)

    def map(self, fn) -> "LaurentSymbol":
        return LaurentSymbol(self.alg, {k: fn(v) for k, v in self.coeffs.items()}, self.floor)

    def to_algebra(self, alg) -> "LaurentSymbol":
        return LaurentSymbol(alg, {k: v.to_algebra(alg) for k, v in self.coeffs.items()}, self.floor)

    def __eq__(self, o):
        if not isinstance(o, LaurentSymbol):
            return NotImplemented
        f = min(self.floor, o.floor)
        a = {k: v for k, v in self.coeffs.items() if k >= -f}
        b = {k: v for k, v in o.coeffs.items() if k >= -f}
        return a == b

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def format(self, sym="l"):
        names = self.alg.gens
        items = []
        for k in sorted(self.coeffs, reverse=True):
            for m, c in self.coeffs[k].sorted_terms():
                lp = "" if k == 0 else (sym if k == 1 else f"{sym}^({k})" if k < 0 else f"{sym}^{k}")
                parts = [p for p in (lp, printing.format_monomial(names, m)) if p]
                items.append((c, "*".join(parts)))
        return printing.join_terms(items)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"LaurentSymbol({self}; floor {self.floor})"


def inverse_shape(f: DiffPoly, g: DiffPoly, floor) -> LaurentSymbol:
    """The symbol of f D^-1 o g, namely f (lambda + D)^-1 g."""
    a = LaurentSymbol(f.alg, {-1: f}, floor)
    b = LaurentSymbol(g.alg, {0: g}, floor)
    return a.compose(b, floor)


# -- matrices of symbols -----------------------------------------------------


def mat_compose(A, B, floor):
    n, m, p = len(A), len(B), len(B[0])
    alg = A[0][0].alg
    out = []
    for i in range(n):
        row = []
        for k in range(p):
            acc = LaurentSymbol.zero(alg, floor)
            for j in range(m):
                if A[i][j] and B[j][k]:
                    acc = acc + A[i][j].compose(B[j][k], floor)
            row.append(acc.truncate(floor))
        out.append(row)
    return out


def mat_identity(alg, n, floor):
    return [[LaurentSymbol.scalar(alg, 1, 0, floor) if i == j else LaurentSymbol.zero(alg, floor)
             for j in range(n)] for i in range(n)]


def symbol_invert(C, M=DEFAULT_FLOOR):
    """Two-sided inverse of a square matrix of symbols, exact down to lambda^-M.

    The top-degree coefficient matrix must be constant and invertible.
    """
    n = len(C)
    if n == 0:
        return []
    alg = C[0][0].alg
    F = alg.field
    degs = [e.degree() for row in C for e in row if e.degree() is not None]
    if not degs:
        raise SingularSymbol("constraint matrix is zero")
    d = max(degs)
    lead = []
    for row in C:
        r = []
        for e in row:
            c = e[d]
            if not c.is_constant():
                raise SingularSymbol(f"leading coefficient {c} is not constant")
            r.append(c.constant_term())
        lead.append(r)
    try:
        L0 = linalg.invert(lead, F)
    except linalg.SingularMatrix:
        raise SingularSymbol("leading coefficient matrix is singular") from None
    W = M + 2 * max(d, 0) + 2
    low = min(e.floor for row in C for e in row)
    Cw = [[LaurentSymbol(alg, e.coeffs, max(W, low)) for e in row] for row in C]
    X0 = [[LaurentSymbol(alg, {-d: alg.const(L0[i][j])}, W) for j in range(n)] for i in range(n)]
    E = mat_compose(Cw, X0, W)
    for i in range(n):
        E[i][i] = E[i][i] - LaurentSymbol.scalar(alg, 1, 0, W)
    # (I + E)^-1 = sum (-E)^r, E of order <= -1
    negE = [[-e for e in row] for row in E]
    total = mat_identity(alg, n, W)
    power = mat_identity(alg, n, W)
    for _ in range(W + d + 1):
        power = mat_compose(power, negE, W)
        if not any(e for row in power for e in row):
            break
        total = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(total, power)]
    X = mat_compose(X0, total, W)
    return [[e.truncate(M) for e in row] for row in X]


# -- constraints and reduction -------------------------------------------------


class ConstraintSet:
    """Constraints theta_1..theta_m; C[a][b] = {theta_b lambda theta_a}."""

    def __init__(self, thetas):
        self.thetas = list(thetas)

    def __len__(self):
        return len(self.thetas)

    def matrix(self, S: PvaSpec, floor=DEFAULT_FLOOR):
        th = self.thetas
        return [[LaurentSymbol.from_lambda(master_bracket(th[b], th[a], S), floor)
                 for b in range(len(th))] for a in range(len(th))]

    def generator_indices(self):
        """Indices of constraints that are a nonzero multiple of one generator."""
        out = []
        for t in self.thetas:
            if len(t.terms) == 1:
                (m, _), = t.terms.items()
                if len(m) == 1 and m[0][1] == 1 and m[0][0][1] == 0:
                    out.append(m[0][0][0])
                    continue
            out.append(None)
        return out


class DiracResult:
    def __init__(self, S, constraints, floor, full, reduced, quotient_alg, Cinv):
        self.S = S
        self.constraints = constraints
        self.floor = floor
        self.full = full
        self.reduced = reduced
        self.quotient_alg = quotient_alg
        self.Cinv = Cinv

    def entry(self, a, b):
        alg = self.quotient_alg
        i = alg.index(a) if isinstance(a, str) else a
        j = alg.index(b) if isinstance(b, str) else b
        return self.reduced.get((i, j)) or LaurentSymbol.zero(alg, self.floor)

    def to_pva(self, name=None) -> PvaSpec:
        """The reduced table as a local PvaSpec, when no negative powers remain."""
        table = {}
        for k, v in self.reduced.items():
            if v.nonlocal_part():
                raise ValueError("reduced bracket is non-local")
            table[k] = v.local_part()
        return PvaSpec(self.quotient_alg, table, name or self.S.name)


def _central(S, constraints):
    alg = S.alg
    for t in constraints.thetas:
        for j in range(alg.rank):
            if master_bracket(t, alg.var(j), S):
                return False
    return True


def dirac_bracket(S, constraints, Cinv, f, g, floor, work):
    """{f_lambda g}^D through lambda^-floor."""
    base = LaurentSymbol.from_lambda(master_bracket(f, g, S), work)
    if Cinv is None:
        return base.truncate(floor)
    th = constraints.thetas
    corr = LaurentSymbol.zero(S.alg, work)
    right = [LaurentSymbol.from_lambda(master_bracket(f, t, S), work) for t in th]
    for b, tb in enumerate(th):
        left = LaurentSymbol.from_lambda(master_bracket(tb, g, S), work)
        if not left:
            continue
        for a in range(len(th)):
            if not right[a] or not Cinv[b][a]:
                continue
            corr = corr + left.compose(Cinv[b][a].compose(right[a], work), work)
    return (base - corr).truncate(floor)


def _pad(S, constraints):
    th = constraints.thetas
    alg = S.alg
    d = 0
    for t in th:
        for j in range(alg.rank):
            for p in (master_bracket(t, alg.var(j), S), master_bracket(alg.var(j), t, S)):
                d = max(d, p.degree())
    return 2 * d + 4


def dirac_reduce(S: PvaSpec, constraints, M=DEFAULT_FLOOR) -> DiracResult:
    if not isinstance(constraints, ConstraintSet):
        constraints = ConstraintSet(constraints)
    alg = S.alg
    Cinv = None
    work = M
    if len(constraints) and not _central(S, constraints):
        work = M + _pad(S, constraints)
        Cinv = symbol_invert(constraints.matrix(S, work), work)
    full = {}
    for i in range(alg.rank):
        for j in range(alg.rank):
            v = dirac_bracket(S, constraints, Cinv, alg.var(i), alg.var(j), M, work)
            if v:
                full[(i, j)] = v
    gens = constraints.generator_indices()
    drop = {i for i in gens if i is not None}
    keep = [i for i in range(alg.rank) if i not in drop]
    qalg = DiffAlgebra([alg.gens[i] for i in keep], alg.params)
    zero = {i: alg.zero() for i in drop}
    reduced = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            v = full.get((i, j))
            if v is None:
                continue
            w = v.map(lambda c: c.substitute(zero)).map(lambda c: _restrict(c, qalg))
            if w:
                reduced[(a, b)] = w.truncate(M)
                reduced[(a, b)].alg = qalg
    return DiracResult(S, constraints, M, full, reduced, qalg, Cinv)


def _restrict(c: DiffPoly, qalg: DiffAlgebra) -> DiffPoly:
    names = c.alg.gens
    t = {}
    for m, v in c.terms.items():
        nm = tuple(sorted(((qalg.index(names[i]), n), e) for (i, n), e in m))
        t[nm] = v
    return DiffPoly(qalg, t)


# -- checks ------------------------------------------------------------------------


def check_centrality(R: DiracResult) -> Report:
    rep = Report()
    S = R.S
    alg = S.alg
    work = R.floor + (_pad(S, R.constraints) if R.Cinv is not None else 0)
    Cinv = None
    if R.Cinv is not None:
        Cinv = symbol_invert(R.constraints.matrix(S, work), work)
    for a, t in enumerate(R.constraints.thetas):
        for j in range(alg.rank):
            g = alg.var(j)
            for name, (x, y) in (("left", (t, g)), ("right", (g, t))):
                v = dirac_bracket(S, R.constraints, Cinv, x, y, R.floor, work)
                rep.add("centrality", (str(t), alg.gens[j], name), v if v else "0", not v)
    return rep


def check_inverse(C, Cinv, floor) -> Report:
    rep = Report()
    n = len(C)
    alg = C[0][0].alg if n else None
    for side, P in (("right", mat_compose(C, Cinv, floor)), ("left", mat_compose(Cinv, C, floor))):
        for i in range(n):
            for j in range(n):
                want = LaurentSymbol.scalar(alg, 1, 0, floor) if i == j else LaurentSymbol.zero(alg, floor)
                r = P[i][j] - want
                rep.add(f"inverse-{side}", (i, j), r if r else "0", not r)
    return rep


def check_coherence(S, constraints, M=DEFAULT_FLOOR, extra=2) -> Report:
    """Reducing at floor M + extra and truncating reproduces floor M."""
    rep = Report()
    a = dirac_reduce(S, constraints, M)
    b = dirac_reduce(S, constraints, M + extra)
    keys = sorted(set(a.reduced) | set(b.reduced))
    g = a.quotient_alg.gens
    for k in keys:
        x = a.entry(*k)
        y = b.entry(*k).truncate(M)
        rep.add("coherence", (g[k[0]], g[k[1]], M, M + extra), (x - y) if x != y else "0", x == y)
    return rep


def check_reduced_skew(R: DiracResult) -> Report:
    rep = Report()
    alg = R.quotient_alg
    for i in range(alg.rank):
        for j in range(i, alg.rank):
            r = R.entry(i, j) + R.entry(j, i).substitute_neg()
            rep.add("reduced-skew", (alg.gens[i], alg.gens[j]), r if r else "0", not r)
    return rep


def inverse_coefficient(entry: LaurentSymbol, f: DiffPoly, g: DiffPoly):
    """gamma with nonlocal(entry) == gamma * f (lambda + D)^-1 g, or None."""
    nl = entry.nonlocal_part()
    shape = inverse_shape(f, g, entry.floor)
    if not nl:
        return entry.alg.field.zero
    lead = shape[-1]
    got = nl[-1]
    if len(lead.terms) != 1:
        return None
    (m, c), = lead.terms.items()
    gamma = got.terms.get(m)
    if gamma is None:
        return None
    gamma = gamma / c
    return gamma if nl == shape.scale(gamma) else None


# -- the NLS example ---------------------------------------------------------------


def lie_from_affine(H: PvaSpec, roots=None):
    """Read g back from {a_l b} = [a,b] + (a|b) l."""
    from .liealg import LieAlgebraData

    alg = H.alg
    brackets, form = {}, {}
    for (i, j), v in H.table.items():
        if set(v.coeffs) - {0, 1}:
            raise ValueError("not an affine bracket")
        vec = {}
        for m, c in v[0].terms.items():
            if len(m) != 1 or m[0][1] != 1 or m[0][0][1] != 0:
                raise ValueError("not an affine bracket: nonlinear degree-0 part")
            vec[m[0][0][0]] = c
        if vec:
            brackets[(i, j)] = vec
        if v[1]:
            if not v[1].is_constant():
                raise ValueError("not an affine bracket: non-constant form")
            form[(i, j)] = v[1].constant_term()
    return LieAlgebraData(alg.gens, brackets, form, alg.params, roots or {})


def nls_demo(kappa="kappa", M=DEFAULT_FLOOR, H=None, K=None, theta=None):
    """Dirac-reduce the affine pair on sl2 by theta = s and specialize the t2 flow.

    H, K and theta default to the built-in sl2 data; a declaration file can
    supply its own.  Returns a dict with the reduced results, the NLS
    equations, kappa_eff and a Report.
    """
    from .dshier import ds_densities, ds_gauge
    from .liealg import sl2_kappa
    from .pva import affine_pair, hamiltonian_vector
    from .varcalc import variational_derivative

    if H is None:
        L = sl2_kappa(kappa)
        H, K = affine_pair(L, "s")
        theta = [H.alg.gen("s")]
    else:
        L = lie_from_affine(H)
    alg = H.alg
    RH = dirac_reduce(H, theta, M)
    RK = dirac_reduce(K, theta, M)
    (s_idx,) = [i for i in ConstraintSet(theta).generator_indices()]
    s_name = alg.gens[s_idx]
    rep = Report()
    rep.extend(check_centrality(RH))
    rep.extend(check_centrality(RK))
    rep.extend(check_reduced_skew(RH))
    rep.extend(check_reduced_skew(RK))

    q = RH.quotient_alg
    u, v = q.var(0), q.var(1)
    F = q.field

    # K: constant invertible skew matrix
    Kloc = all(not e.nonlocal_part() and all(c.is_constant() for c in e.coeffs.values())
               and set(e.coeffs) <= {0} for e in RK.reduced.values())
    Kmat = [[RK.entry(i, j)[0].constant_term() for j in range(2)] for i in range(2)]
    skew = all(Kmat[i][j] == -Kmat[j][i] for i in range(2) for j in range(2))
    inv = linalg.rank(Kmat, F) == 2
    rep.add("reduced-K", tuple(q.gens), "; ".join(str(RK.entry(i, j)) for i in range(2) for j in range(2)),
            Kloc and skew and inv)

    # H: {u_l u} ~ u (l+D)^-1 u, {u_l v} = l + gamma v (l+D)^-1 u, ...
    pairs = {(0, 0): (u, u), (0, 1): (v, u), (1, 0): (u, v), (1, 1): (v, v)}
    gammas = {}
    for (i, j), (f, g) in pairs.items():
        e = RH.entry(i, j)
        gm = inverse_coefficient(e, f, g)
        want_local = LambdaPoly(q, {1: q.one()}) if i != j else LambdaPoly.zero(q)
        ok = gm is not None and e.local_part() == want_local
        gammas[(i, j)] = gm
        rep.add("reduced-H-shape", (q.gens[i], q.gens[j]), e, ok)
    g00 = gammas[(0, 0)]
    coherent = (None not in gammas.values() and g00 and gammas[(1, 1)] == g00
                and gammas[(0, 1)] == -g00 and gammas[(1, 0)] == -g00)
    rep.add("reduced-H-coefficients", tuple(q.gens),
            ", ".join(f"{k}: {v}" for k, v in sorted(gammas.items())), bool(coherent))

    # the t2 flow with theta = 0
    R = ds_gauge(L, s_name, N=3)
    hs = ds_densities(R, s_name)
    eq2 = hamiltonian_vector(hs[2], H)
    zero = {s_idx: alg.zero()}
    ea, fa = [alg.index(g) for g in q.gens]
    du = _restrict(eq2[ea].substitute(zero), q)
    dv = _restrict(eq2[fa].substitute(zero), q)
    rest = eq2[s_idx].substitute(zero)
    u2v = u * u * v
    kappa_eff = du.terms.get(next(iter(u2v.terms)), F.zero)
    want_u = u.D(2) + u2v.scale(kappa_eff)
    want_v = -v.D(2) - (u * v * v).scale(kappa_eff)
    rep.add("nls", ("u",), du, du == want_u and bool(kappa_eff))
    rep.add("nls", ("v",), dv, dv == want_v and bool(kappa_eff))
    rep.add("nls", ("s",), rest if rest else "0", not rest)

    # the same flow from the reduced K and the restricted next density
    Kq = RK.to_pva("K")
    h3 = _restrict(hs[3].density.substitute(zero), q)
    flow = Kq.poisson_structure().apply(variational_derivative(h3))
    okK = flow[0] == du and flow[1] == dv
    rep.add("nls-hamiltonian-K", ("h3",), f"{flow[0]}, {flow[1]}", okK)
    lin = du.substitute({1: q.zero()})
    rep.add("nls-linear-limit", ("v=0",), lin, lin == u.D(2))
    return {
        "H": RH, "K": RK, "equations": (du, dv), "kappa_eff": kappa_eff,
        "gammas": gammas, "report": rep,
    }
