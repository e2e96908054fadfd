"""Variational calculus on P_l: Euler operator, Frechet derivative,
exactness tests, homotopy integration, evolutionary vector fields and
local functionals modulo total derivatives."""

from __future__ import annotations

from .diffalg import DiffAlgebra, DiffOp, DiffPoly, mono_degree


def _vec(F) -> list:
    return [F] if isinstance(F, DiffPoly) else list(F)


class NotClosed(ValueError):
    def __init__(self, defect: DiffOp):
        super().__init__(f"characteristic is not closed; D_F - D_F* = {defect}")
        self.defect = defect


def variational_derivative(f: DiffPoly) -> list:
    """delta f / delta u_i = sum_n (-D)^n df/du_i^(n), one entry per generator."""
    alg = f.alg
    orders = {}
    for (i, n) in f.variables():
        orders[i] = max(orders.get(i, 0), n)
    out = []
    for i in range(alg.rank):
        acc = alg.zero()
        # Horner in -D: p_0 - D(p_1 - D(p_2 - ...))
        top = orders.get(i, -1)
        for n in range(top, -1, -1):
            acc = f.partial(i, n) - acc.D()
        out.append(acc)
    return out


def frechet_derivative(F) -> DiffOp:
    F = _vec(F)
    alg = F[0].alg
    rows = []
    for Fi in F:
        row = [{} for _ in range(alg.rank)]
        for (j, n) in Fi.variables():
            row[j][n] = Fi.partial(j, n)
        rows.append(row)
    return DiffOp(alg, rows)


def closedness_defect(F) -> DiffOp:
    DF = frechet_derivative(F)
    return DF - DF.adjoint()


def is_closed(F) -> bool:
    """Helmholtz criterion: the Frechet derivative is selfadjoint."""
    return closedness_defect(F).is_zero()


def homotopy_integrate(xi, check: bool = True) -> DiffPoly:
    """A density h with delta h / delta u = xi.

    Uses h = Delta^{-1}(u . xi), dividing each monomial by its degree.  A
    constant component c of xi lands on the density c*u_i automatically.
    """
    xi = _vec(xi)
    alg = xi[0].alg
    if len(xi) != alg.rank:
        raise ValueError(f"characteristic has {len(xi)} entries, algebra has {alg.rank} generators")
    if check:
        defect = closedness_defect(xi)
        if not defect.is_zero():
            raise NotClosed(defect)
    w = alg.zero()
    for i, x in enumerate(xi):
        w = w + alg.var(i) * x
    return DiffPoly(alg, {m: c / mono_degree(m) for m, c in w.terms.items()})


def is_total_derivative(f: DiffPoly):
    """Return g with D(g) == f and zero constant term, or None."""
    if f.constant_term():
        return None
    if any(variational_derivative(f)):
        return None
    alg = f.alg
    g = alg.zero()
    rest = f
    guard = 0
    while rest:
        guard += 1
        if guard > 10000:
            raise RuntimeError("total-derivative elimination did not terminate")
        i, N = rest.max_variable()
        if N == 0:
            return None
        G = rest.partial(i, N).integrate_var(i, N - 1)
        g = g + G
        rest = rest - G.D()
    return g


def evol_apply(P, f: DiffPoly) -> DiffPoly:
    """X_P f = sum (D^n P_i) df/du_i^(n)."""
    P = _vec(P)
    acc = f.alg.zero()
    derivs = {}
    for (i, n) in sorted(f.variables()):
        key = (i, n)
        if key not in derivs:
            derivs[key] = P[i].D(n)
        acc = acc + derivs[key] * f.partial(i, n)
    return acc


def evol_bracket(F, G) -> list:
    F, G = _vec(F), _vec(G)
    return [evol_apply(F, g) - evol_apply(G, f) for f, g in zip(F, G)]


def pairing(F, G) -> "FunctionalClass":
    """The local functional of F . G."""
    F, G = _vec(F), _vec(G)
    acc = F[0].alg.zero()
    for a, b in zip(F, G):
        acc = acc + a * b
    return FunctionalClass(acc)


# -- local functionals -------------------------------------------------------


def _reduce_density(f: DiffPoly) -> DiffPoly:
    """Integrate by parts until no monomial has a reducible linear top variable.

    A monomial B*u_i^(N) (N >= 1, u_i^(N) to the first power) is reducible
    when B has order < N and contains no u_j^(N-1) with j > i.  It is replaced
    by -(D(G) - B*u_i^(N)) where G integrates B in u_i^(N-1).  For one
    generator the result is the unique representative in which every top
    variable occurs at least squared.
    """
    alg = f.alg
    out = f
    for _ in range(100000):
        pick = None
        for m in out.terms:
            if not m:
                continue
            N = max(n for (_, n), _ in m)
            if N == 0:
                continue
            tops = [(i, e) for (i, n), e in m if n == N]
            if len(tops) != 1 or tops[0][1] != 1:
                continue
            i = tops[0][0]
            if any(n == N - 1 and j > i for (j, n), _ in m):
                continue
            key = (N, i, m)
            if pick is None or key > pick:
                pick = key
        if pick is None:
            return out
        N, i, m = pick
        c = out.terms[m]
        B = DiffPoly(alg, {tuple(p for p in m if p[0] != (i, N)): c})
        G = B.integrate_var(i, N - 1)
        term = DiffPoly(alg, {m: c})
        out = out - term - (G.D() - term)
    raise RuntimeError("density reduction did not terminate")


class FunctionalClass:
    """A local functional: a density modulo total derivatives."""

    __slots__ = ("density", "_key")

    def __init__(self, f: DiffPoly, reduce: bool = True):
        self.density = _reduce_density(f) if reduce else f
        self._key = None

    @property
    def alg(self) -> DiffAlgebra:
        return self.density.alg

    def key(self):
        if self._key is None:
            self._key = (tuple(variational_derivative(self.density)), self.density.constant_term())
        return self._key

    def is_zero(self) -> bool:
        d, c = self.key()
        return not c and not any(d)

    def __eq__(self, other):
        if isinstance(other, DiffPoly):
            other = FunctionalClass(other, reduce=False)
        if not isinstance(other, FunctionalClass):
            return NotImplemented
        return FunctionalClass(self.density - other.density, reduce=False).is_zero()

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        return FunctionalClass(self.density + _density(other))

    def __sub__(self, other):
        return FunctionalClass(self.density - _density(other))

    def __neg__(self):
        return FunctionalClass(-self.density, reduce=False)

    def __mul__(self, c):
        return FunctionalClass(self.density * c, reduce=False)

    __rmul__ = __mul__

    def variational_derivative(self):
        return list(self.key()[0])

    def __str__(self):
        return str(self.density)

    def __repr__(self):
        return f"FunctionalClass({self.density})"


def _density(x):
    return x.density if isinstance(x, FunctionalClass) else x
