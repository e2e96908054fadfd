"""The Lenard-Magri scheme for a compatible pair (H, K)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diffalg import DiffOp, DiffPoly
from . import linalg
from .pva import PvaSpec, functional_bracket
from .report import Report
from .varcalc import (FunctionalClass, NotClosed, closedness_defect, evol_bracket,
                      homotopy_integrate, is_total_derivative, variational_derivative)


class UnsupportedK(ValueError):
    pass


class NotInImage(ValueError):
    def __init__(self, obstruction):
        super().__init__(f"H xi is not in the image of K; obstruction: {obstruction}")
        self.obstruction = obstruction


def _constant_matrix(K: DiffOp, order):
    """Coefficients of D^order in K as a matrix of Coeff, or None if not constant."""
    F = K.alg.field
    M = []
    for row in K.entries:
        r = []
        for e in row:
            c = e.get(order)
            if c is None:
                r.append(F.zero)
            elif c.is_constant():
                r.append(c.constant_term())
            else:
                return None
        M.append(r)
    return M


def classify_k(K: DiffOp):
    """Return ("dd", D) for K = D.d with D constant invertible, or
    ("const", K0) for a constant invertible skew matrix."""
    orders = {k for row in K.entries for e in row for k in e}
    F = K.alg.field
    if orders == {1}:
        D = _constant_matrix(K, 1)
        if D is not None and linalg.rank(D, F) == K.rows:
            return "dd", D
    if orders == {0}:
        C = _constant_matrix(K, 0)
        if C is not None and linalg.rank(C, F) == K.rows:
            if all(C[i][j] == -C[j][i] for i in range(K.rows) for j in range(K.rows)):
                return "const", C
    raise UnsupportedK("K must be D*d with D constant invertible, or a constant invertible skew matrix")


def _operator(S) -> DiffOp:
    return S.poisson_structure() if isinstance(S, PvaSpec) else S


def seed_kernel(K) -> list:
    K = _operator(K)
    kind, _ = classify_k(K)
    alg = K.alg
    if kind == "const":
        return []
    return [[alg.one() if i == j else alg.zero() for i in range(alg.rank)] for j in range(alg.rank)]


def solve_k(K, g) -> list:
    """xi with K xi = g and zero kernel component."""
    K = _operator(K)
    kind, M = classify_k(K)
    F = K.alg.field
    alg = K.alg
    inv = linalg.invert(M, F)
    y = []
    for i in range(alg.rank):
        acc = alg.zero()
        for j in range(alg.rank):
            if inv[i][j]:
                acc = acc + g[j].scale(inv[i][j])
        y.append(acc)
    if kind == "const":
        return y
    xi = []
    for comp in y:
        w = is_total_derivative(comp)
        if w is None:
            obstruction = variational_derivative(comp)
            const = comp.constant_term()
            raise NotInImage(f"delta/delta u = {[str(o) for o in obstruction]}, constant = {const}")
        xi.append(w)
    return xi


def lm_step(H, K, xi) -> list:
    H = _operator(H)
    return solve_k(K, H.apply(list(xi)))


@dataclass
class Step:
    n: int
    xi: list
    h: FunctionalClass
    eq: list


@dataclass
class HierarchyState:
    H: PvaSpec
    K: PvaSpec
    steps: list = field(default_factory=list)

    def xi(self, n):
        return self.steps[n].xi

    def h(self, n):
        return self.steps[n].h

    def eq(self, n):
        return self.steps[n].eq


def lm_run(H: PvaSpec, K: PvaSpec, xi0, N: int) -> HierarchyState:
    """Steps n = 0..N with K xi_{n+1} = H xi_n, h_n from homotopy, eq_n = H xi_n."""
    Hop, Kop = _operator(H), _operator(K)
    xi0 = [xi0] if isinstance(xi0, DiffPoly) else list(xi0)
    if any(Kop.apply(xi0)):
        raise ValueError("seed is not in the kernel of K")
    state = HierarchyState(H, K)
    xi = xi0
    for n in range(N + 1):
        if n:
            xi = lm_step(Hop, Kop, xi)
        defect = closedness_defect(xi)
        if not defect.is_zero():
            raise NotClosed(defect)
        # keep the homotopy density as computed; equality is modulo D anyway
        h = FunctionalClass(homotopy_integrate(xi, check=False), reduce=False)
        state.steps.append(Step(n, xi, h, Hop.apply(xi)))
    return state


def verify(state: HierarchyState) -> Report:
    """Lenard-Magri relation and delta h_n = xi_n at every step."""
    rep = Report()
    Hop, Kop = state.H.poisson_structure(), state.K.poisson_structure()
    for s in state.steps:
        dh = variational_derivative(s.h.density)
        rep.add("density", (s.n,), s.h, dh == s.xi)
        if s.n + 1 < len(state.steps):
            r = [a - b for a, b in zip(Kop.apply(state.steps[s.n + 1].xi), Hop.apply(s.xi))]
            rep.add("lenard-magri", (s.n,), ", ".join(map(str, r)) if any(r) else "0", not any(r))
    return rep


def involution_table(state: HierarchyState) -> dict:
    """(name, m, n) -> {int h_m, int h_n} under H and K."""
    out = {}
    for S in (state.H, state.K):
        for a in state.steps:
            for b in state.steps:
                out[(S.name, a.n, b.n)] = functional_bracket(a.h, b.h, S)
    return out


def check_involution(state: HierarchyState) -> Report:
    rep = Report()
    for (name, m, n), v in involution_table(state).items():
        rep.add(f"involution-{name}", (m, n), v if not v.is_zero() else "0", v.is_zero())
    return rep


def check_commuting_flows(state: HierarchyState, upto=None) -> Report:
    rep = Report()
    steps = state.steps if upto is None else state.steps[: upto + 1]
    for a in steps:
        for b in steps:
            if a.n < b.n:
                r = evol_bracket(a.eq, b.eq)
                rep.add("commute", (a.n, b.n), ", ".join(map(str, r)) if any(r) else "0", not any(r))
    return rep


def independence_check(state: HierarchyState) -> Report:
    rep = Report()
    for s in state.steps:
        rep.add("order", (s.n,), str(max(e.order() for e in s.eq)), True)
    eqs = [s.eq for s in state.steps]
    monos = sorted({(i, m) for eq in eqs for i, e in enumerate(eq) for m in e.terms}, key=repr)
    F = state.H.alg.field
    M = [[eq[i].terms.get(m, F.zero) for (i, m) in monos] for eq in eqs]
    r = linalg.rank(M, F) if monos else 0
    rep.add("independent", tuple(range(len(eqs))), f"rank {r}", r == len(eqs))
    return rep
