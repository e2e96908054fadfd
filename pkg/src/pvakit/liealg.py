"""Finite-dimensional Lie algebras given by structure constants, with an
invariant symmetric form, dual bases, the adjoint Casimir and the
centralizer splitting g = h + h^perp for a semisimple element s."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

from .coeff import Coeff, CoeffField
from . import linalg
from .report import Report


class LieError(ValueError):
    pass


class LieAlgebraData:
    """Basis labels, structure constants [x_i, x_j] = sum_k c_ij^k x_k and a form.

    Vectors are lists of Coeff of length ``dim``.
    """

    def __init__(self, labels, brackets, form, params=(), roots=None, name="g"):
        self.labels = tuple(labels)
        self.field = CoeffField(tuple(params))
        self.name = name
        n = len(self.labels)
        F = self.field
        self.consts = [[[F.zero] * n for _ in range(n)] for _ in range(n)]
        for (i, j), vec in brackets.items():
            i, j = self._idx(i), self._idx(j)
            for k, c in _items(vec):
                self.consts[i][j][self._idx(k)] = F(c)
        self.gram = [[F.zero] * n for _ in range(n)]
        for (i, j), c in form.items():
            self.gram[self._idx(i)][self._idx(j)] = F(c)
        # roots: name -> (positive root vector, negative root vector)
        self.roots = dict(roots or {})

    @property
    def dim(self):
        return len(self.labels)

    def _idx(self, x):
        if isinstance(x, int):
            return x
        try:
            return self.labels.index(x)
        except ValueError:
            raise LieError(f"unknown basis element {x!r}") from None

    def basis(self, x) -> list:
        v = [self.field.zero] * self.dim
        v[self._idx(x)] = self.field.one
        return v

    def vector(self, mapping) -> list:
        v = [self.field.zero] * self.dim
        for k, c in _items(mapping):
            v[self._idx(k)] = v[self._idx(k)] + self.field(c)
        return v

    def bracket(self, x, y) -> list:
        n = self.dim
        out = [self.field.zero] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                c = x[i] * y[j]
                row = self.consts[i][j]
                for k in range(n):
                    if row[k]:
                        out[k] = out[k] + c * row[k]
        return out

    def form(self, x, y) -> Coeff:
        acc = self.field.zero
        for i in range(self.dim):
            if not x[i]:
                continue
            for j in range(self.dim):
                if y[j] and self.gram[i][j]:
                    acc = acc + x[i] * y[j] * self.gram[i][j]
        return acc

    def ad(self, x) -> list:
        """Matrix of ad x in the basis (columns are images of basis vectors)."""
        cols = [self.bracket(x, self.basis(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def format_vector(self, v) -> str:
        from .printing import join_terms

        return join_terms((c, self.labels[i]) for i, c in enumerate(v) if c)

    def with_field(self, field: CoeffField) -> "LieAlgebraData":
        new = object.__new__(LieAlgebraData)
        new.labels, new.name, new.roots = self.labels, self.name, self.roots
        new.field = field
        new.consts = [[[field(c) for c in r] for r in row] for row in self.consts]
        new.gram = [[field(c) for c in row] for row in self.gram]
        return new

    def __repr__(self):
        return f"LieAlgebraData({self.name}, basis={self.labels})"


def _items(vec):
    if isinstance(vec, dict):
        return vec.items()
    return [(k, c) for k, c in enumerate(vec) if c]


# -- validation ----------------------------------------------------------------


def validate(L: LieAlgebraData) -> Report:
    """Exact check of antisymmetry, Jacobi, symmetry and invariance of the form."""
    n = L.dim
    out = Report()
    for i, j in product(range(n), repeat=2):
        bad = [k for k in range(n) if L.consts[i][j][k] + L.consts[j][i][k]]
        if bad:
            out.add("antisymmetry", (L.labels[i], L.labels[j]),
                    " ".join(L.labels[k] for k in bad), False)
    basis = [L.basis(i) for i in range(n)]
    for i, j, k in product(range(n), repeat=3):
        if not (i < j < k):
            continue
        x, y, z = basis[i], basis[j], basis[k]
        r = _add(_add(L.bracket(x, L.bracket(y, z)), L.bracket(y, L.bracket(z, x))), L.bracket(z, L.bracket(x, y)))
        if any(r):
            out.add("jacobi", (L.labels[i], L.labels[j], L.labels[k]), L.format_vector(r), False)
    for i, j in product(range(n), repeat=2):
        if L.gram[i][j] != L.gram[j][i]:
            out.add("form-symmetry", (L.labels[i], L.labels[j]), str(L.gram[i][j] - L.gram[j][i]), False)
    for i, j, k in product(range(n), repeat=3):
        x, y, z = basis[i], basis[j], basis[k]
        d = L.form(x, L.bracket(y, z)) - L.form(L.bracket(x, y), z)
        if d:
            out.add("form-invariance", (L.labels[i], L.labels[j], L.labels[k]), d, False)
    if not out.entries:
        out.add("lie-data", (L.name,), "ok", True)
    return out


def is_valid(L) -> bool:
    return validate(L).passed


def _add(a, b):
    return [x + y for x, y in zip(a, b)]


def is_nondegenerate(L) -> bool:
    return linalg.rank(L.gram, L.field) == L.dim


def dual_bases(L: LieAlgebraData):
    """Pairs (a_i, b_i) with a_i the basis and (b_i|a_j) = delta_ij."""
    try:
        inv = linalg.invert(L.gram, L.field)
    except linalg.SingularMatrix:
        raise LieError("invariant form is degenerate") from None
    pairs = []
    for i in range(L.dim):
        b = [inv[j][i] for j in range(L.dim)]
        pairs.append((L.basis(i), b))
    return pairs


def casimir_matrix(L):
    out = [[L.field.zero] * L.dim for _ in range(L.dim)]
    for a, b in dual_bases(L):
        M = linalg.matmul(L.ad(a), L.ad(b), L.field)
        out = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(out, M)]
    return out


def casimir_adjoint_eigenvalue(L: LieAlgebraData) -> Coeff:
    """The scalar by which sum_i ad(a^i) ad(b^i) acts on g; this is 2 h^vee."""
    M = casimir_matrix(L)
    lam = M[0][0]
    for i in range(L.dim):
        for j in range(L.dim):
            want = lam if i == j else L.field.zero
            if M[i][j] != want:
                raise LieError("Casimir does not act by a scalar on the adjoint module")
    return lam


def dual_coxeter(L) -> Coeff:
    return casimir_adjoint_eigenvalue(L) / 2


@dataclass
class SDecomposition:
    s: list
    centralizer: list          # basis vectors of h
    complement: list           # basis vectors of h^perp = Im ad s
    coords: list = dc_field(repr=False)    # inverse of [h basis | perp basis]
    ad_inv: list = dc_field(repr=False)    # matrix on the complement basis

    def split(self, v):
        """Coordinates of v in the h basis and in the complement basis."""
        n = len(self.coords)
        c = [sum((self.coords[i][j] * v[j] for j in range(n) if v[j] and self.coords[i][j]), self.s[0] * 0)
             for i in range(n)]
        k = len(self.centralizer)
        return c[:k], c[k:]

    def project_h(self, v):
        ch, _ = self.split(v)
        return _combine(self.centralizer, ch, len(v), v)

    def project_perp(self, v):
        _, cp = self.split(v)
        return _combine(self.complement, cp, len(v), v)

    def ad_s_inverse(self, v):
        """x in h^perp with [s, x] = v, for v in h^perp."""
        ch, cp = self.split(v)
        if any(ch):
            raise LieError("vector is not in the image of ad s")
        m = len(self.complement)
        x = [sum((self.ad_inv[i][j] * cp[j] for j in range(m) if cp[j]), v[0] * 0) for i in range(m)]
        return _combine(self.complement, x, len(v), v)


def _combine(vecs, coeffs, n, like):
    zero = like[0] * 0
    out = [zero] * n
    for vec, c in zip(vecs, coeffs):
        if c:
            out = [o + c * x for o, x in zip(out, vec)]
    return out


def s_decomposition(L: LieAlgebraData, s) -> SDecomposition:
    if not isinstance(s, list):
        s = L.basis(s)
    F = L.field
    A = L.ad(s)
    ker = linalg.nullspace(A, F, L.dim)
    im = linalg.column_space(A, F)
    if len(ker) + len(im) != L.dim:
        raise LieError("ad s is not semisimple on the given data")
    P = [[vec[i] for vec in ker + im] for i in range(L.dim)]
    try:
        coords = linalg.invert(P, F)
    except linalg.SingularMatrix:
        raise LieError("centralizer and image of ad s are not complementary") from None
    # matrix of ad s on the image, in the image basis
    k = len(ker)
    m = len(im)
    cols = []
    for vec in im:
        w = L.bracket(s, vec)
        c = [sum((coords[i][j] * w[j] for j in range(L.dim) if w[j]), F.zero) for i in range(L.dim)]
        if any(c[:k]):
            raise LieError("image of ad s is not ad s stable")
        cols.append(c[k:])
    M = [[cols[j][i] for j in range(m)] for i in range(m)]
    try:
        inv = linalg.invert(M, F) if m else []
    except linalg.SingularMatrix:
        raise LieError("ad s is not invertible on the complement") from None
    return SDecomposition(s, ker, im, coords, inv)


def root_value(L, a, root_vector) -> Coeff:
    """alpha(a) for the root whose root vector is given: [a, e] = alpha(a) e."""
    e = L.basis(root_vector)
    w = L.bracket(a, e)
    i = L._idx(root_vector)
    val = w[i]
    w[i] = w[i] - val
    if any(w):
        raise LieError(f"{root_vector} is not an eigenvector of ad a")
    return val


# -- bundled algebras ------------------------------------------------------


def sl2_standard(scale=1) -> LieAlgebraData:
    """Basis (e, h, f), [e,f]=h, [h,e]=2e, [h,f]=-2f, trace form times ``scale``."""
    s = Fraction(scale)
    return LieAlgebraData(
        ["e", "h", "f"],
        {("e", "f"): {"h": 1}, ("f", "e"): {"h": -1},
         ("h", "e"): {"e": 2}, ("e", "h"): {"e": -2},
         ("h", "f"): {"f": -2}, ("f", "h"): {"f": 2}},
        {("e", "f"): s, ("f", "e"): s, ("h", "h"): 2 * s},
        name="sl2",
    )


def sl2_kappa(param="kappa") -> LieAlgebraData:
    """Basis (ea, fa, s) with [ea,fa] = -kappa*s, [s,ea] = ea, [s,fa] = -fa,
    (ea|fa) = 1 and (s|s) = -1/kappa, so alpha(s) = 1 and (alpha|alpha) = -kappa.

    kappa = -1 gives [ea,fa] = s and (s|s) = 1.
    """
    F = CoeffField((param,))
    k = F.param(param)
    return LieAlgebraData(
        ["ea", "fa", "s"],
        {("ea", "fa"): {"s": -k}, ("fa", "ea"): {"s": k},
         ("s", "ea"): {"ea": 1}, ("ea", "s"): {"ea": -1},
         ("s", "fa"): {"fa": -1}, ("fa", "s"): {"fa": 1}},
        {("ea", "fa"): 1, ("fa", "ea"): 1, ("s", "s"): -1 / k},
        params=(param,),
        roots={"alpha": ("ea", "fa")},
        name="sl2",
    )


def abelian1(name="a") -> LieAlgebraData:
    return LieAlgebraData([name], {}, {(name, name): 1}, name="abelian")


def gl_matrices(n, traceless=False):
    """Elementary-matrix basis of gl_n (or sl_n) with the trace form."""
    labels, mats = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = [[0] * n for _ in range(n)]
                m[i][j] = 1
                labels.append(f"E{i + 1}{j + 1}")
                mats.append(m)
    if traceless:
        for i in range(n - 1):
            m = [[0] * n for _ in range(n)]
            m[i][i], m[i + 1][i + 1] = 1, -1
            labels.append(f"H{i + 1}")
            mats.append(m)
    else:
        for i in range(n):
            m = [[0] * n for _ in range(n)]
            m[i][i] = 1
            labels.append(f"E{i + 1}{i + 1}")
            mats.append(m)
    return from_matrices(labels, mats, name=f"{'sl' if traceless else 'gl'}{n}")


def from_matrices(labels, mats, name="g") -> LieAlgebraData:
    F = CoeffField(())
    n = len(mats[0])
    flat = [[F(Fraction(m[r][c])) for m in mats] for r in range(n) for c in range(n)]

    def mul(a, b):
        return [[sum(Fraction(a[i][k]) * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    def coords(m):
        b = [F(Fraction(m[r][c])) for r in range(n) for c in range(n)]
        return linalg.solve(flat, b, F)

    brackets, form = {}, {}
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            ab, ba = mul(a, b), mul(b, a)
            comm = [[ab[r][c] - ba[r][c] for c in range(n)] for r in range(n)]
            x = coords(comm)
            brackets[(i, j)] = {k: v for k, v in enumerate(x) if v}
            tr = sum(ab[r][r] for r in range(n))
            if tr:
                form[(i, j)] = tr
    return LieAlgebraData(labels, brackets, form, name=name)
