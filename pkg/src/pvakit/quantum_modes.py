"""Independent mode computation of the Sugawara central charge.

Works in the affine Kac-Moody algebra with [a_m, b_n] = [a,b]_{m+n} +
m k (a|b) delta_{m+n,0} and reads off c from <0| L_2 L_{-2} |0> = c/2.
"""

from __future__ import annotations

from .coeff import CoeffField
from .liealg import casimir_adjoint_eigenvalue, dual_bases


class _Modes:
    def __init__(self, Lie, k):
        params = list(Lie.field.params)
        if isinstance(k, str) and k not in params:
            params.append(k)
        self.F = CoeffField(tuple(params))
        self.k = self.F.param(k) if isinstance(k, str) else self.F(k)
        self.L = Lie
        self.cache = {}

    def commutator(self, x, y):
        """[x, y] for modes x = (i, m), y = (j, n) as a list of (word, coeff)."""
        (i, m), (j, n) = x, y
        out = []
        br = self.L.bracket(self.L.basis(i), self.L.basis(j))
        for r, c in enumerate(br):
            if c:
                out.append((((r, m + n),), self.F(c)))
        if m + n == 0 and m:
            g = self.F(self.L.gram[i][j])
            if g:
                out.append(((), self.k * g * m))
        return out

    def vev(self, word):
        """<0| word |0> for a tuple of modes (basis index, mode number)."""
        if not word:
            return self.F.one
        if word[-1][1] >= 0 or word[0][1] <= 0:
            return self.F.zero
        hit = self.cache.get(word)
        if hit is not None:
            return hit
        # move the rightmost annihilator one step right
        p = max(i for i, (_, m) in enumerate(word) if m >= 0)
        if p == len(word) - 1:
            return self.F.zero
        x, y = word[p], word[p + 1]
        total = self.vev(word[:p] + (y, x) + word[p + 2:])
        for w, c in self.commutator(x, y):
            total = total + c * self.vev(word[:p] + w + word[p + 2:])
        self.cache[word] = total
        return total


def _sugawara_modes(M, n, span):
    """Terms of L_n (without the overall factor) as (coeff, word)."""
    F = M.F
    out = []
    for i, (_, b) in enumerate(dual_bases(M.L)):
        for j, c in enumerate(b):
            if not c:
                continue
            for m in range(-span, span + 1):
                x, y = (i, m), (j, n - m)
                word = (x, y) if m < 0 else (y, x)
                out.append((F(c), word))
    return out


def sugawara_central_charge_modes(Lie, k=1):
    M = _Modes(Lie, k)
    F = M.F
    h = F(casimir_adjoint_eigenvalue(Lie)) / 2
    norm = F.one / (2 * (M.k + h))
    span = 4
    L2 = _sugawara_modes(M, 2, span)
    Lm2 = _sugawara_modes(M, -2, span)
    total = F.zero
    for c1, w1 in L2:
        for c2, w2 in Lm2:
            total = total + c1 * c2 * M.vev(w1 + w2)
    return total * norm * norm * 2
