"""Randomized checks of the variational complex on P_1 and P_2."""

from __future__ import annotations

import random
from fractions import Fraction

from .diffalg import DiffAlgebra, DiffPoly
from .report import Report
from .varcalc import closedness_defect, homotopy_integrate, is_total_derivative, variational_derivative


def random_poly(alg: DiffAlgebra, rng: random.Random, max_degree=4, max_order=3, max_terms=5) -> DiffPoly:
    f = alg.zero()
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        term = alg.const(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
        for _ in range(deg):
            term = term * alg.var(rng.randrange(alg.rank), rng.randint(0, max_order))
        f = f + term
    return f


def _is_zero_vec(v):
    return not any(v)


def check_sample(f: DiffPoly, c) -> dict:
    alg = f.alg
    g = f.D() + alg.const(c)
    out = {}
    out["delta-exact"] = _is_zero_vec(variational_derivative(g))
    w = is_total_derivative(g)
    if c:
        out["witness"] = w is None
    else:
        out["witness"] = w is not None and w.D() == f.D()
    out["helmholtz"] = closedness_defect(variational_derivative(f)).is_zero()
    h = homotopy_integrate(variational_derivative(f))
    out["homotopy"] = _is_zero_vec(variational_derivative(h - f))
    # a witness for f itself must be honest
    w2 = is_total_derivative(f)
    out["witness-sound"] = w2 is None or w2.D() == f
    return out


def run_suite(samples=200, seed=0, gens=(("u",), ("u", "v"))) -> Report:
    rng = random.Random(seed)
    rep = Report()
    for names in gens:
        alg = DiffAlgebra(list(names))
        counts = {}
        bad = {}
        for n in range(samples):
            f = random_poly(alg, rng)
            c = 0 if rng.random() < 0.5 else rng.randint(1, 4)
            for k, ok in check_sample(f, c).items():
                counts[k] = counts.get(k, 0) + 1
                if not ok and k not in bad:
                    bad[k] = f"sample {n}: f = {f}, c = {c}"
        for k in sorted(counts):
            rep.add(f"varcalc-{k}", (f"P{len(names)}", counts[k]), bad.get(k, "0"), k not in bad)
    return rep
