import time
from fractions import Fraction

import pytest

from pvakit.diffalg import DiffAlgebra, DiffOp, LambdaPoly
from pvakit.hierarchy import (UnsupportedK, check_commuting_flows, check_involution, classify_k,
                              independence_check, lm_run, verify)
from pvakit.pva import PvaSpec, magri_virasoro
from pvakit.varcalc import FunctionalClass


@pytest.fixture(scope="module")
def kdv():
    H = magri_virasoro(alpha=0)
    K = PvaSpec(H.alg, {(0, 0): LambdaPoly(H.alg, {1: H.alg.one()})}, "K")
    t = time.perf_counter()
    state = lm_run(H, K, [H.alg.one()], 5)
    return state, time.perf_counter() - t


def test_kdv_values(kdv):
    state, elapsed = kdv
    alg = state.H.alg
    u, c = alg.var(0), alg.param("c")
    assert state.xi(1) == [u]
    assert state.xi(2) == [Fraction(3, 2) * u ** 2 + c * u.D(2)]
    assert state.h(1) == FunctionalClass(u * u / 2)
    assert state.h(2) == FunctionalClass((u ** 3 + c * u * u.D(2)) / 2)
    assert state.eq(0) == [u.D()]
    assert state.eq(1) == [3 * u * u.D() + c * u.D(3)]
    assert elapsed < 10


def test_kdv_checks(kdv):
    state, _ = kdv
    assert verify(state).passed
    assert check_involution(state).passed
    assert check_commuting_flows(state, 3).passed
    assert independence_check(state).passed


def test_classify_k():
    alg = DiffAlgebra(["u"])
    assert classify_k(DiffOp(alg, [[{1: alg.const(2)}]]))[0] == "dd"
    with pytest.raises(UnsupportedK):
        classify_k(DiffOp(alg, [[{3: alg.one()}]]))
