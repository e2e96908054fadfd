import pytest

from pvakit.dshier import (ds_densities, ds_equations, ds_gauge, ds_verify, gauge_residual,
                           predicted_h1, predicted_t0, predicted_t1)
from pvakit.liealg import sl2_kappa, sl2_standard
from pvakit.varcalc import FunctionalClass


@pytest.fixture(scope="module")
def run():
    L = sl2_kappa()
    R = ds_gauge(L, "s", 3)
    return L, R, ds_densities(R, "s")


def test_gauge_and_internal_checks(run):
    L, R, dens = run
    assert gauge_residual(R).passed
    assert ds_verify(R, "s", dens).passed


def test_low_densities(run):
    L, R, dens = run
    alg = R.alg
    ea, fa, s = alg.var(0), alg.var(1), alg.var(2)
    assert dens[0] == FunctionalClass(s)
    assert dens[1] == FunctionalClass(-ea * fa)


def test_t0_matches_prediction(run):
    L, R, dens = run
    eqs = ds_equations(R, dens)
    assert eqs[0] == predicted_t0(R, "s")


def test_t1_is_negative_of_reference_prediction(run):
    L, R, dens = run
    eqs = ds_equations(R, dens)
    pred = predicted_t1(R, "s")
    for e, want in pred.items():
        assert eqs[1][L.labels.index(e)] == -want
    assert dens[1] == -predicted_h1(R, "s")


def test_trace_form_sl2():
    L = sl2_standard()
    R = ds_gauge(L, "h", 3)
    assert ds_verify(R, "h").passed


def test_bad_truncation():
    with pytest.raises(ValueError):
        ds_gauge(sl2_kappa(), "s", 0)
