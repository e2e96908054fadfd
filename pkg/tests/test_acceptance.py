"""Acceptance checks 1-9. Each test records one line; conftest prints them at the end."""

import subprocess
import sys
import time
from fractions import Fraction

import pytest

from pvakit.diffalg import DiffAlgebra, LambdaPoly
from pvakit.dirac import check_coherence, nls_demo
from pvakit.dshier import (ds_densities, ds_equations, ds_gauge, ds_verify, gauge_residual,
                           predicted_h1, predicted_t0, predicted_t1)
from pvakit.hierarchy import check_commuting_flows, check_involution, lm_run, verify
from pvakit.liealg import sl2_kappa, sl2_standard
from pvakit.propsuite import run_suite
from pvakit.pva import (PvaSpec, affine, affine_pair, check_compatibility, check_pva,
                        check_skewsymmetry, gfz, magri_virasoro)
from pvakit.quantum import (LExpr, check_jacobi as va_jacobi, current_algebra, free_boson, free_fermion,
                            no_product, primary_check, sugawara, va_lambda_bracket, virasoro,
                            virasoro_extract)
from pvakit.quantum_modes import sugawara_central_charge_modes
from pvakit.varcalc import FunctionalClass


def _d_structure(alg):
    return PvaSpec(alg, {(0, 0): LambdaPoly(alg, {1: alg.one()})}, "K")


@pytest.fixture(scope="module")
def kdv_run():
    H = magri_virasoro(alpha=0)
    t = time.perf_counter()
    state = lm_run(H, _d_structure(H.alg), [H.alg.one()], 5)
    ok = verify(state).passed and check_involution(state).passed
    return state, ok, time.perf_counter() - t


def test_1_kdv_hierarchy(kdv_run, record):
    state, ok, elapsed = kdv_run
    alg = state.H.alg
    u, c = alg.var(0), alg.param("c")
    checks = {
        "xi1": state.xi(1) == [u],
        "xi2": state.xi(2) == [Fraction(3, 2) * u ** 2 + c * u.D(2)],
        "h1": state.h(1) == FunctionalClass(u * u / 2),
        "h2": state.h(2) == FunctionalClass((u ** 3 + c * u * u.D(2)) / 2),
        "eq0": state.eq(0) == [u.D()],
        "eq1": state.eq(1) == [3 * u * u.D() + c * u.D(3)],
        "lenard-magri": ok,
        "runtime": elapsed < 10,
    }
    bad = [k for k, v in checks.items() if not v]
    record(1, not bad, f"n<=5 in {elapsed:.2f}s" + (f"; failed {bad}" if bad else ""))
    assert not bad


def test_2_exercise_densities(kdv_run, record):
    state, _, _ = kdv_run
    alg = state.H.alg
    u, c = alg.var(0), alg.param("c")
    h3 = (Fraction(5, 8) * u ** 4 + Fraction(5, 3) * c * u ** 2 * u.D(2)
          + Fraction(5, 6) * c * u * u.D() ** 2 + Fraction(1, 2) * c * c * u * u.D(4))
    t2 = (Fraction(15, 2) * u ** 2 * u.D() + 10 * c * u.D() * u.D(2) + 5 * c * u * u.D(3)
          + c * c * u.D(5))
    ok_h, ok_t = state.h(3) == FunctionalClass(h3), state.eq(2) == [t2]
    record(2, ok_h and ok_t, f"h3 {'ok' if ok_h else 'mismatch'}; t2 {'ok' if ok_t else 'mismatch'} "
           "(includes c^2 u^(5))")
    assert ok_h and ok_t


def test_3_involution(kdv_run, record):
    state, _, _ = kdv_run
    inv = check_involution(state)
    com = check_commuting_flows(state, 3)
    pairs = len([e for e in inv if e.kind == "involution-H"])
    record(3, inv.passed and com.passed, f"{pairs} pairs per structure, {len(com.entries)} flow commutators")
    assert pairs == 36 and len(com.entries) == 6
    assert inv.passed and com.passed


def test_4_pva_verifier(record):
    mv = magri_virasoro()
    g = _d_structure(mv.alg)
    H, K = affine_pair(sl2_kappa(), "s")
    alg = DiffAlgebra(["u"])
    bad = PvaSpec(alg, {(0, 0): LambdaPoly(alg, {2: alg.one(), 0: alg.var(0)})})
    rej = check_skewsymmetry(bad)
    results = {
        "gfz": check_pva(gfz()).passed,
        "mv": check_pva(mv).passed,
        "affine-H": check_pva(H).passed,
        "affine-K": check_pva(K).passed,
        "affine-sl2-trace": check_pva(affine(sl2_standard())).passed,
        "mv-gfz-compat": check_compatibility(mv, g).passed,
        "affine-compat": check_compatibility(H, K).passed,
        "reject": not rej.passed and rej.failures()[0].indices == ("u", "u"),
    }
    bad_keys = [k for k, v in results.items() if not v]
    record(4, not bad_keys, "rejected table residual: " + rej.failures()[0].expr
           + (f"; failed {bad_keys}" if bad_keys else ""))
    assert not bad_keys


def test_5_variational_complex(record):
    rep = run_suite(200, seed=0)
    record(5, rep.passed, f"{len(rep.entries) // 2} properties, 200 samples each on P1 and P2")
    assert rep.passed


def test_6_quantum(record):
    va = free_boson()
    a = va.gen("a")
    L = no_product(a, a) * Fraction(1, 2)
    LL = va_lambda_bracket(L, L)
    want = LExpr(va, {0: L.T().terms, 1: (L * 2).terms, 3: (va.vac() * Fraction(1, 12)).terms})
    fv = free_fermion()
    p = fv.gen("phi")
    sva, SL, h = sugawara(sl2_standard(), "k")
    ok_vir, c = virasoro_extract(SL)
    k = sva.field.param("k")
    c_modes = sugawara_central_charge_modes(sl2_standard(), 1)
    ref = k * 3 / (2 * (k + h))
    checks = {
        "boson-LL": LL == want,
        "boson-La": not primary_check(L, a, 1),
        "fermion": va_lambda_bracket(p, p) == LExpr(fv, {0: fv.vac().terms}),
        "jacobi-vir": va_jacobi(virasoro()).passed,
        "jacobi-sl2": va_jacobi(current_algebra(sl2_standard())).passed,
        "sugawara-primary": all(not primary_check(SL, sva.gen(g), 1) for g in sva.labels),
        "sugawara-virasoro": ok_vir and c == 3 * k / (k + 2),
        "modes-k=1": c_modes.to_fraction() == c.subs({"k": 1}).to_fraction(),
    }
    bad = [x for x, v in checks.items() if not v]
    record(6, not bad, f"c(k) = {c}; modes c(1) = {c_modes}; reference formula gives {ref}, "
           f"ratio {c / ref}" + (f"; failed {bad}" if bad else ""))
    assert not bad


@pytest.fixture(scope="module")
def ds_run():
    L = sl2_kappa()
    R = ds_gauge(L, "s", 3)
    dens = ds_densities(R, "s")
    return L, R, dens


def test_7_ds_internal(ds_run, record):
    L, R, dens = ds_run
    alg = R.alg
    gauge = gauge_residual(R)
    internal = ds_verify(R, "s", dens)
    eqs = ds_equations(R, dens)
    ok = gauge.passed and internal.passed and dens[0] == FunctionalClass(alg.var(2)) \
        and eqs[0] == predicted_t0(R, "s")
    record(7, ok, "gauge residual, h0 = a, Lenard-Magri, F^a = grad h^a, t0 flow")
    assert ok


@pytest.mark.xfail(strict=True, reason="reference h1 and t1 carry the opposite sign; see decisions ledger")
def test_7_ds_reference_values(ds_run, record):
    L, R, dens = ds_run
    eqs = ds_equations(R, dens)
    h1_ok = dens[1] == predicted_h1(R, "s")
    t1_ok = all(eqs[1][L.labels.index(e)] == w for e, w in predicted_t1(R, "s").items())
    record(7, h1_ok and t1_ok, f"reference h1 {'ok' if h1_ok else 'differs'} (engine h1 = {dens[1]}, "
           f"predicted {predicted_h1(R, 's')}); reference t1 {'ok' if t1_ok else 'differs by sign'}")
    assert h1_ok and t1_ok


def test_8_dirac_nls(record):
    details, ok = [], True
    for M in (6, 8):
        d = nls_demo(M=M)
        ok = ok and d["report"].passed
        details.append(f"floor {M}: kappa_eff = {d['kappa_eff']}")
    H, _ = affine_pair(sl2_kappa(), "s")
    coh = check_coherence(H, [H.alg.gen("s")], 6, 2)
    ok = ok and coh.passed
    record(8, ok, "; ".join(details) + "; floors 6/8 coherent")
    assert ok


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "pvakit", *args], capture_output=True, text=True)


def test_9_cli(tmp_path, record):
    bad = tmp_path / "bad.pva"
    bad.write_text("generators u;\nbracket {u,u} = l^2;\n")
    runs = {
        "roundtrip": (_cli("roundtrip", "kdv.pva", "affine-sl2.pva", "freeboson.va", "nls.dirac"), 0),
        "check-kdv": (_cli("check", "kdv.pva"), 0),
        "check-affine": (_cli("check", "affine-sl2.pva"), 0),
        "check-bad": (_cli("check", str(bad)), 1),
        "hierarchy": (_cli("hierarchy", "kdv.pva", "--steps", "5", "--involution", "--commute", "3",
                           "--expect-xi", "2=3/2*u^2 + c*u''", "--expect-h", "2=1/2*(u^3 + c*u*u'')",
                           "--expect-h", "3=5/8*u^4 + 5/3*c*u^2*u'' + 5/6*c*u*u'^2 + 1/2*c^2*u*u''''",
                           "--expect-eq", "1=3*u*u' + c*u'''",
                           "--expect-eq", "2=15/2*u^2*u' + 10*c*u'*u'' + 5*c*u*u''' + c^2*u^(5)"), 0),
        "hierarchy-wrong": (_cli("hierarchy", "kdv.pva", "--steps", "2", "--expect-h", "1=u^3"), 1),
        "varcalc": (_cli("varcalc-suite", "--samples", "200"), 0),
        "va-bracket": (_cli("va", "bracket", "freeboson.va", "L", "L",
                            "--expect", "(T + 2*l)*L + 1/12*l^3*vac"), 0),
        "sugawara": (_cli("sugawara", "--algebra", "sl2-trace.lie", "--modes"), 0),
        # criterion 7 is red on the reference h1/t1 signs, so the ds run exits 1
        "ds": (_cli("ds", "--algebra", "sl2.lie", "--s", "s", "--a", "s", "--trunc", "3"), 1),
        "dirac-6": (_cli("dirac", "nls.dirac", "--nls", "--trunc", "6"), 0),
        "dirac-8": (_cli("dirac", "nls.dirac", "--nls", "--trunc", "8"), 0),
    }
    bad_runs = {k: (p.returncode, want) for k, (p, want) in runs.items() if p.returncode != want}
    record(9, not bad_runs, "exit codes match criteria 1-8 (ds exits 1 with criterion 7)"
           + (f"; mismatched {bad_runs}" if bad_runs else ""))
    assert not bad_runs, {k: runs[k][0].stdout[-2000:] + runs[k][0].stderr[-2000:] for k in bad_runs}
