"""Command line front end: ``pvakit <command> ...``.

Every command builds a Report and emits it as text, LaTeX or JSON.  The
exit status is 0 exactly when every entry passed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from importlib import resources
from pathlib import Path

from .report import Report

VERSION = "0.1.0"


# -- emitters ---------------------------------------------------------------------

_GREEK = {"alpha", "beta", "gamma", "delta", "kappa", "lambda", "mu", "nu", "epsilon", "theta", "phi", "psi"}


def to_latex(text: str) -> str:
    """Best-effort rendering of a canonical expression string."""
    def ident(m):
        w = m.group(0)
        if w == "l":
            return r"\lambda"
        if w == "D":
            return r"\partial"
        if w == "vac":
            return r"|0\rangle"
        if w in _GREEK:
            return "\\" + w
        return w

    s = re.sub(r"\^\((-?\d+)\)", r"^{(\1)}", text)
    s = re.sub(r"\^(\d+)", r"^{\1}", s)
    s = re.sub(r"[A-Za-z][A-Za-z0-9_]*", ident, s)
    return s.replace("*", r"\,")


def render(report: Report, command: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"version": VERSION, "command": command,
                           "entries": [e.as_dict() for e in report]}, indent=2)
    lines = []
    if fmt == "latex":
        lines.append(r"\begin{itemize}")
        for e in report:
            idx = ", ".join(map(str, e.indices))
            lines.append(rf"\item[{'PASS' if e.passed else 'FAIL'}] \texttt{{{e.kind}}} ({idx}): ${to_latex(e.expr)}$")
        lines.append(r"\end{itemize}")
        return "\n".join(lines)
    for e in report:
        idx = ",".join(map(str, e.indices))
        lines.append(f"{'PASS' if e.passed else 'FAIL'}  {e.kind}[{idx}]  {e.expr}")
    n_bad = len(report.failures())
    lines.append(f"{len(report.entries) - n_bad} passed, {n_bad} failed")
    return "\n".join(lines)


def emit(report, command, args):
    text = render(report, command, args.emit)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0 if report.passed else 1


# -- helpers ----------------------------------------------------------------------------


def data_path(name: str) -> Path:
    """Path of a bundled example file (``kdv.pva`` and friends)."""
    return Path(str(resources.files("pvakit") / "data" / name))


def _load(path):
    from .parser import parse_file

    p = Path(path)
    if not p.exists() and data_path(path).exists():
        p = data_path(path)
    return parse_file(p)


def _expectations(items):
    out = {}
    for it in items or []:
        n, _, expr = it.partition("=")
        out[int(n)] = expr
    return out


def _vector(text, alg):
    from .parser import parse_poly

    parts = [p.strip() for p in text.split(",")]
    if len(parts) != alg.rank:
        raise SystemExit(f"expected {alg.rank} components, got {len(parts)}")
    return [parse_poly(p, alg) for p in parts]


def _fmt_vec(v):
    return ", ".join(str(x) for x in v)


# -- commands ----------------------------------------------------------------------------


def cmd_check(args):
    from .pva import check_compatibility, check_pva

    spec = _load(args.file)
    rep = Report()
    if spec.kind == "lie":
        from .liealg import validate

        return emit(validate(spec.lie_algebra()), "check", args)
    if spec.kind == "va":
        from .quantum import check_jacobi, check_table_skew

        rep.extend(check_table_skew(spec.va)).extend(check_jacobi(spec.va))
        return emit(rep, "check", args)
    structs = spec.structures()
    for name, S in structs.items():
        for e in check_pva(S):
            rep.add(f"{e.kind}-{name}", e.indices, e.expr, e.passed)
    names = list(structs)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            for e in check_compatibility(structs[names[i]], structs[names[j]]):
                rep.add(e.kind, (names[i], names[j]) + tuple(e.indices), e.expr, e.passed)
    return emit(rep, "check", args)


def cmd_bracket(args):
    from .parser import parse_poly
    from .pva import master_bracket

    spec = _load(args.file)
    S = spec.structures()[args.structure]
    f, g = parse_poly(args.f, spec.alg), parse_poly(args.g, spec.alg)
    v = master_bracket(f, g, S)
    rep = Report().add("bracket", (args.structure, str(f), str(g)), v, True)
    return emit(rep, "bracket", args)


def cmd_hierarchy(args):
    from .hierarchy import (check_commuting_flows, check_involution, independence_check, lm_run,
                            verify)
    from .parser import parse_poly
    from .varcalc import FunctionalClass

    spec = _load(args.file)
    structs = spec.structures()
    H, K = structs[args.H], structs[args.K]
    alg = spec.alg
    state = lm_run(H, K, _vector(args.seed, alg), args.steps)
    rep = Report()
    for s in state.steps:
        rep.add("xi", (s.n,), _fmt_vec(s.xi), True)
        rep.add("h", (s.n,), s.h, True)
        rep.add("eq", (s.n,), _fmt_vec(s.eq), True)
    rep.extend(verify(state))
    for n, text in _expectations(args.expect_xi).items():
        want = _vector(text, alg)
        rep.add("expect-xi", (n,), _fmt_vec(state.xi(n)), state.xi(n) == want)
    for n, text in _expectations(args.expect_h).items():
        want = FunctionalClass(parse_poly(text, alg))
        rep.add("expect-h", (n,), f"{state.h(n)} == {text} mod D", state.h(n) == want)
    for n, text in _expectations(args.expect_eq).items():
        want = _vector(text, alg)
        rep.add("expect-eq", (n,), _fmt_vec(state.eq(n)), state.eq(n) == want)
    if args.involution:
        rep.extend(check_involution(state))
    if args.commute is not None:
        rep.extend(check_commuting_flows(state, args.commute))
    rep.extend(independence_check(state))
    return emit(rep, "hierarchy", args)


def cmd_ds(args):
    from .dshier import (ds_densities, ds_equations, ds_gauge, ds_verify, predicted_h1, predicted_t0,
                         predicted_t1)
    from .parser import parse_poly
    from .varcalc import FunctionalClass

    spec = _load(args.algebra)
    L = spec.lie_algebra()
    R = ds_gauge(L, args.s, args.trunc)
    dens = ds_densities(R, args.a)
    eqs = ds_equations(R, dens)
    rep = Report()
    for n, h in enumerate(dens):
        rep.add("h", (n,), h, True)
    for n, e in enumerate(eqs):
        rep.add("eq", (n,), _fmt_vec(e), True)
    rep.extend(ds_verify(R, args.a, dens))
    labels = L.labels
    p0 = predicted_t0(R, args.a)
    rep.add("predicted-t0", (), f"engine: {_fmt_vec(eqs[0])}; predicted: {_fmt_vec(p0)}", eqs[0] == p0)
    if len(dens) > 1 and L.roots:
        want = predicted_h1(R, args.a)
        rep.add("predicted-h1", (), f"engine: {dens[1]}; predicted: {want}", dens[1] == want)
    if len(eqs) > 1 and L.roots:
        for e, want in predicted_t1(R, args.a).items():
            got = eqs[1][labels.index(e)]
            rep.add("predicted-t1", (e,), f"engine: {got}; predicted: {want}", got == want)
    for n, text in _expectations(args.expect_h).items():
        want = FunctionalClass(parse_poly(text, R.alg))
        rep.add("expect-h", (n,), f"{dens[n]} == {text} mod D", dens[n] == want)
    for n, text in _expectations(args.expect_eq).items():
        want = _vector(text, R.alg)
        rep.add("expect-eq", (n,), _fmt_vec(eqs[n]), eqs[n] == want)
    return emit(rep, "ds", args)


def cmd_dirac(args):
    from .dirac import (check_centrality, check_coherence, check_inverse, check_reduced_skew,
                        dirac_reduce, nls_demo)

    spec = _load(args.file)
    structs = spec.structures()
    if args.constraints:
        from .parser import parse_poly

        thetas = [parse_poly(t, spec.alg) for t in args.constraints.split(",")]
    else:
        thetas = spec.constraints
    rep = Report()
    for name, S in structs.items():
        R = dirac_reduce(S, thetas, args.trunc)
        g = R.quotient_alg.gens
        for (i, j), v in sorted(R.reduced.items()):
            rep.add(f"reduced-{name}", (g[i], g[j]), v, True)
        if R.Cinv is not None:
            C = R.constraints.matrix(S, args.trunc)
            rep.extend(check_inverse(C, R.Cinv, args.trunc))
        rep.extend(check_centrality(R))
        rep.extend(check_reduced_skew(R))
        rep.extend(check_coherence(S, thetas, args.trunc, args.extra))
    if args.nls:
        d = nls_demo(H=structs["H"], K=structs["K"], theta=thetas, M=args.trunc)
        rep.extend(d["report"])
        rep.add("kappa-eff", (), d["kappa_eff"], True)
    return emit(rep, "dirac", args)


def cmd_va(args):
    from .parser import parse_va
    from .quantum import check_jacobi, check_table_skew, format_folded

    spec = _load(args.file)
    va = spec.va
    if spec.kind != "va":
        raise SystemExit("not a vertex algebra file")
    rep = Report()
    if args.action == "check":
        rep.extend(check_table_skew(va)).extend(check_jacobi(va))
        return emit(rep, "va check", args)
    A, B = (parse_va(x, va) for x in (args.a, args.b))
    if set(A) - {0} or set(B) - {0}:
        raise SystemExit("arguments cannot depend on l")
    br = va.bracket_expr(A.get(0, {}), B.get(0, {}))
    text = format_folded(va, br)
    ok = True
    if args.expect:
        ok = br == parse_va(args.expect, va)
    rep.add("va-bracket", (args.a, args.b), text, ok)
    if args.action == "virasoro":
        from .quantum import VaExpr, virasoro_extract

        good, c = virasoro_extract(VaExpr(va, A.get(0, {})))
        rep.add("virasoro", (args.a,), f"c = {c}" if good else str(c), good)
    return emit(rep, "va", args)


def cmd_sugawara(args):
    from .quantum import primary_check, sugawara, virasoro_extract
    from .quantum_modes import sugawara_central_charge_modes

    spec = _load(args.algebra)
    L = spec.lie_algebra()
    level = args.level
    try:
        level = int(level)
    except ValueError:
        pass
    va, Lvec, h = sugawara(L, level)
    rep = Report()
    rep.add("sugawara", (str(level),), Lvec, True)
    rep.add("dual-coxeter", (), h, True)
    for g in va.labels:
        r = primary_check(Lvec, va.gen(g), 1)
        rep.add("primary", (g, 1), r if r else "0", not r)
    ok, c = virasoro_extract(Lvec)
    rep.add("virasoro", (), f"c = {c}" if ok else c, ok)
    if ok:
        F = va.field
        k = F.param(level) if isinstance(level, str) else F(level)
        ref = F(L.dim) * k / (2 * (k + h))
        rep.add("c-reference-formula", (), f"k*dim/(2*(k + h)) = {ref}; derived c = {c}; ratio {c / ref}",
                True)
        if args.modes:
            c1 = c.subs({level: 1}) if isinstance(level, str) else c
            m = sugawara_central_charge_modes(L, 1)
            same = c1.is_constant() and m.is_constant() and m.to_fraction() == c1.to_fraction()
            rep.add("modes-k=1", (), f"modes: {m}; lambda-bracket: {c1}", same)
    return emit(rep, "sugawara", args)


def cmd_varcalc_suite(args):
    from .propsuite import run_suite

    return emit(run_suite(args.samples, args.seed), "varcalc-suite", args)


def cmd_roundtrip(args):
    from .parser import format_source, parse

    rep = Report()
    for f in args.files:
        spec = _load(f)
        text = format_source(spec)
        again = parse(text, spec.kind)
        rep.add("roundtrip", (f,), text.strip().replace("\n", " "), again == spec and format_source(again) == text)
    return emit(rep, "roundtrip", args)


def build_parser():
    p = argparse.ArgumentParser(prog="pvakit", description="lambda-bracket calculus toolkit")
    p.add_argument("--version", action="version", version=VERSION)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=["text", "latex", "json"], default="text")
    common.add_argument("--out")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="axioms of every bracket in a file")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("bracket", parents=[common], help="{f_l g} by the Master Formula")
    c.add_argument("file")
    c.add_argument("f")
    c.add_argument("g")
    c.add_argument("--structure", default="H")
    c.set_defaults(func=cmd_bracket)

    c = sub.add_parser("hierarchy", parents=[common], help="Lenard-Magri scheme")
    c.add_argument("file")
    c.add_argument("--seed", default="1")
    c.add_argument("--steps", type=int, default=3)
    c.add_argument("--H", default="H")
    c.add_argument("--K", default="K")
    c.add_argument("--involution", action="store_true")
    c.add_argument("--commute", type=int, metavar="N")
    c.add_argument("--expect-xi", action="append", metavar="N=EXPR")
    c.add_argument("--expect-h", action="append", metavar="N=EXPR")
    c.add_argument("--expect-eq", action="append", metavar="N=EXPR")
    c.set_defaults(func=cmd_hierarchy)

    c = sub.add_parser("ds", parents=[common], help="homogeneous Drinfeld-Sokolov hierarchy")
    c.add_argument("--algebra", required=True)
    c.add_argument("--s", required=True)
    c.add_argument("--a", required=True)
    c.add_argument("--trunc", type=int, default=3)
    c.add_argument("--expect-h", action="append", metavar="N=EXPR")
    c.add_argument("--expect-eq", action="append", metavar="N=EXPR")
    c.set_defaults(func=cmd_ds)

    c = sub.add_parser("dirac", parents=[common], help="Dirac reduction by constraints")
    c.add_argument("file")
    c.add_argument("--constraints")
    c.add_argument("--trunc", type=int, default=6)
    c.add_argument("--extra", type=int, default=2, help="headroom for the coherence check")
    c.add_argument("--nls", action="store_true")
    c.set_defaults(func=cmd_dirac)

    c = sub.add_parser("va", parents=[common], help="vertex algebra lambda-brackets")
    c.add_argument("action", choices=["bracket", "virasoro", "check"])
    c.add_argument("file")
    c.add_argument("a", nargs="?")
    c.add_argument("b", nargs="?")
    c.add_argument("--expect")
    c.set_defaults(func=cmd_va)

    c = sub.add_parser("sugawara", parents=[common], help="Sugawara vector and central charge")
    c.add_argument("--algebra", required=True)
    c.add_argument("--level", default="k")
    c.add_argument("--modes", action="store_true")
    c.set_defaults(func=cmd_sugawara)

    c = sub.add_parser("varcalc-suite", parents=[common], help="random checks of the variational complex")
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_varcalc_suite)

    c = sub.add_parser("roundtrip", parents=[common], help="parse, print and parse again")
    c.add_argument("files", nargs="+")
    c.set_defaults(func=cmd_roundtrip)
    return p


def main(argv=None):
    from .parser import ParseError

    args = build_parser().parse_args(argv)
    if args.command == "va" and args.action != "check" and (args.a is None or args.b is None):
        print("va bracket needs two expressions", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
