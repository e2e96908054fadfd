"""Declaration files and the expression grammar.

Statements end with ``;`` and ``#`` starts a comment::

    params c;
    generators u;
    bracket H {u,u} = (D + 2*l)*u + c*l^3;
    bracket K {u,u} = l;

Vertex algebra files start with ``vertex;`` and may use ``T``, ``vac``,
``:A B:`` and ``define NAME = expr;``.  Lie algebra files use ``basis``,
``lie [a,b] = ...;``, ``form (a|b) = ...;`` and ``root NAME = pos, neg;``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .coeff import CoeffField
from .diffalg import DiffAlgebra, DiffPoly, LambdaPoly
from .liealg import LieAlgebraData

RESERVED = {"l", "D", "T", "vac"}
KEYWORDS = {"params", "generators", "bracket", "constraints", "define", "vertex",
            "basis", "lie", "form", "root"}


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z][A-Za-z0-9_]*)
  | (?P<prime>')
  | (?P<op>[-+*/^(){}\[\],;=:|])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int
    space_before: bool = False


def tokenize(text: str) -> list:
    out = []
    line, start, pos = 1, 0, 0
    space = False
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
            space = True
        elif kind == "ws":
            space = True
        else:
            out.append(Tok(kind, m.group(), line, m.start() - start + 1, space))
            space = False
        pos = m.end()
    out.append(Tok("eof", "", line, pos - start + 1, space))
    return out


class _Stream:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    @property
    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text, kind=None):
        t = self.peek
        return t.text == text and (kind is None or t.kind == kind)

    def expect(self, text) -> Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def ident(self) -> Tok:
        t = self.next()
        if t.kind != "id":
            raise ParseError(f"expected a name, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def error(self, msg, t=None):
        t = t or self.peek
        return ParseError(msg, t.line, t.col)


# -- expression values ----------------------------------------------------------


class _PvaVal:
    """Operator polynomial: (lambda power, D power) -> DiffPoly, applied to 1 at the end."""

    def __init__(self, alg, terms):
        self.alg = alg
        self.t = {k: v for k, v in terms.items() if v}

    def is_scalar(self):
        return all(k == (0, 0) and v.is_constant() for k, v in self.t.items())

    def scalar(self):
        return self.t[(0, 0)].constant_term() if self.t else self.alg.field.zero

    def __add__(self, o):
        t = dict(self.t)
        for k, v in o.t.items():
            t[k] = t[k] + v if k in t else v
        return _PvaVal(self.alg, t)

    def __neg__(self):
        return _PvaVal(self.alg, {k: -v for k, v in self.t.items()})

    def __mul__(self, o):
        from math import comb

        out = {}
        for (la, da), x in self.t.items():
            for (lb, db), y in o.t.items():
                dy = y
                for r in range(da + 1):
                    if r:
                        dy = dy.D()
                        if not dy:
                            break
                    k = (la + lb, da - r + db)
                    v = x * dy.scale(comb(da, r))
                    out[k] = out[k] + v if k in out else v
        return _PvaVal(self.alg, out)

    def div(self, c):
        inv = self.alg.field.one / c
        return _PvaVal(self.alg, {k: v.scale(inv) for k, v in self.t.items()})

    def final(self) -> LambdaPoly:
        return LambdaPoly(self.alg, {la: v for (la, d), v in self.t.items() if d == 0})


class _VaVal:
    """(lambda power, T power) -> expression dict, T applied at the end."""

    def __init__(self, va, terms):
        self.va = va
        self.t = {k: v for k, v in terms.items() if v}

    def is_scalar(self):
        return all(k == (0, 0) and set(v) <= {()} for k, v in self.t.items())

    def _unitlike(self):
        return all(set(v) <= {()} for v in self.t.values())

    def scalar(self):
        v = self.t.get((0, 0), {})
        return v.get((), self.va.field.zero)

    def __add__(self, o):
        from .quantum import _add_into

        t = {k: dict(v) for k, v in self.t.items()}
        for k, v in o.t.items():
            _add_into(t.setdefault(k, {}), v)
        return _VaVal(self.va, t)

    def __neg__(self):
        return _VaVal(self.va, {k: {w: -c for w, c in v.items()} for k, v in self.t.items()})

    def __mul__(self, o):
        from .quantum import _add_into

        out = {}
        if self._unitlike():
            for (la, ta), x in self.t.items():
                c = x.get(())
                for (lb, tb), y in o.t.items():
                    _add_into(out.setdefault((la + lb, ta + tb), {}), y, c)
        elif o._unitlike():
            for (la, ta), x in self.t.items():
                for (lb, tb), y in o.t.items():
                    if tb == 0:
                        _add_into(out.setdefault((la + lb, ta), {}), x, y.get(()))
        else:
            raise ValueError("product of two fields; write the normally ordered product :A B:")
        return _VaVal(self.va, out)

    def div(self, c):
        inv = self.va.field.one / c
        return _VaVal(self.va, {k: {w: x * inv for w, x in v.items()} for k, v in self.t.items()})

    def final(self) -> dict:
        """lambda power -> expression dict."""
        from .quantum import _ladd

        out = {}
        for (la, ta), v in self.t.items():
            _ladd(out, la, self.va.t_pow(v, ta))
        return out

    def final_expr(self, tok=None) -> dict:
        f = self.final()
        if set(f) - {0}:
            raise ValueError("expected an expression without l")
        return f.get(0, {})


class _Ctx:
    """Name resolution for one expression language."""

    def __init__(self, mode, alg=None, va=None, defines=None, params=()):
        self.mode = mode
        self.alg = alg
        self.va = va
        self.defines = defines or {}
        self.params = tuple(params)

    @property
    def field(self):
        return self.alg.field if self.mode == "pva" else self.va.field

    def const(self, c):
        c = self.field(c)
        if self.mode == "pva":
            return _PvaVal(self.alg, {(0, 0): self.alg.const(c)})
        return _VaVal(self.va, {(0, 0): {(): c}})

    def lam(self):
        if self.mode == "pva":
            return _PvaVal(self.alg, {(1, 0): self.alg.one()})
        return _VaVal(self.va, {(1, 0): {(): self.va.field.one}})

    def deriv(self, n=1):
        if self.mode != "pva":
            raise ValueError("D is not available here; use T")
        return _PvaVal(self.alg, {(0, n): self.alg.one()})

    def trans(self, n=1):
        if self.mode != "va":
            raise ValueError("T is only available in vertex algebra files")
        return _VaVal(self.va, {(0, n): {(): self.va.field.one}})

    def name(self, text, n, tok, s):
        if text in self.params:
            if n:
                raise s.error(f"parameter {text} cannot be differentiated", tok)
            return self.const(self.field.param(text))
        if self.mode == "pva":
            if text in self.alg.gens:
                return _PvaVal(self.alg, {(0, 0): self.alg.var(self.alg.index(text), n)})
        else:
            if text == "vac":
                return self.const(1)
            if text in self.va.labels:
                return _VaVal(self.va, {(0, 0): {((self.va.index(text), n),): self.va.field.one}})
            if text in self.defines:
                d = self.defines[text]
                if n:
                    d = self.va.t_pow(d, n)
                return _VaVal(self.va, {(0, 0): dict(d)})
        raise s.error(f"undeclared identifier {text!r}", tok)


def _int_after_caret(s: _Stream):
    """After '^': an integer, a negative integer or a parenthesized one."""
    paren = s.at("(")
    if paren:
        s.next()
    neg = s.at("-")
    if neg:
        s.next()
    t = s.next()
    if t.kind != "num":
        raise s.error("expected an integer exponent", t)
    if paren:
        s.expect(")")
    return -int(t.text) if neg else int(t.text), paren


def _expr(s, ctx):
    v = _term(s, ctx)
    while s.peek.text in ("+", "-"):
        op = s.next().text
        w = _term(s, ctx)
        v = v + w if op == "+" else v + (-w)
    return v


def _term(s, ctx):
    v = _unary(s, ctx)
    while s.peek.text in ("*", "/"):
        op = s.next()
        w = _unary(s, ctx)
        if op.text == "*":
            try:
                v = v * w
            except ValueError as e:
                raise s.error(str(e), op) from None
        else:
            if not w.is_scalar() or not w.scalar():
                raise s.error("division only by a nonzero constant", op)
            v = v.div(w.scalar())
    return v


def _unary(s, ctx):
    if s.at("-"):
        s.next()
        return -_unary(s, ctx)
    if s.at("+"):
        s.next()
        return _unary(s, ctx)
    return _power(s, ctx)


def _power(s, ctx):
    base = _atom(s, ctx)
    while s.at("^"):
        tok = s.next()
        n, _ = _int_after_caret(s)
        if n < 0:
            raise s.error("negative powers are not allowed", tok)
        out = ctx.const(1)
        for _ in range(n):
            try:
                out = out * base
            except ValueError as e:
                raise s.error(str(e), tok) from None
        base = out
    return base


def _atom(s, ctx):
    t = s.peek
    if t.kind == "num":
        s.next()
        return ctx.const(int(t.text))
    if t.text == "(":
        s.next()
        v = _expr(s, ctx)
        s.expect(")")
        return v
    if t.text == ":":
        return _no_product(s, ctx)
    if t.kind == "id":
        s.next()
        if t.text == "l":
            return ctx.lam()
        if t.text in ("D", "T"):
            n = 1
            if s.at("^"):
                s.next()
                n, _ = _int_after_caret(s)
            try:
                op = ctx.deriv(n) if t.text == "D" else ctx.trans(n)
            except ValueError as e:
                raise s.error(str(e), t) from None
            if s.at("(") and not s.peek.space_before:
                s.next()
                arg = _expr(s, ctx)
                s.expect(")")
                return op * arg
            return op
        n = 0
        while s.peek.kind == "prime" and not s.peek.space_before:
            s.next()
            n += 1
        if s.at("^") and s.toks[s.i + 1].text == "(" and not n:
            # u^(n) is a derivative
            save = s.i
            s.next()
            k, _ = _int_after_caret(s)
            if k < 0:
                s.i = save
            else:
                n = k
        return ctx.name(t.text, n, t, s)
    raise s.error(f"unexpected {t.text or 'end of input'!r}")


def _no_arg(s, ctx):
    """One factor inside :A B:."""
    t = s.peek
    if t.text == ":":
        return _no_product(s, ctx)
    if t.text == "(":
        s.next()
        v = _expr(s, ctx)
        s.expect(")")
        return v
    return _power(s, ctx)


def _no_product(s, ctx):

    tok = s.expect(":")
    if ctx.mode != "va":
        raise s.error("normally ordered products need a vertex algebra", tok)
    a = _no_arg(s, ctx)
    b = _no_arg(s, ctx)
    s.expect(":")
    try:
        A, B = a.final_expr(), b.final_expr()
    except ValueError as e:
        raise s.error(str(e), tok) from None
    return _VaVal(ctx.va, {(0, 0): ctx.va.np_expr(A, B)})


def parse_expression(text, ctx):
    s = _Stream(tokenize(text))
    v = _expr(s, ctx)
    if s.peek.kind != "eof":
        raise s.error(f"unexpected {s.peek.text!r}")
    return v


def parse_poly(text, alg: DiffAlgebra) -> DiffPoly:
    """A differential polynomial (no l allowed)."""
    lp = parse_lambda(text, alg)
    if set(lp.coeffs) - {0}:
        raise ParseError(f"{text!r} depends on l")
    return lp[0]


def parse_lambda(text, alg: DiffAlgebra) -> LambdaPoly:
    return parse_expression(text, _Ctx("pva", alg=alg, params=alg.params)).final()


def parse_va(text, va, defines=None):
    """A vertex algebra expression; returns (lambda power -> expression dict)."""
    ctx = _Ctx("va", va=va, defines=defines or va.defs, params=va.field.params)
    return parse_expression(text, ctx).final()


# -- declaration files -------------------------------------------------------------


@dataclass
class Generator:
    name: str
    odd: bool = False
    weight: Fraction | None = None


@dataclass
class SourceSpec:
    kind: str = "pva"
    params: list = field(default_factory=list)
    generators: list = field(default_factory=list)
    brackets: dict = field(default_factory=dict)      # name -> {(a, b): value}
    constraints: list = field(default_factory=list)
    defines: dict = field(default_factory=dict)
    basis: list = field(default_factory=list)
    lie_brackets: dict = field(default_factory=dict)  # (a, b) -> {label: coeff}
    form: dict = field(default_factory=dict)
    roots: dict = field(default_factory=dict)
    alg: DiffAlgebra | None = None
    va: object = None

    # -- derived objects --
    def names(self):
        return [g.name for g in self.generators]

    def structures(self):
        """PvaSpec per bracket name (pva files)."""
        from .pva import PvaSpec

        return {name: PvaSpec(self.alg, {(self.alg.index(a), self.alg.index(b)): v
                                         for (a, b), v in table.items()}, name)
                for name, table in self.brackets.items()}

    def lie_algebra(self) -> LieAlgebraData:
        brackets = {}
        for (a, b), vec in self.lie_brackets.items():
            brackets[(a, b)] = vec
            brackets.setdefault((b, a), {k: -c for k, c in vec.items()})
        form = {}
        for (a, b), c in self.form.items():
            form[(a, b)] = c
            form.setdefault((b, a), c)
        return LieAlgebraData(self.basis, brackets, form, self.params, dict(self.roots))

    def key(self):
        """Structural identity used for round-trip comparison."""
        if self.kind == "va":
            tables = {n: {k: {p: dict(e) for p, e in v.items()} for k, v in t.items()}
                      for n, t in self.brackets.items()}
        else:
            tables = self.brackets
        return (self.kind, tuple(self.params), tuple((g.name, g.odd, g.weight) for g in self.generators),
                tables, tuple(self.constraints), self.defines, tuple(self.basis),
                self.lie_brackets, self.form, self.roots)

    def __eq__(self, other):
        return isinstance(other, SourceSpec) and self.key() == other.key()


def _name_list(s):
    names = [s.ident()]
    while s.at(","):
        s.next()
        names.append(s.ident())
    return names


def _check_name(s, t, used):
    if t.text in RESERVED or t.text in KEYWORDS:
        raise s.error(f"{t.text!r} is reserved", t)
    if t.text in used:
        raise s.error(f"{t.text!r} declared twice", t)
    used.add(t.text)


def _rational(s):
    neg = s.at("-")
    if neg:
        s.next()
    t = s.next()
    if t.kind != "num":
        raise s.error("expected a number", t)
    q = Fraction(int(t.text))
    if s.at("/"):
        s.next()
        d = s.next()
        if d.kind != "num":
            raise s.error("expected a number", d)
        q /= int(d.text)
    return -q if neg else q


def _until_semicolon(s):
    """Slice of tokens up to the next ';' (exclusive) as a sub-stream."""
    start = s.i
    depth = 0
    while True:
        t = s.peek
        if t.kind == "eof":
            raise s.error("missing ';'")
        if t.text == ";" and depth == 0:
            break
        if t.text in "({[":
            depth += 1
        elif t.text in ")}]":
            depth -= 1
        s.next()
    toks = s.toks[start:s.i] + [Tok("eof", "", t.line, t.col)]
    s.next()
    return _Stream(toks)


def parse(text: str, kind: str | None = None) -> SourceSpec:
    s = _Stream(tokenize(text))
    spec = SourceSpec()
    if kind:
        spec.kind = kind
    used = set()
    pending = []  # statements needing the algebra: (kind, data, stream)
    while s.peek.kind != "eof":
        t = s.ident()
        kw = t.text
        if kw == "vertex":
            spec.kind = "va"
            s.expect(";")
        elif kw == "params":
            for n in _name_list(s):
                _check_name(s, n, used)
                spec.params.append(n.text)
            s.expect(";")
        elif kw == "generators":
            while True:
                n = s.ident()
                _check_name(s, n, used)
                g = Generator(n.text)
                while s.peek.text in ("odd", "weight"):
                    if s.next().text == "odd":
                        g.odd = True
                    else:
                        g.weight = _rational(s)
                spec.generators.append(g)
                if not s.at(","):
                    break
                s.next()
            s.expect(";")
        elif kw == "basis":
            spec.kind = "lie"
            for n in _name_list(s):
                _check_name(s, n, used)
                spec.basis.append(n.text)
            s.expect(";")
        elif kw == "bracket":
            name = "H"
            if s.peek.kind == "id":
                name = s.next().text
            s.expect("{")
            a = s.ident()
            s.expect(",")
            b = s.ident()
            s.expect("}")
            s.expect("=")
            pending.append(("bracket", (name, a, b), _until_semicolon(s)))
        elif kw == "define":
            n = s.ident()
            _check_name(s, n, used)
            s.expect("=")
            pending.append(("define", n, _until_semicolon(s)))
        elif kw == "constraints":
            while True:
                start = s.i
                depth = 0
                while not (s.peek.text in (",", ";") and depth == 0):
                    if s.peek.kind == "eof":
                        raise s.error("missing ';'")
                    if s.peek.text == "(":
                        depth += 1
                    elif s.peek.text == ")":
                        depth -= 1
                    s.next()
                toks = s.toks[start:s.i] + [Tok("eof", "", s.peek.line, s.peek.col)]
                pending.append(("constraint", None, _Stream(toks)))
                if s.next().text == ";":
                    break
        elif kw == "lie":
            s.expect("[")
            a = s.ident()
            s.expect(",")
            b = s.ident()
            s.expect("]")
            s.expect("=")
            pending.append(("lie", (a, b), _until_semicolon(s)))
        elif kw == "form":
            s.expect("(")
            a = s.ident()
            s.expect("|")
            b = s.ident()
            s.expect(")")
            s.expect("=")
            pending.append(("form", (a, b), _until_semicolon(s)))
        elif kw == "root":
            n = s.ident()
            s.expect("=")
            pos = s.ident()
            s.expect(",")
            neg = s.ident()
            s.expect(";")
            pending.append(("root", (n, pos, neg), None))
        else:
            raise s.error(f"unknown statement {kw!r}", t)
    _build(spec, pending)
    return spec


def _build(spec, pending):
    if spec.kind == "lie":
        alg = DiffAlgebra(spec.basis, spec.params)
        ctx = _Ctx("pva", alg=alg, params=spec.params)
        for kind, data, st in pending:
            if kind == "lie":
                a, b = data
                for t in (a, b):
                    if t.text not in spec.basis:
                        raise ParseError(f"unknown basis element {t.text!r}", t.line, t.col)
                v = _whole(st, ctx).final()
                if set(v.coeffs) - {0}:
                    raise ParseError("Lie bracket depends on l", a.line, a.col)
                vec = {}
                for m, c in v[0].terms.items():
                    if len(m) != 1 or m[0][1] != 1 or m[0][0][1] != 0:
                        raise ParseError("Lie bracket must be linear in the basis", a.line, a.col)
                    vec[spec.basis[m[0][0][0]]] = c
                spec.lie_brackets[(a.text, b.text)] = vec
            elif kind == "form":
                a, b = data
                for t in (a, b):
                    if t.text not in spec.basis:
                        raise ParseError(f"unknown basis element {t.text!r}", t.line, t.col)
                v = _whole(st, ctx)
                if not v.is_scalar():
                    raise ParseError("form value must be a constant", a.line, a.col)
                spec.form[(a.text, b.text)] = v.scalar()
            elif kind == "root":
                n, pos, neg = data
                for t in (pos, neg):
                    if t.text not in spec.basis:
                        raise ParseError(f"unknown basis element {t.text!r}", t.line, t.col)
                spec.roots[n.text] = (pos.text, neg.text)
            else:
                raise ParseError(f"{kind} statements do not belong in a Lie algebra file")
        return
    if spec.kind == "va":
        from .quantum import VertexAlgebra

        va = VertexAlgebra(spec.names(), spec.params, odd={g.name for g in spec.generators if g.odd},
                           weights={g.name: g.weight for g in spec.generators if g.weight is not None})
        spec.va = va
        declared = {}
        for kind, data, st in pending:
            if kind == "bracket":
                name, a, b = data
                _known(spec, a, b)
                ctx = _Ctx("va", va=va, defines={}, params=spec.params)
                val = _whole(st, ctx).final()
                declared.setdefault(name, {})[(a.text, b.text)] = val
        for name, table in declared.items():
            spec.brackets[name] = table
        # only the first table drives the algebra
        if declared:
            first = next(iter(declared.values()))
            for (a, b), val in first.items():
                va.set_bracket(a, b, val)
            va.complete_table()
        for kind, data, st in pending:
            if kind == "define":
                ctx = _Ctx("va", va=va, defines=va.defs, params=spec.params)
                try:
                    va.defs[data.text] = _whole(st, ctx).final_expr()
                except ValueError as e:
                    raise ParseError(str(e), data.line, data.col) from None
                spec.defines[data.text] = va.defs[data.text]
            elif kind in ("constraint", "lie", "form", "root"):
                raise ParseError(f"{kind} statements do not belong in a vertex algebra file")
        return
    alg = DiffAlgebra(spec.names(), spec.params)
    spec.alg = alg
    ctx = _Ctx("pva", alg=alg, params=spec.params)
    for kind, data, st in pending:
        if kind == "bracket":
            name, a, b = data
            _known(spec, a, b)
            spec.brackets.setdefault(name, {})[(a.text, b.text)] = _whole(st, ctx).final()
        elif kind == "constraint":
            v = _whole(st, ctx).final()
            if set(v.coeffs) - {0}:
                raise ParseError("constraints cannot depend on l")
            spec.constraints.append(v[0])
        elif kind == "define":
            raise ParseError("define is only available in vertex algebra files", data.line, data.col)
        else:
            raise ParseError(f"{kind} statements belong in a Lie algebra file")


def _known(spec, a, b):
    for t in (a, b):
        if t.text not in spec.names():
            raise ParseError(f"undeclared generator {t.text!r}", t.line, t.col)


def _whole(st, ctx):
    v = _expr(st, ctx)
    if st.peek.kind != "eof":
        raise st.error(f"unexpected {st.peek.text!r}")
    return v


def parse_file(path) -> SourceSpec:
    p = Path(path)
    kind = {".va": "va", ".lie": "lie"}.get(p.suffix)
    return parse(p.read_text(), kind)


# -- printing ---------------------------------------------------------------------------


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_source(spec: SourceSpec) -> str:
    from . import printing

    lines = []
    if spec.kind == "va":
        lines.append("vertex;")
    if spec.params:
        lines.append("params " + ", ".join(spec.params) + ";")
    if spec.kind == "lie":
        lines.append("basis " + ", ".join(spec.basis) + ";")
        F = CoeffField(tuple(spec.params))
        for (a, b), vec in spec.lie_brackets.items():
            items = [(F(c), k) for k, c in vec.items()]
            lines.append(f"lie [{a},{b}] = {printing.join_terms(items)};")
        for (a, b), c in spec.form.items():
            lines.append(f"form ({a}|{b}) = {printing.format_coeff(F(c))};")
        for n, (pos, neg) in spec.roots.items():
            lines.append(f"root {n} = {pos}, {neg};")
        return "\n".join(lines) + "\n"
    gens = []
    for g in spec.generators:
        t = g.name
        if g.odd:
            t += " odd"
        if g.weight is not None:
            t += f" weight {_fmt_rational(Fraction(g.weight))}"
        gens.append(t)
    lines.append("generators " + ", ".join(gens) + ";")
    single = len(spec.brackets) == 1 and "H" in spec.brackets
    for name, table in spec.brackets.items():
        label = "" if single else name + " "
        for (a, b), v in table.items():
            text = spec.va.format_lexpr(v) if spec.kind == "va" else str(v)
            lines.append(f"bracket {label}{{{a},{b}}} = {text};")
    if spec.constraints:
        lines.append("constraints " + ", ".join(str(c) for c in spec.constraints) + ";")
    for name, d in spec.defines.items():
        lines.append(f"define {name} = {spec.va.format_expr(d)};")
    return "\n".join(lines) + "\n"
