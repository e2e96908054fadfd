"""Canonical text rendering shared by every module.

The output is valid input for the grammar in :mod:`pvakit.parser`, so
parse(print(x)) == x holds for everything printed here.
"""

from __future__ import annotations

from fractions import Fraction


def _rat(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _poly_terms(poly, params):
    """Terms of a parameter polynomial, highest lex monomial first."""
    out = []
    for mon, c in sorted(poly.terms(), key=lambda t: t[0], reverse=True):
        out.append((_rat(c), mon))
    return out


def _param_mono(mon, params):
    parts = []
    for name, e in zip(params, mon):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _signed_poly(poly, params):
    """Render a parameter polynomial as a sum; returns text without outer parens."""
    pieces = []
    for k, (q, mon) in enumerate(_poly_terms(poly, params)):
        m = _param_mono(mon, params)
        neg = q < 0
        a = -q if neg else q
        if m:
            body = m if a == 1 else f"{_frac(a)}*{m}"
        else:
            body = _frac(a)
        if k == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces) if pieces else "0"


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def coeff_factor(c):
    """Split a nonzero coefficient into (negative, text) for use as a product factor.

    ``text`` is empty when the coefficient is +-1.
    """
    params = c.field.params
    num_terms = _poly_terms(c.num, params)
    den_is_one = c.den == 1
    if len(num_terms) == 1:
        q, mon = num_terms[0]
        neg = q < 0
        a = -q if neg else q
        m = _param_mono(mon, params)
        if den_is_one:
            if not m:
                return neg, "" if a == 1 else _frac(a)
            return neg, m if a == 1 else f"{_frac(a)}*{m}"
        top = str(a.numerator) if not m else (m if a.numerator == 1 else f"{a.numerator}*{m}")
        return neg, f"{top}/{_den_text(c.den, params, scale=a.denominator)}"
    body = f"({_signed_poly(c.num, params)})"
    if not den_is_one:
        body += f"/{_den_text(c.den, params)}"
    return False, body


def _den_text(den, params, scale=1):
    if scale != 1:
        den = den * scale
    terms = _poly_terms(den, params)
    if len(terms) == 1:
        q, mon = terms[0]
        m = _param_mono(mon, params)
        if not m:
            return _frac(q)
        if q == 1:
            return m if "*" not in m else f"({m})"
        return f"({_frac(q)}*{m})"
    return f"({_signed_poly(den, params)})"


def format_coeff(c) -> str:
    if c.is_zero():
        return "0"
    neg, text = coeff_factor(c)
    return ("-" if neg else "") + (text or "1")


def var_name(names, i, n) -> str:
    g = names[i]
    if n <= 3:
        return g + "'" * n
    return f"{g}^({n})"


def format_monomial(names, mono) -> str:
    parts = []
    for (i, n), e in mono:
        v = var_name(names, i, n)
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def join_terms(items) -> str:
    """items: iterable of (coeff, body) with body possibly ''."""
    out = []
    for c, body in items:
        neg, text = coeff_factor(c)
        if body and text:
            piece = f"{text}*{body}"
        else:
            piece = body or text or "1"
        if not out:
            out.append(("-" if neg else "") + piece)
        else:
            out.append((" - " if neg else " + ") + piece)
    return "".join(out) if out else "0"


def lambda_power(sym: str, k: int) -> str:
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"
