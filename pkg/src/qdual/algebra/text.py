"""Canonical text form for polynomials, rational functions and series.

Terms are written largest first in the graded-lex order, every coefficient
as ``p/q`` and every variable by its registered name, e.g.::

    1/1*q^2*x_1 - 3/2*t + 1/1

The parser accepts that form plus a few conveniences (bare integers, implicit
unit coefficients).  Parentheses are not supported.
"""

from __future__ import annotations

import re

import flint

from .laurent import Exps, LaurentPoly, format_monomial, term_order_key
from .vars import VARS


def format_coeff(c: flint.fmpq) -> str:
    return f"{c.p}/{c.q}"


def format_terms(terms: list[tuple[Exps, flint.fmpq]]) -> str:
    if not terms:
        return "0"
    terms = sorted(terms, key=lambda t: term_order_key(t[0]))
    out = []
    for n, (e, c) in enumerate(terms):
        neg = c < 0
        body = format_coeff(-c if neg else c)
        m = format_monomial(e)
        if m:
            body += "*" + m
        if n == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_laurent(p: LaurentPoly) -> str:
    return format_terms(list(p.terms()))


_FACTOR = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def _split_terms(text: str) -> list[str]:
    text = text.strip()
    parts, cur, prev = [], "", ""
    for ch in text:
        # a sign starts a new term unless it follows '^' (negative exponent)
        if ch in "+-" and cur.strip() and prev != "^":
            parts.append(cur)
            cur = ch
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    if cur.strip():
        parts.append(cur)
    return parts


def parse_laurent(text: str) -> LaurentPoly:
    """Inverse of :func:`format_laurent`."""
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero()
    terms: dict[Exps, flint.fmpq] = {}
    for raw in _split_terms(text):
        s = raw.replace(" ", "")
        sign = 1
        while s and s[0] in "+-":
            if s[0] == "-":
                sign = -sign
            s = s[1:]
        if not s:
            raise ValueError(f"empty term in {text!r}")
        coeff = flint.fmpq(sign)
        exps = [0] * VARS.nvars
        for f in s.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", f):
                num, _, den = f.partition("/")
                coeff *= flint.fmpq(int(num), int(den or 1))
                continue
            m = _FACTOR.match(f)
            if not m:
                raise ValueError(f"cannot parse factor {f!r}")
            exps[VARS[m.group(1)].index] += int(m.group(2) or 1)
        key = tuple(exps)
        terms[key] = terms.get(key, flint.fmpq(0)) + coeff
    return LaurentPoly.from_terms(terms)


def format_ratfunc(f) -> str:
    """``num`` alone, or ``(num)/(f1)^m1*(f2)^m2`` with factors sorted by text."""
    num = format_laurent(f.num)
    if not f.den:
        return num
    parts = []
    for fac, m in sorted((format_laurent(p), m) for p, m in f.den_factors()):
        parts.append(f"({fac})" if m == 1 else f"({fac})^{m}")
    return f"({num})/" + "*".join(parts)


def format_series(s) -> str:
    """Ascending terms ``(coeff)*monomial`` followed by the cap marker."""
    parts = []
    for e in s.monomials():
        coeff = format_ratfunc(s.coefficient(e))
        m = format_monomial(e)
        parts.append(f"({coeff})*{m}" if m else f"({coeff})")
    body = " + ".join(parts) if parts else "0"
    return f"{body} + O({s.spec})"


def _top_level_split(text: str, sep: str) -> list[str]:
    """Split on ``sep`` where it occurs outside parentheses."""
    out, depth, start, i = [], 0, 0, 0
    while i < len(text):
        if depth == 0 and text.startswith(sep, i):
            out.append(text[start:i])
            i += len(sep)
            start = i
            continue
        depth += {"(": 1, ")": -1}.get(text[i], 0)
        i += 1
    out.append(text[start:])
    return out


def _group(text: str) -> tuple[str, str]:
    """Split ``(inner)rest`` into ``inner`` and ``rest``."""
    if not text.startswith("("):
        raise ValueError(f"expected '(' at {text[:30]!r}")
    depth = 0
    for i, ch in enumerate(text):
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if depth == 0:
            return text[1:i], text[i + 1 :]
    raise ValueError(f"unbalanced parentheses in {text[:30]!r}")


def parse_ratfunc(text: str):
    """Inverse of :func:`format_ratfunc`."""
    from .ratfunc import RatFunc, ratfunc_from_factors

    text = text.strip()
    if not text.startswith("("):
        return RatFunc(parse_laurent(text))
    num, rest = _group(text)
    if not rest.startswith("/"):
        raise ValueError(f"expected '/' after the numerator in {text[:40]!r}")
    pairs = [(parse_laurent(num), 1)]
    for fac in _top_level_split(rest[1:], "*"):
        inner, power = _group(fac.strip())
        pairs.append((parse_laurent(inner), -int(power[1:]) if power.startswith("^") else -1))
    return ratfunc_from_factors(pairs)


def parse_caps(text: str) -> dict[str, int]:
    caps = {}
    for item in text.split(","):
        key, _, cap = item.strip().partition("<=")
        caps[key.strip()] = int(cap)
    return caps


def parse_series(text: str):
    """Inverse of :func:`format_series`."""
    from .laurent import Monomial
    from .series import CapSpec, TruncatedSeries

    parts = [p.strip() for p in _top_level_split(text.strip(), " + ")]
    tail = parts.pop()
    if not (tail.startswith("O(") and tail.endswith(")")):
        raise ValueError("series text must end with an O(...) cap marker")
    spec = CapSpec(parse_caps(tail[2:-1]))
    out = TruncatedSeries.zero(spec)
    if parts == ["0"]:
        return out
    for term in parts:
        inner, rest = _group(term)
        mono = Monomial(parse_laurent(rest[1:]).leading()[0]) if rest.startswith("*") else Monomial.one()
        out = out + TruncatedSeries.from_scalar(parse_ratfunc(inner), spec).shift_by(mono)
    return out
