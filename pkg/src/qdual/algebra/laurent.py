"""Sparse multivariate Laurent polynomials with exact rational coefficients.

A ``LaurentPoly`` is stored as ``poly * x**shift`` where ``poly`` is a flint
``fmpq_mpoly`` with no monomial content.  That split is canonical, so two
equal Laurent polynomials always have identical ``(poly, shift)`` pairs.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

import flint

from .vars import CTX, VARS, VarId

Exps = tuple[int, ...]
_N = VARS.nvars
_ZERO_EXP: Exps = VARS.zero_exp


def to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, (Fraction, Rational)):
        return flint.fmpq(int(c.numerator), int(c.denominator))
    if isinstance(c, flint.fmpz):
        return flint.fmpq(c)
    raise TypeError(f"not an exact rational: {c!r}")


def _var_index(v) -> int:
    if isinstance(v, VarId):
        return v.index
    if isinstance(v, int):
        return v
    return VARS[v].index


class Monomial:
    """Laurent monomial: a dense exponent vector over the variable table."""

    __slots__ = ("exps", "_hash")

    def __init__(self, exps: Exps = _ZERO_EXP):
        if len(exps) != _N:
            raise ValueError("exponent vector has wrong length")
        self.exps = tuple(exps)
        self._hash = hash(self.exps)

    @classmethod
    def of(cls, mapping: Mapping | None = None, **kw: int) -> "Monomial":
        """Build from ``{name_or_var: exponent}`` and/or keyword exponents."""
        e = [0] * _N
        items = list((mapping or {}).items()) + list(kw.items())
        for v, k in items:
            e[_var_index(v)] += int(k)
        return cls(tuple(e))

    @classmethod
    def one(cls) -> "Monomial":
        return cls(_ZERO_EXP)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a - b for a, b in zip(self.exps, other.exps)))

    def __pow__(self, k: int) -> "Monomial":
        return Monomial(tuple(a * k for a in self.exps))

    def inverse(self) -> "Monomial":
        return Monomial(tuple(-a for a in self.exps))

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return self._hash

    def is_one(self) -> bool:
        return not any(self.exps)

    def items(self) -> Iterator[tuple[VarId, int]]:
        for i, e in enumerate(self.exps):
            if e:
                yield VARS.by_index(i), e

    def degree(self, indices: Iterable[int] | None = None) -> int:
        if indices is None:
            return sum(self.exps)
        return sum(self.exps[i] for i in indices)

    def exponent(self, v) -> int:
        return self.exps[_var_index(v)]

    def variables(self) -> set[int]:
        return {i for i, e in enumerate(self.exps) if e}

    def __repr__(self) -> str:
        return f"Monomial({format_monomial(self.exps) or '1'})"

    def __str__(self) -> str:
        return format_monomial(self.exps) or "1"


def format_monomial(exps: Exps) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e:
            name = VARS.by_index(i).name
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def term_order_key(exps: Exps) -> tuple:
    """Sort key for the graded-lex order, largest monomial first."""
    return (-sum(exps), tuple(-e for e in exps))


def _mono_poly(exps: Exps, coeff=1) -> flint.fmpq_mpoly:
    return CTX.term(coeff=to_fmpq(coeff), exp_vec=exps)


class LaurentPoly:
    """Immutable Laurent polynomial over Q in the global variable table."""

    __slots__ = ("poly", "shift", "_key")

    def __init__(self, poly: flint.fmpq_mpoly | None = None, shift: Exps = _ZERO_EXP, *, _canonical=False):
        if poly is None:
            poly = CTX.from_dict({})
        if not _canonical and not poly.is_zero():
            content = poly.term_content().monoms()[0]
            if any(content):
                poly = poly / CTX.term(exp_vec=content)
                shift = tuple(a + b for a, b in zip(shift, content))
        if poly.is_zero():
            shift = _ZERO_EXP
        self.poly = poly
        self.shift = tuple(shift)
        self._key = None

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls(CTX.from_dict({}), _canonical=True)

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls.const(1)

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        c = to_fmpq(c)
        return cls(CTX.constant(c), _canonical=True)

    @classmethod
    def var(cls, v) -> "LaurentPoly":
        e = [0] * _N
        e[_var_index(v)] = 1
        return cls.monomial(Monomial(tuple(e)))

    @classmethod
    def monomial(cls, m: Monomial | Exps, coeff=1) -> "LaurentPoly":
        exps = m.exps if isinstance(m, Monomial) else tuple(m)
        coeff = to_fmpq(coeff)
        if coeff == 0:
            return cls.zero()
        return cls(CTX.constant(coeff), exps, _canonical=True)

    @classmethod
    def from_terms(cls, terms: Mapping[Exps, object]) -> "LaurentPoly":
        items = [(e, to_fmpq(c)) for e, c in terms.items() if c != 0]
        if not items:
            return cls.zero()
        cols = list(zip(*(e for e, _ in items)))
        low = tuple(min(col) for col in cols)
        if any(low):
            d = {tuple(a - b for a, b in zip(e, low)): c for e, c in items}
        else:
            d = dict(items)
        return cls(CTX.from_dict(d), low, _canonical=True)

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, Monomial):
            return cls.monomial(x)
        return cls.const(x)

    # -- inspection ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_one(self) -> bool:
        return not any(self.shift) and self.poly.is_one()

    def is_constant(self) -> bool:
        return not any(self.shift) and self.poly.is_constant()

    def is_monomial(self) -> bool:
        return len(self.poly) == 1

    def __len__(self) -> int:
        return len(self.poly)

    def terms(self) -> Iterator[tuple[Exps, flint.fmpq]]:
        s = self.shift
        if any(s):
            for e, c in self.poly.terms():
                yield tuple(a + b for a, b in zip(e, s)), c
        else:
            yield from self.poly.terms()

    def term_dict(self) -> dict[Exps, flint.fmpq]:
        return dict(self.terms())

    def constant_value(self) -> flint.fmpq:
        if not self.is_constant():
            raise ValueError("not a constant")
        if self.is_zero():
            return flint.fmpq(0)
        return self.poly.leading_coefficient()

    def leading(self) -> tuple[Exps, flint.fmpq]:
        """Leading term in the graded-lex order (largest first)."""
        if self.is_zero():
            raise ValueError("zero polynomial has no leading term")
        e = self.poly.monoms()[0]
        return tuple(a + b for a, b in zip(e, self.shift)), self.poly.leading_coefficient()

    def variables(self) -> set[int]:
        degs = self.poly.degrees()
        out = {i for i, d in enumerate(degs) if d}
        out |= {i for i, s in enumerate(self.shift) if s}
        return out

    def involves(self, indices: Iterable[int]) -> bool:
        vs = self.variables()
        return any(i in vs for i in indices)

    def coefficient(self, m: Monomial | Exps) -> flint.fmpq:
        exps = m.exps if isinstance(m, Monomial) else tuple(m)
        e = tuple(a - b for a, b in zip(exps, self.shift))
        if min(e) < 0:
            return flint.fmpq(0)
        return self.poly[e]

    # -- arithmetic ---------------------------------------------------
    def _aligned(self, other: "LaurentPoly"):
        s = tuple(min(a, b) for a, b in zip(self.shift, other.shift))
        p = self.poly
        if self.shift != s:
            p = p * CTX.term(exp_vec=tuple(a - b for a, b in zip(self.shift, s)))
        r = other.poly
        if other.shift != s:
            r = r * CTX.term(exp_vec=tuple(a - b for a, b in zip(other.shift, s)))
        return p, r, s

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        p, r, s = self._aligned(other)
        return LaurentPoly(p + r, s)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(-self.poly, self.shift, _canonical=True)

    def __sub__(self, other) -> "LaurentPoly":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, Monomial):
            if self.is_zero():
                return self
            return LaurentPoly(self.poly, tuple(a + b for a, b in zip(self.shift, other.exps)), _canonical=True)
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero()
        # content-free times content-free stays content-free
        return LaurentPoly(self.poly * other.poly, tuple(a + b for a, b in zip(self.shift, other.shift)), _canonical=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self.terms()
            return LaurentPoly.monomial(tuple(a * k for a in e), c ** k)
        return LaurentPoly(self.poly ** k, tuple(a * k for a in self.shift), _canonical=True)

    def __truediv__(self, other):
        from .ratfunc import RatFunc

        if isinstance(other, Monomial):
            return self * other.inverse()
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if other.is_constant():
            return self.scale(1 / other.constant_value())
        if other.is_monomial():
            return self * other**-1
        return RatFunc.fraction(self, other)

    def __rtruediv__(self, other):
        from .ratfunc import RatFunc

        return RatFunc.coerce(other) / RatFunc(self)

    def scale(self, c) -> "LaurentPoly":
        c = to_fmpq(c)
        if c == 0:
            return LaurentPoly.zero()
        return LaurentPoly(self.poly * c, self.shift, _canonical=True)

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises ``ArithmeticError`` when ``other`` does not divide."""
        q, r = divmod(self.poly, other.poly)
        if not r.is_zero():
            raise ArithmeticError("inexact division")
        return LaurentPoly(q, tuple(a - b for a, b in zip(self.shift, other.shift)))

    def divides(self, other: "LaurentPoly") -> bool:
        return divmod(other.poly, self.poly)[1].is_zero()

    # -- comparison ---------------------------------------------------
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.shift, self.poly.str())
        return self._key

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.shift == other.shift and self.poly == other.poly
        try:
            return self == LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key())

    # -- substitution -------------------------------------------------
    def substitute(self, rules: Mapping) -> "LaurentPoly":
        """Monomial substitution ``var -> coeff * monomial`` (a ring homomorphism)."""
        rules = normalize_rules(rules)
        if not rules or not self.involves(rules):
            return self
        return LaurentPoly.from_terms(substitute_terms(self.terms(), rules))

    def __repr__(self) -> str:
        from .text import format_laurent

        return f"LaurentPoly({format_laurent(self)})"

    def __str__(self) -> str:
        from .text import format_laurent

        return format_laurent(self)


def _coerce_or_none(x):
    try:
        return LaurentPoly.coerce(x)
    except TypeError:
        return None


Rule = tuple[flint.fmpq, Exps]


def normalize_rules(rules: Mapping) -> dict[int, Rule]:
    """Accept ``{var: LaurentPoly monomial | Monomial | (coeff, Monomial) | scalar}``."""
    out: dict[int, Rule] = {}
    for v, img in rules.items():
        i = _var_index(v)
        if isinstance(img, tuple):
            c, m = img
            c = to_fmpq(c)
            exps = m.exps if isinstance(m, Monomial) else tuple(m)
        elif isinstance(img, Monomial):
            c, exps = flint.fmpq(1), img.exps
        elif isinstance(img, LaurentPoly):
            if not img.is_monomial():
                raise ValueError("substitution image must be a single term")
            (exps, c), = img.terms()
        else:
            c, exps = to_fmpq(img), _ZERO_EXP
        if c == 0:
            raise ValueError("substitution coefficient must be nonzero")
        e = [0] * _N
        e[i] = 1
        if c == 1 and tuple(e) == exps:
            continue
        out[i] = (c, exps)
    return out


def substitute_terms(terms: Iterable[tuple[Exps, flint.fmpq]], rules: dict[int, Rule]) -> dict[Exps, flint.fmpq]:
    acc: dict[Exps, flint.fmpq] = {}
    idx = list(rules)
    for e, c in terms:
        new = list(e)
        coeff = c
        for i in idx:
            k = e[i]
            if k:
                rc, rexp = rules[i]
                new[i] -= k
                if rc != 1:
                    coeff = coeff * rc ** k
                for j, x in enumerate(rexp):
                    if x:
                        new[j] += k * x
        key = tuple(new)
        prev = acc.get(key)
        acc[key] = coeff if prev is None else prev + coeff
    return {k: v for k, v in acc.items() if v != 0}


def var(name: str) -> LaurentPoly:
    return LaurentPoly.var(name)


def mono(**kw: int) -> Monomial:
    return Monomial.of(**kw)
