"""Rational functions with factored denominators.

A ``RatFunc`` is ``num / prod(f**m)`` where ``num`` is a Laurent polynomial
and each ``f`` is an irreducible, monic polynomial with no monomial content.
Every constructor cancels common factors, so the representation is reduced
and two equal rational functions have identical fields.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import flint

from .laurent import LaurentPoly, normalize_rules, to_fmpq
from .vars import CTX

Poly = flint.fmpq_mpoly
# key -> (factor, multiplicity); keys are the factors' flint string forms
DenDict = dict[str, tuple[Poly, int]]

_factor_cache: dict[str, tuple[flint.fmpq, tuple[tuple[Poly, int], ...]]] = {}


def factor_poly(p: Poly) -> tuple[flint.fmpq, tuple[tuple[Poly, int], ...]]:
    """Cached flint factorization: ``p = c * prod(f**m)`` with monic ``f``."""
    key = p.str()
    hit = _factor_cache.get(key)
    if hit is None:
        c, facs = p.factor()
        hit = (flint.fmpq(c), tuple((f, int(m)) for f, m in facs))
        _factor_cache[key] = hit
    return hit


def _strip_monomials(facs: Iterable[tuple[Poly, int]]):
    """Split off monomial factors, which belong in a Laurent shift."""
    shift = None
    rest = []
    for f, m in facs:
        if len(f) == 1:
            e = tuple(x * m for x in f.monoms()[0])
            shift = e if shift is None else tuple(a + b for a, b in zip(shift, e))
        else:
            rest.append((f, m))
    return shift, rest


def _cancel(num: Poly, den: DenDict) -> tuple[Poly, DenDict]:
    out: DenDict = {}
    for key, (f, m) in den.items():
        while m and num.total_degree() >= f.total_degree():
            q, r = divmod(num, f)
            if not r.is_zero():
                break
            num = q
            m -= 1
        if m:
            out[key] = (f, m)
    return num, out


def _den_product(den: DenDict, exclude: DenDict | None = None) -> Poly:
    acc = CTX.constant(1)
    for key, (f, m) in den.items():
        k = m - (exclude[key][1] if exclude and key in exclude else 0)
        if k:
            acc *= f**k
    return acc


class RatFunc:
    """Immutable reduced fraction ``num / den``."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, num: LaurentPoly, den: DenDict | None = None, *, _reduced: bool = False):
        if not isinstance(num, LaurentPoly):
            raise TypeError(f"RatFunc numerator must be a LaurentPoly, not {type(num).__name__}; use RatFunc.coerce")
        den = den or {}
        if num.is_zero():
            den = {}
        elif den and not _reduced:
            p, den = _cancel(num.poly, den)
            num = LaurentPoly(p, num.shift, _canonical=True)
        self.num = num
        self.den = den
        self._key = None

    # -- construction -------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return cls(LaurentPoly.coerce(x))

    @classmethod
    def zero(cls) -> "RatFunc":
        return cls(LaurentPoly.zero())

    @classmethod
    def one(cls) -> "RatFunc":
        return cls(LaurentPoly.one())

    @classmethod
    def fraction(cls, num, den) -> "RatFunc":
        """Build ``num / den`` from two Laurent polynomials (or scalars)."""
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        return cls(num) * cls._inverse_of_poly(den)

    @classmethod
    def _inverse_of_poly(cls, p: LaurentPoly) -> "RatFunc":
        if p.is_monomial():
            return cls(p**-1, _reduced=True)
        c, facs = factor_poly(p.poly)
        shift, facs = _strip_monomials(facs)
        num = LaurentPoly.monomial(tuple(-s for s in p.shift), 1 / c)
        if shift is not None:
            num = LaurentPoly.monomial(tuple(-s for s in shift)) * num
        den: DenDict = {}
        for f, m in facs:
            key = f.str()
            den[key] = (f, den[key][1] + m if key in den else m)
        return cls(num, den, _reduced=True)

    # -- inspection ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def is_constant(self) -> bool:
        return not self.den and self.num.is_constant()

    def constant_value(self) -> flint.fmpq:
        if self.den:
            raise ValueError("not a constant")
        return self.num.constant_value()

    def numerator(self) -> LaurentPoly:
        return self.num

    def denominator(self) -> LaurentPoly:
        return LaurentPoly(_den_product(self.den), _canonical=True)

    def den_factors(self) -> list[tuple[LaurentPoly, int]]:
        """Irreducible denominator factors in canonical order."""
        return [(LaurentPoly(f, _canonical=True), m) for _, (f, m) in sorted(self.den.items())]

    def variables(self) -> set[int]:
        out = self.num.variables()
        for f, _ in self.den.values():
            out |= {i for i, d in enumerate(f.degrees()) if d}
        return out

    def as_poly(self) -> LaurentPoly:
        if self.den:
            raise ValueError("not a Laurent polynomial")
        return self.num

    # -- arithmetic ---------------------------------------------------
    def __mul__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFunc.zero()
        if not self.den and not other.den:
            return RatFunc(self.num * other.num, _reduced=True)
        # each numerator is already coprime to its own denominator
        a, rest_b = _cancel(self.num.poly, other.den) if other.den else (self.num.poly, {})
        b, rest_a = _cancel(other.num.poly, self.den) if self.den else (other.num.poly, {})
        den = dict(rest_a)
        for k, (f, m) in rest_b.items():
            den[k] = (f, den[k][1] + m) if k in den else (f, m)
        shift = tuple(x + y for x, y in zip(self.num.shift, other.num.shift))
        return RatFunc(LaurentPoly(a * b, shift, _canonical=True), den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        inv = RatFunc._inverse_of_poly(self.num)
        if not self.den:
            return inv
        return RatFunc(inv.num * LaurentPoly(_den_product(self.den), _canonical=True), inv.den, _reduced=True)

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFunc.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _reduced=True)

    def __add__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if not self.den and not other.den:
            return RatFunc(self.num + other.num, _reduced=True)
        lcm: DenDict = dict(self.den)
        for k, (f, m) in other.den.items():
            if k not in lcm or lcm[k][1] < m:
                lcm[k] = (f, m)
        a = self.num * LaurentPoly(_den_product(lcm, self.den), _canonical=True)
        b = other.num * LaurentPoly(_den_product(lcm, other.den), _canonical=True)
        return RatFunc(a + b, lcm)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) - self

    def scale(self, c) -> "RatFunc":
        c = to_fmpq(c)
        return RatFunc(self.num.scale(c), self.den if c != 0 else {}, _reduced=True)

    # -- comparison ---------------------------------------------------
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.num.key(), tuple((k, m) for k, (_, m) in sorted(self.den.items())))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    # -- substitution -------------------------------------------------
    def substitute(self, rules: Mapping) -> "RatFunc":
        rules = normalize_rules(rules)
        if not rules:
            return self
        touched = set(rules)
        out = RatFunc(self.num.substitute(rules))
        if out.is_zero():
            return out
        untouched: DenDict = {}
        for k, (f, m) in self.den.items():
            if any(f.degrees()[i] for i in touched):
                img = LaurentPoly(f, _canonical=True).substitute(rules)
                if img.is_zero():
                    raise ZeroDivisionError(f"substitution kills denominator factor {f}")
                out = out * RatFunc._inverse_of_poly(img) ** m
            else:
                untouched[k] = (f, m)
        if untouched:
            out = out * RatFunc(LaurentPoly.one(), untouched, _reduced=True)
        return out

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        from .text import format_ratfunc

        return format_ratfunc(self)


def _coerce_or_none(x):
    try:
        return RatFunc.coerce(x)
    except TypeError:
        return None


def ratfunc_from_factors(pairs: Iterable[tuple[LaurentPoly, int]], const=1) -> RatFunc:
    """``const * prod(p**m)`` for Laurent polynomials ``p`` and signed ``m``.

    Every ``p`` is factored (cached) and the irreducible factors are merged
    before anything is expanded, so the result is reduced without any
    polynomial division.
    """
    c = to_fmpq(const)
    shift = [0] * len(CTX.gens())
    net: dict[str, list] = {}
    for p, m in pairs:
        if m == 0:
            continue
        if p.is_zero():
            if m < 0:
                raise ZeroDivisionError("zero factor in a denominator")
            return RatFunc.zero()
        for i, x in enumerate(p.shift):
            if x:
                shift[i] += x * m
        if p.poly.is_constant():
            c *= p.poly.leading_coefficient() ** m
            continue
        pc, facs = factor_poly(p.poly)
        c *= pc**m
        for f, k in facs:
            if len(f) == 1:
                for i, x in enumerate(f.monoms()[0]):
                    shift[i] += x * k * m
                continue
            key = f.str()
            if key in net:
                net[key][1] += k * m
            else:
                net[key] = [f, k * m]
    num = CTX.constant(c)
    den: DenDict = {}
    for key, (f, k) in net.items():
        if k > 0:
            num *= f**k
        elif k < 0:
            den[key] = (f, -k)
    return RatFunc(LaurentPoly(num, tuple(shift)), den, _reduced=True)


def ratfunc_equal(f: RatFunc, g: RatFunc) -> bool:
    """Equality by cross-multiplication, independent of canonical forms."""
    f, g = RatFunc.coerce(f), RatFunc.coerce(g)
    lhs = f.num * g.denominator()
    rhs = g.num * f.denominator()
    return (lhs - rhs).is_zero()

