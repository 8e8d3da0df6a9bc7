"""q-Pochhammer symbols with signed indices, and truncated infinite products.

A factor ``1 - x`` is recorded by its argument ``x = c * m`` (a rational
coefficient times a Laurent monomial).  Multisets of such factors are merged
symbolically, so a factor that is identically zero (``x = 1``) is detected
before anything is divided.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Mapping

import flint

from .algebra.laurent import Exps, LaurentPoly, Monomial, normalize_rules, to_fmpq
from .algebra.ratfunc import RatFunc, ratfunc_from_factors
from .algebra.series import TruncatedSeries, _as_spec
from .algebra.vars import VARS
from .errors import NonTruncating, PoleError

Arg = tuple[flint.fmpq, Exps]

_ZERO_EXP = VARS.zero_exp
_Q = VARS["q"].index
_ONE_ARG: Arg = (flint.fmpq(1), _ZERO_EXP)


def as_arg(x) -> Arg:
    """Normalize a monomial expression (coefficient times monomial) to an ``Arg``."""
    if isinstance(x, tuple) and len(x) == 2 and (isinstance(x[1], Monomial) or isinstance(x[1], tuple) and len(x[1]) == VARS.nvars):
        c, m = x
        return to_fmpq(c), (m.exps if isinstance(m, Monomial) else tuple(m))
    if isinstance(x, Monomial):
        return flint.fmpq(1), x.exps
    if isinstance(x, LaurentPoly):
        if not x.is_monomial():
            raise ValueError("argument must be a single term")
        (e, c), = x.terms()
        return c, e
    return to_fmpq(x), _ZERO_EXP


def q_shift(x: Arg, i: int) -> Arg:
    c, e = x
    if not i:
        return x
    e = list(e)
    e[_Q] += i
    return c, tuple(e)


def arg_mul(x: Arg, y: Arg) -> Arg:
    return x[0] * y[0], tuple(a + b for a, b in zip(x[1], y[1]))


def arg_pow(x: Arg, k: int) -> Arg:
    return x[0] ** k, tuple(a * k for a in x[1])


def arg_poly(x: Arg) -> LaurentPoly:
    return LaurentPoly.monomial(x[1], x[0])


def _arg_key(x: Arg) -> tuple:
    return (x[1], (int(x[0].p), int(x[0].q)))


class QFactorList:
    """Multiset ``prod (1 - x)**mult`` with signed multiplicities."""

    __slots__ = ("mults",)

    def __init__(self, mults: Mapping[tuple, int] | None = None):
        # keyed by _arg_key so that equal arguments merge
        self.mults: dict[tuple, int] = {k: m for k, m in (mults or {}).items() if m}

    @classmethod
    def factor(cls, x, mult: int = 1) -> "QFactorList":
        return cls({_arg_key(as_arg(x)): mult})

    def __mul__(self, other: "QFactorList") -> "QFactorList":
        out = Counter(self.mults)
        for k, m in other.mults.items():
            out[k] += m
        return QFactorList(out)

    def inverse(self) -> "QFactorList":
        return QFactorList({k: -m for k, m in self.mults.items()})

    def __truediv__(self, other: "QFactorList") -> "QFactorList":
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        return isinstance(other, QFactorList) and self.mults == other.mults

    def __hash__(self) -> int:
        return hash(frozenset(self.mults.items()))

    def factors(self) -> list[tuple[Arg, int]]:
        return [((flint.fmpq(p, q), e), m) for (e, (p, q)), m in sorted(self.mults.items())]

    def zero_multiplicity(self) -> int:
        return self.mults.get(_arg_key(_ONE_ARG), 0)

    def is_zero(self) -> bool:
        return self.zero_multiplicity() > 0

    def to_ratfunc(self) -> RatFunc:
        z = self.zero_multiplicity()
        if z > 0:
            return RatFunc.zero()
        if z < 0:
            raise PoleError("identically zero factor in a denominator")
        return ratfunc_from_factors((1 - arg_poly(x), m) for x, m in self.factors())

    def substitute(self, rules: Mapping) -> "QFactorList":
        rules = normalize_rules(rules)
        out: Counter = Counter()
        for (c, e), m in self.factors():
            img = LaurentPoly.monomial(e, c).substitute(rules)
            out[_arg_key(as_arg(img))] += m
        return QFactorList(out)

    def __repr__(self) -> str:
        parts = [f"(1 - {arg_poly(x)})^{m}" for x, m in self.factors()]
        return "QFactorList(" + " * ".join(parts) + ")"


class _Zero:
    """Marker for a summand that vanishes identically."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "ZERO"

    def __bool__(self) -> bool:
        return False


ZERO = _Zero()


def qpoch(x, n: int) -> QFactorList:
    """``(x)_n`` for any integer ``n``; negative ``n`` gives ``1/prod_{i=1}^{-n} (1 - x q^-i)``."""
    a = as_arg(x)
    out: Counter = Counter()
    if n >= 0:
        for i in range(n):
            out[_arg_key(q_shift(a, i))] += 1
    else:
        for i in range(1, -n + 1):
            out[_arg_key(q_shift(a, -i))] -= 1
    return QFactorList(out)


def qfactor_ratio(num: Iterable[QFactorList], den: Iterable[QFactorList] = ()):
    """Merge factor lists and convert: a RatFunc, ``ZERO``, or ``PoleError``."""
    acc = QFactorList()
    for f in num:
        acc = acc * f
    for f in den:
        acc = acc / f
    z = acc.zero_multiplicity()
    if z > 0:
        return ZERO
    if z < 0:
        raise PoleError("a vanishing factor has net negative multiplicity")
    return acc.to_ratfunc()


def qpoch_ratfunc(x, n: int) -> RatFunc:
    """``(x)_n`` as a rational function (``PoleError`` if it has a zero denominator)."""
    return qpoch(x, n).to_ratfunc()


# -- truncated infinite products ---------------------------------------------


def _check_positive(dv: tuple[int, ...]) -> bool:
    return all(d >= 0 for d in dv) and any(d > 0 for d in dv)


def phi_truncated(x, caps) -> TruncatedSeries:
    """``phi(x) = prod_{i>=0} (1 - x q^i)`` truncated at ``caps``.

    When ``q`` itself is capped the product has finitely many nontrivial
    factors.  Otherwise ``x`` must have positive capped degree and Euler's
    expansion ``sum_n (-1)^n q^(n(n-1)/2) x^n / (q)_n`` is used.
    """
    spec = _as_spec(caps)
    a = as_arg(x)
    dx = spec.degvec(a[1])
    dq = spec.degvec(q_shift(_ONE_ARG, 1)[1])
    if _check_positive(dq) and all(d >= 0 for d in dx):
        out = TruncatedSeries.one(spec)
        i = 0
        while spec.within(tuple(u + i * v for u, v in zip(dx, dq))):
            out = out * TruncatedSeries.from_poly(1 - arg_poly(q_shift(a, i)), spec)
            i += 1
        return out
    if not _check_positive(dx):
        raise NonTruncating(f"phi({arg_poly(a)}) does not truncate under caps [{spec}]")
    return _euler_sum(a, spec, lambda n: (-1) ** n * _qpow(n * (n - 1) // 2), dx)


def phi_inverse_truncated(x, caps) -> TruncatedSeries:
    """``1/phi(x) = sum_n x^n / (q)_n`` truncated at ``caps``."""
    spec = _as_spec(caps)
    a = as_arg(x)
    dx = spec.degvec(a[1])
    if not _check_positive(dx):
        raise NonTruncating(f"1/phi({arg_poly(a)}) does not truncate under caps [{spec}]")
    return _euler_sum(a, spec, lambda n: RatFunc.one(), dx)


def phi_ratio_truncated(num_x, x, caps) -> TruncatedSeries:
    """``phi(b x)/phi(x) = sum_n (b)_n/(q)_n x^n`` (q-binomial theorem) with ``num_x = b x``."""
    spec = _as_spec(caps)
    a, ax = as_arg(x), as_arg(num_x)
    dx = spec.degvec(a[1])
    if not _check_positive(dx):
        raise NonTruncating(f"phi ratio in {arg_poly(a)} does not truncate under caps [{spec}]")
    b = (ax[0] / a[0], tuple(u - v for u, v in zip(ax[1], a[1])))
    if any(d for d in spec.degvec(b[1])):
        raise ValueError("the two arguments must differ by a factor free of capped variables")
    return _euler_sum(a, spec, lambda n: qpoch_ratfunc(b, n), dx)


def _qpow(k: int) -> RatFunc:
    return RatFunc(LaurentPoly.monomial(q_shift(_ONE_ARG, k)[1]))


def _euler_sum(a: Arg, spec, weight, dx) -> TruncatedSeries:
    terms = TruncatedSeries.zero(spec)
    n = 0
    while spec.within(tuple(n * d for d in dx)):
        coeff = weight(n) / qpoch_ratfunc(q_shift(_ONE_ARG, 1), n)
        xn = arg_pow(a, n)
        terms = terms + TruncatedSeries.from_poly(LaurentPoly.monomial(xn[1], xn[0]), spec).scale(coeff)
        n += 1
    return terms


class PhiProduct:
    """Formal product ``prod phi(x)**mult`` over a multiset of arguments."""

    __slots__ = ("mults",)

    def __init__(self, mults: Mapping[tuple, int] | None = None):
        self.mults: dict[tuple, int] = {k: m for k, m in (mults or {}).items() if m}

    @classmethod
    def phi(cls, x, mult: int = 1) -> "PhiProduct":
        return cls({_arg_key(as_arg(x)): mult})

    def __mul__(self, other: "PhiProduct") -> "PhiProduct":
        out = Counter(self.mults)
        for k, m in other.mults.items():
            out[k] += m
        return PhiProduct(out)

    def inverse(self) -> "PhiProduct":
        return PhiProduct({k: -m for k, m in self.mults.items()})

    def __truediv__(self, other: "PhiProduct") -> "PhiProduct":
        return self * other.inverse()

    def args(self) -> list[tuple[Arg, int]]:
        return [((flint.fmpq(p, q), e), m) for (e, (p, q)), m in sorted(self.mults.items())]

    def substitute(self, rules: Mapping) -> "PhiProduct":
        rules = normalize_rules(rules)
        out: Counter = Counter()
        for (c, e), m in self.args():
            img = LaurentPoly.monomial(e, c).substitute(rules)
            out[_arg_key(as_arg(img))] += m
        return PhiProduct(out)

    def collapse(self) -> QFactorList:
        """Rewrite as finitely many Pochhammer factors, if possible.

        Uses ``phi(y q^m) = phi(y) / (y)_m``.  Arguments are grouped by their
        class modulo powers of ``q``; within a class the multiplicities must
        sum to zero, otherwise an infinite product remains and ``ValueError``
        is raised.
        """
        classes: dict[tuple, list[tuple[Arg, int]]] = {}
        for (c, e), m in self.args():
            base = list(e)
            base[_Q] = 0
            classes.setdefault(((int(c.p), int(c.q)), tuple(base)), []).append(((c, e), m))
        out = QFactorList()
        for (_, base), items in sorted(classes.items()):
            if sum(m for _, m in items) != 0:
                raise ValueError("phi product does not collapse to finitely many factors")
            c = items[0][0][0]
            y = (c, base)
            for (_, e), m in items:
                out = out * QFactorList({k: -m * v for k, v in qpoch(y, e[_Q]).mults.items()})
        return out

    def truncated(self, caps) -> TruncatedSeries:
        """Series expansion, pairing each argument with ``phi`` or ``1/phi``."""
        spec = _as_spec(caps)
        out = TruncatedSeries.one(spec)
        for x, m in self.args():
            f = phi_truncated(x, spec) if m > 0 else phi_inverse_truncated(x, spec)
            for _ in range(abs(m)):
                out = out * f
        return out

    def __repr__(self) -> str:
        return "PhiProduct(" + " * ".join(f"phi({arg_poly(x)})^{m}" for x, m in self.args()) + ")"
