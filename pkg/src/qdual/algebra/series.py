"""Truncated multivariate series with per-group degree caps.

The capped variables are grouped under *cap keys*: a variable's key is its own
name when that name carries a cap, otherwise its group tag.  A series stores
the coefficient of each capped monomial as a Laurent polynomial in the
remaining variables, all over one shared factored denominator.  Terms whose
degree in some key exceeds that key's cap are dropped.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Union

import flint

from ..errors import CapViolation, NonExpandablePole
from .laurent import Exps, LaurentPoly, Monomial, normalize_rules, substitute_terms
from .ratfunc import DenDict, RatFunc, _cancel, _den_product
from .vars import VARS, Group

CapKey = Union[Group, str]
DegVec = tuple[int, ...]
_N = VARS.nvars
_ZERO: Exps = VARS.zero_exp


def _norm_key(k) -> CapKey:
    if isinstance(k, Group):
        return k
    if isinstance(k, str) and k in Group.__members__:
        return Group[k]
    if isinstance(k, str):
        VARS[k]  # validates the name
        return k
    raise TypeError(f"bad cap key {k!r}")


def _key_str(k: CapKey) -> str:
    return k.value if isinstance(k, Group) else k


class CapSpec:
    """Assignment of capped variables to keys, plus the cap of each key."""

    __slots__ = ("caps", "keys", "key_vars", "cmask", "_var_key")

    def __init__(self, caps: Mapping):
        norm = {_norm_key(k): int(v) for k, v in caps.items()}
        self.keys: tuple[CapKey, ...] = tuple(sorted(norm, key=_key_str))
        self.caps: tuple[int, ...] = tuple(norm[k] for k in self.keys)
        named = {k for k in self.keys if isinstance(k, str)}
        var_key: dict[int, int] = {}
        for v in VARS:
            if v.name in named:
                var_key[v.index] = self.keys.index(v.name)
            elif v.group in norm:
                var_key[v.index] = self.keys.index(v.group)
        self._var_key = var_key
        self.key_vars = tuple(tuple(i for i, j in var_key.items() if j == n) for n in range(len(self.keys)))
        self.cmask = tuple(i in var_key for i in range(_N))

    def as_dict(self) -> dict[CapKey, int]:
        return dict(zip(self.keys, self.caps))

    def with_caps(self, caps: Iterable[int]) -> "CapSpec":
        return CapSpec(dict(zip(self.keys, caps)))

    def same_keys(self, other: "CapSpec") -> bool:
        return self.keys == other.keys

    def is_capped(self, i: int) -> bool:
        return self.cmask[i]

    def key_of(self, i: int) -> int | None:
        return self._var_key.get(i)

    def degvec(self, e: Exps) -> DegVec:
        return tuple(sum(e[i] for i in idx) for idx in self.key_vars)

    def within(self, dv: DegVec, caps: tuple[int, ...] | None = None) -> bool:
        caps = self.caps if caps is None else caps
        return all(d <= c for d, c in zip(dv, caps))

    def split(self, e: Exps) -> tuple[Exps, Exps]:
        """Split an exponent vector into (capped part, uncapped part)."""
        m = self.cmask
        return tuple(x if c else 0 for x, c in zip(e, m)), tuple(0 if c else x for x, c in zip(e, m))

    def __eq__(self, other) -> bool:
        return isinstance(other, CapSpec) and self.keys == other.keys and self.caps == other.caps

    def __hash__(self) -> int:
        return hash((self.keys, self.caps))

    def __str__(self) -> str:
        return ", ".join(f"{_key_str(k)}<={c}" for k, c in zip(self.keys, self.caps))


def _as_spec(caps) -> CapSpec:
    return caps if isinstance(caps, CapSpec) else CapSpec(caps)


class TruncatedSeries:
    """Immutable truncated series ``sum_e body[e] * x**e / den``."""

    __slots__ = ("spec", "body", "den")

    def __init__(self, spec: CapSpec, body: dict[Exps, LaurentPoly], den: DenDict | None = None, *, _clean=False):
        self.spec = spec
        if not _clean:
            body = {e: c for e, c in body.items() if not c.is_zero() and spec.within(spec.degvec(e))}
        self.body = body
        self.den = den if (den and body) else {}
        if not _clean and self.den:
            self._reduce()

    def _reduce(self) -> None:
        """Cancel denominator factors that divide every coefficient."""
        den = dict(self.den)
        body = self.body
        for key, (f, m) in list(den.items()):
            while m:
                quo = {}
                for e, c in body.items():
                    q, r = divmod(c.poly, f)
                    if not r.is_zero():
                        quo = None
                        break
                    quo[e] = LaurentPoly(q, c.shift, _canonical=True)
                if quo is None:
                    break
                body = quo
                m -= 1
            if m:
                den[key] = (f, m)
            else:
                del den[key]
        self.body = body
        self.den = den

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, caps) -> "TruncatedSeries":
        return cls(_as_spec(caps), {}, _clean=True)

    @classmethod
    def one(cls, caps) -> "TruncatedSeries":
        return cls.from_poly(LaurentPoly.one(), caps)

    @classmethod
    def from_poly(cls, p: LaurentPoly, caps, den: DenDict | None = None) -> "TruncatedSeries":
        """Series of a Laurent polynomial (exact, then truncated)."""
        spec = _as_spec(caps)
        p = LaurentPoly.coerce(p)
        groups: dict[Exps, dict[Exps, flint.fmpq]] = {}
        for e, c in p.terms():
            ce, ue = spec.split(e)
            groups.setdefault(ce, {})[ue] = c
        body = {ce: LaurentPoly.from_terms(t) for ce, t in groups.items()}
        return cls(spec, body, den)

    @classmethod
    def from_scalar(cls, r, caps) -> "TruncatedSeries":
        """Constant series whose coefficient ``r`` involves no capped variable."""
        spec = _as_spec(caps)
        r = RatFunc.coerce(r)
        if any(spec.is_capped(i) for i in r.variables()):
            raise ValueError("scalar involves capped variables")
        return cls(spec, {_ZERO: r.num} if not r.is_zero() else {}, dict(r.den))

    @classmethod
    def monomial(cls, m: Monomial | Exps, caps, coeff=1) -> "TruncatedSeries":
        exps = m.exps if isinstance(m, Monomial) else tuple(m)
        return cls.from_poly(LaurentPoly.monomial(exps, coeff), caps)

    # -- inspection ---------------------------------------------------
    @property
    def caps(self) -> dict[CapKey, int]:
        return self.spec.as_dict()

    def is_zero(self) -> bool:
        return not self.body

    def __len__(self) -> int:
        return len(self.body)

    def monomials(self) -> list[Exps]:
        return sorted(self.body, key=_series_order)

    def coefficient(self, m: Monomial | Exps) -> RatFunc:
        exps = m.exps if isinstance(m, Monomial) else tuple(m)
        c = self.body.get(exps)
        if c is None:
            return RatFunc.zero()
        return RatFunc(c) * RatFunc(LaurentPoly.one(), self.den, _reduced=True)

    def items(self) -> list[tuple[Exps, RatFunc]]:
        return [(e, self.coefficient(e)) for e in self.monomials()]

    def valuation(self) -> DegVec:
        """Per-key minimum degree (the cap itself for the zero series)."""
        if not self.body:
            return self.spec.caps
        dvs = [self.spec.degvec(e) for e in self.body]
        return tuple(min(col) for col in zip(*dvs))

    def constant_term(self) -> RatFunc:
        return self.coefficient(_ZERO)

    def den_poly(self) -> LaurentPoly:
        return LaurentPoly(_den_product(self.den), _canonical=True)

    # -- truncation ---------------------------------------------------
    def truncate(self, caps) -> "TruncatedSeries":
        """Lower the caps (keys must match; raising a cap is an error)."""
        spec = _as_spec(caps) if not isinstance(caps, (tuple, list)) else self.spec.with_caps(caps)
        if not spec.same_keys(self.spec):
            raise ValueError("cap keys differ")
        if any(c > d for c, d in zip(spec.caps, self.spec.caps)):
            raise ValueError("cannot raise caps by truncation")
        if spec == self.spec:
            return self
        return TruncatedSeries(spec, self.body, dict(self.den))

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "TruncatedSeries") -> None:
        if not self.spec.same_keys(other.spec):
            raise ValueError(f"incompatible cap keys: [{self.spec}] vs [{other.spec}]")

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check(other)
        caps = tuple(min(a, b) for a, b in zip(self.spec.caps, other.spec.caps))
        spec = self.spec if caps == self.spec.caps else self.spec.with_caps(caps)
        lcm: DenDict = dict(self.den)
        for k, (f, m) in other.den.items():
            if k not in lcm or lcm[k][1] < m:
                lcm[k] = (f, m)
        sa = LaurentPoly(_den_product(lcm, self.den), _canonical=True)
        sb = LaurentPoly(_den_product(lcm, other.den), _canonical=True)
        body: dict[Exps, LaurentPoly] = {}
        for src, s in ((self.body, sa), (other.body, sb)):
            for e, c in src.items():
                if not spec.within(spec.degvec(e)):
                    continue
                c = c * s if not s.is_one() else c
                prev = body.get(e)
                body[e] = c if prev is None else prev + c
        return TruncatedSeries(spec, body, lcm)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.spec, {e: -c for e, c in self.body.items()}, dict(self.den), _clean=True)

    def __sub__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        try:
            if isinstance(other, (RatFunc, LaurentPoly, Monomial)) or isinstance(other, (int, flint.fmpq)):
                r = RatFunc.coerce(other)
                if any(self.spec.is_capped(i) for i in r.variables()):
                    return series_expand(r, self.spec)
                return TruncatedSeries.from_scalar(r, self.spec)
        except TypeError:
            return None
        return None

    def product_caps(self, other: "TruncatedSeries") -> tuple[int, ...]:
        va, vb = self.valuation(), other.valuation()
        return tuple(
            min(ca + min(b, 0), cb + min(a, 0))
            for ca, cb, a, b in zip(self.spec.caps, other.spec.caps, va, vb)
        )

    def mul(self, other: "TruncatedSeries", caps: tuple[int, ...]) -> "TruncatedSeries":
        """Product truncated at explicit caps (the caller vouches for precision)."""
        self._check(other)
        spec = self.spec if caps == self.spec.caps else self.spec.with_caps(caps)
        if not self.body or not other.body:
            return TruncatedSeries(spec, {}, _clean=True)
        sd = self.spec.degvec
        a_items = [(e, sd(e), c) for e, c in self.body.items()]
        b_items = [(e, sd(e), c) for e, c in other.body.items()]
        body: dict[Exps, LaurentPoly] = {}
        for ea, da, ca in a_items:
            lim = tuple(c - d for c, d in zip(caps, da))
            for eb, db, cb in b_items:
                if any(x > y for x, y in zip(db, lim)):
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                prev = body.get(e)
                body[e] = c if prev is None else prev + c
        den = dict(self.den)
        for k, (f, m) in other.den.items():
            den[k] = (f, den[k][1] + m) if k in den else (f, m)
        return TruncatedSeries(spec, body, den)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = self._coerce(other)
            if other is None:
                return NotImplemented
            if len(other.body) == 1 and _ZERO in other.body:
                return self.scale(other.coefficient(_ZERO))
        self._check(other)
        return self.mul(other, self.product_caps(other))

    __rmul__ = __mul__

    def scale(self, r) -> "TruncatedSeries":
        """Multiply by a rational function free of capped variables."""
        r = RatFunc.coerce(r)
        if any(self.spec.is_capped(i) for i in r.variables()):
            raise ValueError("scale factor involves capped variables")
        if r.is_zero():
            return TruncatedSeries(self.spec, {}, _clean=True)
        # cancel r's numerator against our denominator first
        p, rest_den = _cancel(r.num.poly, self.den) if self.den else (r.num.poly, {})
        num = LaurentPoly(p, r.num.shift, _canonical=True)
        den = dict(rest_den)
        for k, (f, m) in r.den.items():
            den[k] = (f, den[k][1] + m) if k in den else (f, m)
        return TruncatedSeries(self.spec, {e: c * num for e, c in self.body.items()}, den)

    def shift_by(self, m: Monomial | Exps) -> "TruncatedSeries":
        """Multiply by a monomial (capped and uncapped parts are both allowed)."""
        exps = m.exps if isinstance(m, Monomial) else tuple(m)
        ce, ue = self.spec.split(exps)
        u = Monomial(ue)
        dv = self.spec.degvec(ce)
        caps = tuple(c + min(d, 0) for c, d in zip(self.spec.caps, dv))
        spec = self.spec.with_caps(caps)
        body = {tuple(x + y for x, y in zip(e, ce)): c * u for e, c in self.body.items()}
        return TruncatedSeries(spec, body, dict(self.den))

    def inverse(self) -> "TruncatedSeries":
        """Series inverse around the unique lowest term (see :func:`series_inverse`)."""
        return series_inverse(self)

    def __truediv__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        r = RatFunc.coerce(other)
        if any(self.spec.is_capped(i) for i in r.variables()):
            return self * series_expand(1 / r, self.spec)
        return self.scale(r.inverse())

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedSeries.one(self.spec)
        for _ in range(k):
            out = out * self
        return out

    # -- comparison ---------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            other = self._coerce(other)
            if other is None:
                return NotImplemented
        if self.spec != other.spec:
            raise ValueError(f"series with different caps are not comparable: [{self.spec}] vs [{other.spec}]")
        return not self.mismatches(other, limit=1)

    __hash__ = None  # type: ignore[assignment]

    def mismatches(self, other: "TruncatedSeries", limit: int | None = None) -> list[tuple[Exps, RatFunc, RatFunc]]:
        """Capped monomials whose coefficients differ, in canonical order."""
        if self.spec != other.spec:
            raise ValueError("series with different caps are not comparable")
        da, db = self.den_poly(), other.den_poly()
        out = []
        for e in sorted(set(self.body) | set(other.body), key=_series_order):
            a = self.body.get(e, LaurentPoly.zero())
            b = other.body.get(e, LaurentPoly.zero())
            if not (a * db - b * da).is_zero():
                out.append((e, self.coefficient(e), other.coefficient(e)))
                if limit is not None and len(out) >= limit:
                    break
        return out

    # -- substitution -------------------------------------------------
    def substitute(self, rules: Mapping, caps=None) -> "TruncatedSeries":
        return series_substitute(self, rules, caps)

    def to_ratfunc(self) -> RatFunc:
        """The truncated sum as an exact rational function."""
        num = LaurentPoly.zero()
        for e, c in self.body.items():
            num = num + c * Monomial(e)
        return RatFunc(num) * RatFunc(LaurentPoly.one(), self.den, _reduced=True)

    def __repr__(self) -> str:
        return f"TruncatedSeries({self})"

    def __str__(self) -> str:
        from .text import format_series

        return format_series(self)


def _series_order(e: Exps) -> tuple:
    """Ascending graded order for series terms (reverse of the polynomial order)."""
    return (sum(e), e)


def product_to_caps(factors: list[TruncatedSeries], caps) -> TruncatedSeries:
    """Exact product of several series, truncated at ``caps``.

    Partial products keep enough extra precision to survive later factors of
    negative valuation.
    """
    spec = _as_spec(caps)
    if not factors:
        return TruncatedSeries.one(spec)
    vals = [f.valuation() for f in factors]
    total = tuple(sum(col) for col in zip(*vals))
    for f, v in zip(factors, vals):
        if f.is_zero():
            return TruncatedSeries.zero(spec)
        need = tuple(c - (t - x) for c, t, x in zip(spec.caps, total, v))
        if any(have < n for have, n in zip(f.spec.caps, need)):
            raise ValueError("factor precision too low for the requested caps")
    acc = factors[0]
    rest = list(total)
    rest = [r - v for r, v in zip(rest, vals[0])]
    for f, v in zip(factors[1:], vals[1:]):
        rest = [r - x for r, x in zip(rest, v)]
        partial = tuple(c - r for c, r in zip(spec.caps, rest))
        acc = acc.mul(f, partial)
    return acc.truncate(spec) if acc.spec.caps != spec.caps else acc


def _lowest_term(s: TruncatedSeries) -> Exps:
    """The unique term whose degree vector is strictly below all others."""
    sd = s.spec.degvec
    items = [(e, sd(e)) for e in s.body]
    best = min(items, key=lambda t: (sum(t[1]), t[1]))
    e0, d0 = best
    for e, d in items:
        if e == e0:
            continue
        if any(x < y for x, y in zip(d, d0)) or d == d0:
            raise NonExpandablePole("no unique lowest term: the series has no inverse around the origin")
    return e0


def series_inverse(s: TruncatedSeries) -> TruncatedSeries:
    """Inverse ``1/s = (c0 m0)^-1 * sum_n (-h)^n`` with ``s = c0 m0 (1 + h)``.

    Raises ``NonExpandablePole`` unless one term is strictly lowest in the
    per-key degree order.
    """
    if s.is_zero():
        raise ZeroDivisionError("inverse of the zero series")
    spec = s.spec
    e0 = _lowest_term(s)
    v0 = spec.degvec(e0)
    rel = tuple(c - v for c, v in zip(spec.caps, v0))
    c0 = s.body[e0]
    inv_c0 = RatFunc._inverse_of_poly(c0)
    neg_h_body = {}
    for e, c in s.body.items():
        if e == e0:
            continue
        d = tuple(x - y for x, y in zip(e, e0))
        neg_h_body[d] = -(c * inv_c0.num)
    rel_spec = spec.with_caps(rel)
    neg_h = TruncatedSeries(rel_spec, neg_h_body, dict(inv_c0.den))
    total = TruncatedSeries.one(rel_spec)
    if not neg_h.is_zero():
        power = TruncatedSeries.one(rel_spec)
        for _ in range(sum(max(r, 0) for r in rel)):
            power = power.mul(neg_h, rel)
            if power.is_zero():
                break
            total = total + power
    # multiply back the unit: den(s) / (c0 * m0)
    out = total.scale(RatFunc(inv_c0.num * s.den_poly(), inv_c0.den, _reduced=True))
    out = out.shift_by(tuple(-x for x in e0))
    target = tuple(c - 2 * v for c, v in zip(spec.caps, v0))
    return out.truncate(target) if out.spec.caps != target else out


def series_expand(f, caps) -> TruncatedSeries:
    """Expand a rational function around the origin of the capped variables.

    Each denominator factor involving capped variables must have a unique
    lowest term (for a single key: ``1 - c*m`` with ``m`` of positive degree,
    or such a factor times a unit monomial).  Otherwise ``NonExpandablePole``.
    """
    spec = _as_spec(caps)
    f = RatFunc.coerce(f)
    if f.is_zero():
        return TruncatedSeries.zero(spec)
    common: DenDict = {}
    capped: list[tuple[LaurentPoly, int]] = []
    for key, (g, m) in f.den.items():
        if any(g.degrees()[i] and spec.is_capped(i) for i in range(_N)):
            capped.append((LaurentPoly(g, _canonical=True), m))
        else:
            common[key] = (g, m)
    big = tuple(10**9 for _ in spec.caps)
    big_spec = spec.with_caps(big)
    num = TruncatedSeries(big_spec, TruncatedSeries.from_poly(f.num, big_spec).body, common)
    if not capped:
        return num.truncate(spec) if num.spec.caps != spec.caps else num
    facs = []
    for g, m in capped:
        gs = TruncatedSeries.from_poly(g, big_spec)
        e0 = _lowest_term(gs)
        facs.append((gs, spec.degvec(e0), m))
    v_num = num.valuation()
    total = list(v_num)
    for _, v0, m in facs:
        total = [t - m * x for t, x in zip(total, v0)]
    if any(c < t for c, t in zip(spec.caps, total)):
        return TruncatedSeries.zero(spec)
    factors = [num.truncate(tuple(c - (t - v) for c, t, v in zip(spec.caps, total, v_num)))]
    for gs, v0, m in facs:
        need_inv = tuple(c - (t + x) for c, t, x in zip(spec.caps, total, v0))
        need_g = tuple(n + 2 * x for n, x in zip(need_inv, v0))
        inv = series_inverse(gs.truncate(need_g))
        factors.extend([inv] * m)
    return product_to_caps(factors, spec)


def series_substitute(s: TruncatedSeries, rules: Mapping, caps=None) -> TruncatedSeries:
    """Monomial substitution ``var -> c * monomial`` into a series.

    ``caps`` gives the target cap spec (default: unchanged).  A capped source
    variable must land on a monomial of nonnegative degree in every target
    key and positive degree in one whose cap does not exceed the source cap;
    anything else raises ``CapViolation``.
    """
    rules = normalize_rules(rules)
    src = s.spec
    tgt = src if caps is None else _as_spec(caps)
    if not rules and tgt == src:
        return s
    # soundness: each source key must feed one target key with no larger cap
    used: dict[int, set[int]] = {}
    for e in s.body:
        for i, x in enumerate(e):
            if x:
                used.setdefault(src.key_of(i), set()).add(i)
    ident = flint.fmpq(1)
    for k, idx in sorted(used.items()):
        dvs = []
        for i in sorted(idx):
            _, img = rules.get(i, (ident, tuple(1 if j == i else 0 for j in range(_N))))
            dv = tgt.degvec(img)
            if any(d < 0 for d in dv):
                raise CapViolation(f"{VARS.by_index(i).name} maps to a monomial of negative capped degree")
            dvs.append(dv)
        ok = any(all(dv[t] > 0 for dv in dvs) and tgt.caps[t] <= src.caps[k] for t in range(len(tgt.keys)))
        if not ok:
            raise CapViolation(f"target caps [{tgt}] exceed the precision of the source key {_key_str(src.keys[k])}")
    # denominator: substitute each factor and refactor
    den_r = RatFunc(LaurentPoly.one(), dict(s.den), _reduced=True).substitute(rules) if s.den else RatFunc.one()
    if any(tgt.is_capped(i) for i in den_r.variables()):
        raise CapViolation("substitution moves a denominator into capped variables")
    groups: dict[Exps, list] = {}
    for e, c in s.body.items():
        terms = ((tuple(x + y for x, y in zip(ce, e)), cc) for ce, cc in c.terms())
        for te, tc in substitute_terms(terms, rules).items():
            ce, ue = tgt.split(te)
            if tgt.within(tgt.degvec(ce)):
                groups.setdefault(ce, []).append((ue, tc))
    body = {}
    for ce, items in groups.items():
        acc: dict[Exps, flint.fmpq] = {}
        for ue, tc in items:
            acc[ue] = acc[ue] + tc if ue in acc else tc
        body[ce] = LaurentPoly.from_terms(acc)
    out = TruncatedSeries(tgt, body)
    return out.scale(den_r)
