"""q-shift operators in x_1..x_k and the families D_d, N_d acting on them.

An operator is stored expanded, as a map from shift vectors ``(d_1..d_k)``
to coefficients.  Applying it to ``f`` means summing
``coeff(x) * f(q^d_1 x_1, ..., q^d_k x_k)``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .algebra.laurent import LaurentPoly, Monomial
from .algebra.ratfunc import RatFunc, ratfunc_equal
from .algebra.series import CapSpec, TruncatedSeries
from .errors import LengthError
from .macdonald import macdonald_eval, macdonald_P, x_name
from .partitions import Partition
from .pochhammer import PhiProduct, QFactorList, ZERO, phi_ratio_truncated, qfactor_ratio, qpoch
from .reports import Report, compare_ratfunc, compare_series, timed
from .vertex import compositions, compositions_exact

Shift = tuple[int, ...]

_Z_CAPS = "z"


def _x(i: int) -> Monomial:
    return Monomial.of({x_name(i): 1})


def _ratio(j: int, i: int) -> Monomial:
    """``x_j / x_i``."""
    return _x(j) / _x(i) if i != j else Monomial.one()


def _mono(**kw: int) -> Monomial:
    return Monomial.of(**kw)


def shift_rules(shift: Shift) -> dict[str, tuple[int, Monomial]]:
    return {x_name(i): (1, _x(i) * _mono(q=s)) for i, s in enumerate(shift, start=1) if s}


class ShiftOperator:
    """Finite sum ``sum_d c_d(x) p^d`` with ``p_i : x_i -> q x_i``."""

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: Mapping[Shift, RatFunc] | None = None):
        self.k = k
        clean: dict[Shift, RatFunc] = {}
        for d, c in (terms or {}).items():
            d = tuple(d)
            if len(d) != k or any(s < 0 for s in d):
                raise ValueError(f"bad shift vector {d} for k={k}")
            c = RatFunc.coerce(c)
            if not c.is_zero():
                clean[d] = c
        self.terms = dict(sorted(clean.items(), reverse=True))

    @classmethod
    def identity(cls, k: int) -> "ShiftOperator":
        return cls(k, {(0,) * k: RatFunc.one()})

    @classmethod
    def shift(cls, k: int, i: int, power: int = 1) -> "ShiftOperator":
        """``p_i ** power``."""
        d = [0] * k
        d[i - 1] = power
        return cls(k, {tuple(d): RatFunc.one()})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, shift: Shift) -> RatFunc:
        return self.terms.get(tuple(shift), RatFunc.zero())

    def __add__(self, other: "ShiftOperator") -> "ShiftOperator":
        self._check(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out[d] + c if d in out else c
        return ShiftOperator(self.k, out)

    def __neg__(self) -> "ShiftOperator":
        return ShiftOperator(self.k, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other: "ShiftOperator") -> "ShiftOperator":
        return self + (-other)

    def scale(self, c) -> "ShiftOperator":
        c = RatFunc.coerce(c)
        return ShiftOperator(self.k, {d: v * c for d, v in self.terms.items()})

    def _check(self, other: "ShiftOperator") -> None:
        if self.k != other.k:
            raise ValueError("operators act on different numbers of variables")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShiftOperator) or self.k != other.k:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(ratfunc_equal(c, other.terms[d]) for d, c in self.terms.items())

    def __call__(self, f) -> RatFunc:
        return apply(self, f)

    def __matmul__(self, other: "ShiftOperator") -> "ShiftOperator":
        return compose(self, other)

    def __repr__(self) -> str:
        inner = " + ".join(f"({c})*p^{d}" for d, c in self.terms.items())
        return f"ShiftOperator(k={self.k}, {inner or '0'})"


def shifted(f: RatFunc, shift: Shift) -> RatFunc:
    """``f(q^d x)``."""
    if not any(shift):
        return f
    return f.substitute(shift_rules(shift))


def apply(op: ShiftOperator, f) -> RatFunc:
    f = RatFunc.coerce(f)
    out = RatFunc.zero()
    for d, c in op.terms.items():
        out = out + c * shifted(f, d)
    return out


def compose(a: ShiftOperator, b: ShiftOperator) -> ShiftOperator:
    """``a . b``: ``sum c_a(x) c_b(q^d_a x) p^(d_a + d_b)``."""
    a._check(b)
    out: dict[Shift, RatFunc] = {}
    for da, ca in a.terms.items():
        for db, cb in b.terms.items():
            d = tuple(u + v for u, v in zip(da, db))
            term = ca * shifted(cb, da)
            out[d] = out[d] + term if d in out else term
    return ShiftOperator(a.k, out)


def commutator(a: ShiftOperator, b: ShiftOperator) -> ShiftOperator:
    return compose(a, b) - compose(b, a)


# -- the two families ---------------------------------------------------------


def _ratfunc_or_zero(num: Iterable[QFactorList], den: Iterable[QFactorList] = ()) -> RatFunc:
    val = qfactor_ratio(num, den)
    return RatFunc.zero() if val is ZERO else val


def _row_block(ds: Shift) -> list[QFactorList]:
    """``prod_{i,j} (t x_j/x_i)_{d_j} / (q x_j/x_i)_{d_j}`` as factor lists."""
    k = len(ds)
    t, q = _mono(t=1), _mono(q=1)
    out = []
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            r = _ratio(j, i)
            out.append(qpoch(t * r, ds[j - 1]) / qpoch(q * r, ds[j - 1]))
    return out


def d_coefficient(ds: Shift) -> RatFunc:
    """Coefficient of ``p^ds`` in ``D_d``, straight from the four Pochhammer blocks."""
    k = len(ds)
    t, q = _mono(t=1), _mono(q=1)
    factors = _row_block(ds)
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            r = _ratio(j, i)
            m = ds[j - 1] - ds[i - 1]
            factors.append(qpoch(q * r, m) / qpoch(t * r, m))
    return _ratfunc_or_zero(factors)


def op_D(d: int, k: int) -> ShiftOperator:
    if d < 0 or k < 1:
        raise ValueError("need d >= 0 and k >= 1")
    return ShiftOperator(k, {ds: d_coefficient(ds) for ds in compositions_exact(d, k)})


def d_coefficient_rewritten(ds: Shift) -> RatFunc:
    """Coefficient of ``p^ds`` in the alternative (pairs ``i < j``) form of ``D_d``."""
    k = len(ds)
    t, q = _mono(t=1), _mono(q=1)
    out = _ratfunc_or_zero(_row_block(ds))
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            r = _ratio(j, i)
            m = ds[j - 1] - ds[i - 1]
            lin = (1 - LaurentPoly.monomial(r * _mono(q=m))) / (1 - LaurentPoly.monomial(r))
            poch = _ratfunc_or_zero([qpoch(q * r / t, m)], [qpoch(t * r, m)])
            out = out * RatFunc.coerce(lin) * poch * RatFunc(LaurentPoly.monomial(_mono(t=m, q=-m)))
    return out


def op_D_rewritten(d: int, k: int) -> ShiftOperator:
    return ShiftOperator(k, {ds: d_coefficient_rewritten(ds) for ds in compositions_exact(d, k)})


def op_N(d: int, k: int) -> ShiftOperator:
    """Noumi's row-type operator: Pochhammer block times ``prod_{i<j} (q^d_j x_j - q^d_i x_i)/(x_j - x_i)``."""
    if d < 0 or k < 1:
        raise ValueError("need d >= 0 and k >= 1")
    terms = {}
    for ds in compositions_exact(d, k):
        c = _ratfunc_or_zero(_row_block(ds))
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                xi, xj = LaurentPoly.monomial(_x(i)), LaurentPoly.monomial(_x(j))
                num = LaurentPoly.monomial(_x(j) * _mono(q=ds[j - 1])) - LaurentPoly.monomial(_x(i) * _mono(q=ds[i - 1]))
                c = c * (num / (xj - xi))
        terms[ds] = c
    return ShiftOperator(k, terms)


# -- spectral checks ----------------------------------------------------------


def spectrum_point(mu: Partition, k: int) -> list[Monomial]:
    """``q^{mu_i} (t/q)^{i-1}`` for ``i = 1..k``."""
    return [_mono(q=mu.part(i) - (i - 1), t=i - 1) for i in range(1, k + 1)]


def eigenvalue_D(d: int, mu, k: int) -> RatFunc:
    """``(t)_d/(q)_d * P_(d)(q^{mu_i}(t/q)^{i-1}; q, t)``."""
    mu = Partition(mu)
    pref = qfactor_ratio([qpoch(_mono(t=1), d)], [qpoch(_mono(q=1), d)])
    if d == 0:
        return pref
    return pref * macdonald_eval((d,), spectrum_point(mu, k))


def macdonald_dual_t(mu, k: int) -> RatFunc:
    """``P_mu(x; q, q/t)`` as a rational function of ``x``, ``q``, ``t``."""
    return macdonald_P(mu, k).to_ratfunc().substitute({"t": (1, _mono(q=1, t=-1))})


def check_diagonal(mu, d: int, k: int) -> Report:
    mu = Partition(mu)
    if len(mu) > k:
        raise LengthError(f"partition {mu} has more than {k} parts")
    rep = Report("diagonal", {"k": k, "d": d, "mu": str(mu)})
    with timed(rep):
        f = macdonald_dual_t(mu, k)
        compare_ratfunc(rep, "D_d P", apply(op_D(d, k), f), eigenvalue_D(d, mu, k) * f)
    return rep


def check_commute(k: int, dmax: int) -> Report:
    rep = Report("commute", {"k": k, "dmax": dmax})
    with timed(rep):
        ops = [op_D(d, k) for d in range(dmax + 1)]
        for a in range(1, dmax + 1):
            for b in range(a + 1, dmax + 1):
                c = commutator(ops[a], ops[b])
                for sh, v in c.terms.items():
                    rep.fail(f"[D_{a},D_{b}] p^{sh}", v, 0)
    return rep


def check_lemma_rewrite(d: int, k: int) -> Report:
    rep = Report("lemma-rewrite", {"k": k, "d": d})
    with timed(rep):
        for ds in compositions_exact(d, k):
            compare_ratfunc(rep, f"p^{ds}", d_coefficient(ds), d_coefficient_rewritten(ds))
    return rep


def _z_spec(zcap: int) -> CapSpec:
    return CapSpec({_Z_CAPS: zcap})


def spectrum_product(mu, k: int, zcap: int) -> TruncatedSeries:
    """``prod_i phi(t s_i z)/phi(s_i z)`` with ``s_i = q^{mu_i}(t/q)^{i-1}``, truncated in ``z``."""
    spec = _z_spec(zcap)
    out = TruncatedSeries.one(spec)
    for s in spectrum_point(Partition(mu), k):
        x = s * _mono(z=1)
        out = out * phi_ratio_truncated(x * _mono(t=1), x, spec)
    return out


def check_generating(mu, k: int, zcap: int) -> Report:
    """``D(z) P_mu(x;q,q/t) = P_mu(x;q,q/t) prod_i phi(t s_i z)/phi(s_i z)`` to ``z``-degree ``zcap``."""
    mu = Partition(mu)
    spec = _z_spec(zcap)
    rep = Report("generating", {"k": k, "mu": str(mu)}, {"z": zcap})
    with timed(rep):
        f = macdonald_dual_t(mu, k)
        left = TruncatedSeries.zero(spec)
        for d in range(zcap + 1):
            coeff = apply(op_D(d, k), f) / f
            left = left + TruncatedSeries.monomial(_mono(z=d), spec).scale(coeff)
        compare_series(rep, left, spectrum_product(mu, k, zcap))
    return rep


def _a(i: int) -> Monomial:
    return Monomial.of({f"a_{i}": 1})


def selberg_weight(ds: Shift) -> QFactorList:
    """The four phi-ratio factors at ``x_j = a_j q^{d_j}``, collapsed to Pochhammer symbols."""
    k = len(ds)
    t, q = _mono(t=1), _mono(q=1)
    prod = PhiProduct()
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            xr = _a(j) / _a(i) * _mono(q=ds[j - 1] - ds[i - 1])  # x_j / x_i
            xa = _a(j) / _a(i) * _mono(q=ds[j - 1])  # x_j / a_i
            prod = prod * PhiProduct.phi(t * xr) / PhiProduct.phi(q * xr)
            prod = prod * PhiProduct.phi(q * xa) / PhiProduct.phi(t * xa)
    return prod.collapse()


def _macdonald_at(mu: Partition, k: int, point: list[Monomial], dual_t: bool) -> RatFunc:
    t_param = _mono(q=1, t=-1) if dual_t else None
    return macdonald_eval(mu, point, t_param=t_param)


def selberg_sides(mu, k: int, zcap: int, dual_t: bool = True) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Both sides of the q-Selberg evaluation as series in ``z`` with coefficients in ``a, q, t``.

    The integrand's Macdonald polynomial carries parameters ``(q, q/t)`` when
    ``dual_t`` is set and ``(q, t)`` otherwise.
    """
    mu = Partition(mu)
    if len(mu) > k:
        raise LengthError(f"partition {mu} has more than {k} parts")
    spec = _z_spec(zcap)
    left = TruncatedSeries.zero(spec)
    for ds in compositions(zcap, k):
        point = [_a(i) * _mono(q=ds[i - 1]) for i in range(1, k + 1)]
        w = selberg_weight(ds)
        if w.is_zero():
            continue
        val = w.to_ratfunc() * _macdonald_at(mu, k, point, dual_t)
        left = left + TruncatedSeries.monomial(_mono(z=sum(ds)), spec).scale(val)
    base = _macdonald_at(mu, k, [_a(i) for i in range(1, k + 1)], dual_t)
    right = spectrum_product(mu, k, zcap).scale(base)
    return left, right


def qselberg_check(mu, k: int, zcap: int, dual_t: bool = True) -> Report:
    mu = Partition(mu)
    rep = Report("selberg", {"k": k, "mu": str(mu)}, {"z": zcap})
    with timed(rep):
        left, right = selberg_sides(mu, k, zcap, dual_t)
        compare_series(rep, left, right)
    return rep
