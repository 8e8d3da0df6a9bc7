"""Symmetric polynomials in x_1..x_k and Macdonald polynomials P_mu(x; q, t).

All symmetric functions of degree n are handled in coordinates with respect
to the power sums p_lambda of the full ring (enough variables that nothing
collapses), where the (q,t) inner product is diagonal.  Restricting to k
variables drops every m_nu with more than k parts.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Mapping

import flint

from .algebra.laurent import LaurentPoly, Monomial, normalize_rules
from .algebra.ratfunc import RatFunc, ratfunc_from_factors
from .algebra.series import CapSpec, TruncatedSeries
from .algebra.vars import CTX, MAX_INDEX, VARS
from .errors import LengthError
from .partitions import Partition, partitions_of
from .pochhammer import phi_ratio_truncated, qpoch_ratfunc
from .reports import Report, compare_series, timed

_Q = LaurentPoly.var("q")
_T = LaurentPoly.var("t")


def x_name(i: int) -> str:
    return f"x_{i}"


def _x_exps(exps: Iterable[int]) -> tuple[int, ...]:
    e = [0] * VARS.nvars
    for i, a in enumerate(exps, start=1):
        if a:
            e[VARS[x_name(i)].index] = a
    return tuple(e)


def _distinct_perms(parts: tuple[int, ...]) -> list[tuple[int, ...]]:
    if not parts:
        return [()]
    out = []
    for v in sorted(set(parts), reverse=True):
        rest = list(parts)
        rest.remove(v)
        out.extend((v,) + p for p in _distinct_perms(tuple(rest)))
    return out


@lru_cache(maxsize=None)
def _monomial_sym_poly(mu: Partition, k: int) -> LaurentPoly:
    padded = tuple(mu) + (0,) * (k - len(mu))
    return LaurentPoly.from_terms({_x_exps(p): 1 for p in _distinct_perms(padded)})


def monomial_sym(mu, k: int) -> LaurentPoly:
    """``m_mu(x_1..x_k)``: sum of the distinct permutations of ``x^mu``."""
    mu = Partition(mu)
    if len(mu) > k:
        raise LengthError(f"partition {mu} has more than {k} parts")
    if k > MAX_INDEX:
        raise LengthError(f"at most {MAX_INDEX} variables")
    return _monomial_sym_poly(mu, k)


def power_inner(lam, mu) -> RatFunc:
    """``<p_lam, p_mu> = delta * prod_n n^m_n m_n! * prod_i (1 - q^lam_i)/(1 - t^lam_i)``."""
    lam, mu = Partition(lam), Partition(mu)
    if lam != mu:
        return RatFunc.zero()
    z = 1
    for part, mult in lam.multiplicities().items():
        z *= part**mult * factorial(mult)
    pairs = []
    for part in lam:
        pairs.append((1 - _Q**part, 1))
        pairs.append((1 - _T**part, -1))
    return ratfunc_from_factors(pairs, z)


# -- change of basis ----------------------------------------------------------


@lru_cache(maxsize=None)
def _basis(n: int) -> tuple[Partition, ...]:
    return tuple(partitions_of(n))


@lru_cache(maxsize=None)
def power_to_monomial(n: int) -> flint.fmpq_mat:
    """Matrix ``M`` with ``p_lam = sum_nu M[lam, nu] m_nu`` (rows/cols in ``partitions_of(n)`` order).

    Obtained by expanding each power-sum product in ``n`` variables and
    reading off the coefficient of ``x^nu``.
    """
    if n > MAX_INDEX:
        raise LengthError(f"degree {n} exceeds the variable table")
    basis = _basis(n)
    xs = [CTX.term(exp_vec=_x_exps((0,) * (i - 1) + (1,))) for i in range(1, n + 1)]
    M = flint.fmpq_mat(len(basis), len(basis))
    for r, lam in enumerate(basis):
        prod = CTX.constant(1)
        for part in lam:
            prod *= sum((x**part for x in xs), CTX.constant(0))
        for c, nu in enumerate(basis):
            e = tuple(nu) + (0,) * (n - len(nu))
            M[r, c] = prod[_x_exps(e)]
    return M


@lru_cache(maxsize=None)
def monomial_to_power(n: int) -> flint.fmpq_mat:
    return power_to_monomial(n).inv()


@lru_cache(maxsize=None)
def _z_qt(n: int) -> tuple[RatFunc, ...]:
    return tuple(power_inner(lam, lam) for lam in _basis(n))


# -- symmetric polynomials ----------------------------------------------------


class SymPoly:
    """Symmetric polynomial in ``x_1..x_k``: coefficients in the monomial basis."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs: Mapping[Partition, RatFunc]):
        self.k = k
        self.coeffs = {Partition(p): RatFunc.coerce(c) for p, c in coeffs.items() if not RatFunc.coerce(c).is_zero()}
        if any(len(p) > k for p in self.coeffs):
            raise LengthError(f"monomial with more than {k} parts")

    def to_ratfunc(self) -> RatFunc:
        """Expanded form as a rational function in ``x``, ``q``, ``t``."""
        out = RatFunc.zero()
        for nu, c in sorted(self.coeffs.items(), reverse=True):
            out = out + c * RatFunc(monomial_sym(nu, self.k))
        return out

    def coefficient(self, nu) -> RatFunc:
        return self.coeffs.get(Partition(nu), RatFunc.zero())

    def substitute_params(self, rules: Mapping) -> "SymPoly":
        """Substitute into the coefficients only (e.g. ``t -> q/t``)."""
        return SymPoly(self.k, {nu: c.substitute(rules) for nu, c in self.coeffs.items()})

    def __add__(self, other: "SymPoly") -> "SymPoly":
        out = dict(self.coeffs)
        for nu, c in other.coeffs.items():
            out[nu] = out[nu] + c if nu in out else c
        return SymPoly(self.k, out)

    def scale(self, c) -> "SymPoly":
        c = RatFunc.coerce(c)
        return SymPoly(self.k, {nu: v * c for nu, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, SymPoly) and self.k == other.k and self.coeffs == other.coeffs

    def __str__(self) -> str:
        return _m_text(self.coeffs) if self.coeffs else "0"

    def __repr__(self) -> str:
        return f"SymPoly(k={self.k}, {self})"


def _dominance_key(p: Partition) -> tuple:
    # reverse lexicographic from the top is a linear extension of dominance
    return tuple(-x for x in p)


# -- (q,t) inner product and Gram-Schmidt ------------------------------------


def _p_coords_of_m(n: int, nu: Partition) -> list[RatFunc]:
    basis = _basis(n)
    row = basis.index(nu)
    Minv = monomial_to_power(n)
    return [RatFunc.coerce(Minv[row, c]) for c in range(len(basis))]


def _inner(a: list[RatFunc], b: list[RatFunc], z: tuple[RatFunc, ...]) -> RatFunc:
    out = RatFunc.zero()
    for x, y, w in zip(a, b, z):
        if x.is_zero() or y.is_zero():
            continue
        out = out + x * y * w
    return out


def sym_inner(f: Mapping[Partition, RatFunc], g: Mapping[Partition, RatFunc], n: int) -> RatFunc:
    """(q,t) inner product of two degree-``n`` symmetric functions given in the m basis."""
    a = _to_p(f, n)
    b = _to_p(g, n)
    return _inner(a, b, _z_qt(n))


def _to_p(f: Mapping[Partition, RatFunc], n: int) -> list[RatFunc]:
    out = [RatFunc.zero()] * len(_basis(n))
    for nu, c in f.items():
        col = _p_coords_of_m(n, Partition(nu))
        out = [o + c * x if not x.is_zero() else o for o, x in zip(out, col)]
    return out


def _to_m(vec: list[RatFunc], n: int) -> dict[Partition, RatFunc]:
    basis = _basis(n)
    M = power_to_monomial(n)
    out: dict[Partition, RatFunc] = {}
    for c, nu in enumerate(basis):
        acc = RatFunc.zero()
        for r, v in enumerate(vec):
            if v.is_zero():
                continue
            w = M[r, c]
            if w != 0:
                acc = acc + v.scale(w)
        if not acc.is_zero():
            out[nu] = acc
    return out


def revlex_extension(n: int) -> list[Partition]:
    """Increasing linear extension of dominance: reverse-lexicographic tie-break."""
    return sorted(_basis(n), key=lambda p: tuple(p) + (0,) * (n - len(p)))


def conjugate_extension(n: int) -> list[Partition]:
    """A second linear extension of dominance (decreasing lex order of conjugates)."""
    return sorted(_basis(n), key=lambda p: tuple(-x for x in p.conjugate()) + (0,) * n)


_cache: dict[tuple[int, str], dict[Partition, dict[Partition, RatFunc]]] = {}

EXTENSIONS: dict[str, Callable[[int], list[Partition]]] = {
    "revlex": revlex_extension,
    "conjugate": conjugate_extension,
}


def macdonald_family(n: int, extension: str = "revlex") -> dict[Partition, dict[Partition, RatFunc]]:
    """All ``P_mu`` with ``|mu| = n`` in the full ring, in the m basis.

    Gram-Schmidt of ``{m_mu}`` along the chosen linear extension of dominance.
    """
    key = (n, extension)
    if key in _cache:
        return _cache[key]
    out = _gram_schmidt(EXTENSIONS[extension](n), n)
    _cache[key] = out
    return out


_down_cache: dict[tuple[Partition, str], dict[Partition, RatFunc]] = {}


def _gram_schmidt(order: list[Partition], n: int) -> dict[Partition, dict[Partition, RatFunc]]:
    z = _z_qt(n)
    done: list[tuple[list[RatFunc], RatFunc]] = []
    out: dict[Partition, dict[Partition, RatFunc]] = {}
    for mu in order:
        m_mu = _p_coords_of_m(n, mu)
        vec = list(m_mu)
        for pv, norm in done:
            c = _inner(m_mu, pv, z)
            if c.is_zero():
                continue
            c = c / norm
            vec = [v - c * w if not w.is_zero() else v for v, w in zip(vec, pv)]
        done.append((vec, _inner(vec, vec, z)))
        out[mu] = _to_m(vec, n)
    return out


def macdonald_down(mu, extension: str = "revlex") -> dict[Partition, RatFunc]:
    """``P_mu`` by Gram-Schmidt restricted to the partitions dominated by ``mu``.

    Same result as the full family (the dominance ideal below ``mu`` is spanned
    by the ``P_nu`` it contains) at a fraction of the cost for short rows.
    """
    mu = Partition(mu)
    key = (mu, extension)
    if key not in _down_cache:
        order = [nu for nu in EXTENSIONS[extension](mu.size) if nu.dominated_by(mu)]
        _down_cache[key] = _gram_schmidt(order, mu.size)[mu]
    return _down_cache[key]


def macdonald_P(mu, k: int, extension: str = "revlex") -> SymPoly:
    """``P_mu(x_1..x_k; q, t)``."""
    mu = Partition(mu)
    if len(mu) > k:
        raise LengthError(f"partition {mu} has more than {k} parts")
    full = macdonald_down(mu, extension)
    return SymPoly(k, {nu: c for nu, c in full.items() if len(nu) <= k})


def macdonald_P_full(mu, extension: str = "revlex") -> dict[Partition, RatFunc]:
    """``P_mu`` in the full ring (no variable restriction), m-basis coefficients."""
    mu = Partition(mu)
    return dict(macdonald_family(mu.size, extension)[mu])


def macdonald_eval(mu, point: list, q_param=None, t_param=None, k: int | None = None) -> RatFunc:
    """``P_mu(point; q_param, t_param)``: substitute into the k-variable polynomial.

    ``point`` entries and the parameter slots are monomial expressions.
    """
    k = len(point) if k is None else k
    if len(point) != k:
        raise LengthError("point length must equal the number of variables")
    f = macdonald_P(mu, k).to_ratfunc()
    rules = {}
    if q_param is not None:
        rules["q"] = q_param
    if t_param is not None:
        rules["t"] = t_param
    for i, x in enumerate(point, start=1):
        rules[x_name(i)] = x
    return f.substitute(normalize_rules(rules))


def row_macdonald(d: int, k: int) -> SymPoly:
    """``P_(d)`` in ``k`` variables."""
    return macdonald_P(Partition([d]) if d else Partition(()), k)


# -- checks ---------------------------------------------------------------------


def check_orthogonality(n: int, k: int):
    """``<P_mu, P_nu> = 0`` for distinct ``mu, nu`` of size ``n`` with at most ``k`` parts."""
    rep = Report("orthogonality", {"n": n, "k": k})
    with timed(rep):
        mus = [mu for mu in _basis(n) if len(mu) <= k]
        for a, mu in enumerate(mus):
            for nu in mus[a + 1 :]:
                val = sym_inner(macdonald_down(mu), macdonald_down(nu), n)
                if not val.is_zero():
                    rep.fail(f"<P[{mu}],P[{nu}]>", val, 0)
    return rep


def check_triangularity(n: int, k: int):
    """Leading coefficient 1 and support inside the dominance ideal."""
    rep = Report("triangularity", {"n": n, "k": k})
    with timed(rep):
        for mu in _basis(n):
            if len(mu) > k:
                continue
            p = macdonald_P(mu, k)
            if p.coefficient(mu) != RatFunc.one():
                rep.fail(f"P[{mu}] at m[{mu}]", p.coefficient(mu), 1)
            for nu, c in p.coeffs.items():
                if not nu.dominated_by(mu):
                    rep.fail(f"P[{mu}] at m[{nu}]", c, 0)
    return rep


def check_qbinomial(k: int, ycap: int):
    """``prod_i phi(y t x_i)/phi(y x_i) = sum_d (t)_d/(q)_d P_(d)(x;q,t) y^d`` up to ``y^ycap``."""
    rep = Report("qbinomial", {"k": k}, {"y": ycap})
    with timed(rep):
        spec = CapSpec({"y": ycap})
        left = TruncatedSeries.one(spec)
        for i in range(1, k + 1):
            x = Monomial.of({"y": 1, x_name(i): 1})
            left = left * phi_ratio_truncated(x * Monomial.of(t=1), x, spec)
        right = TruncatedSeries.zero(spec)
        for d in range(ycap + 1):
            c = qpoch_ratfunc(Monomial.of(t=1), d) / qpoch_ratfunc(Monomial.of(q=1), d)
            p = row_macdonald(d, k).to_ratfunc() if d else RatFunc.one()
            right = right + TruncatedSeries.monomial(Monomial.of(y=d), spec).scale(c * p)
        compare_series(rep, left, right)
    return rep


def check_extensions(n: int):
    """Gram-Schmidt along two different linear extensions gives the same family."""
    rep = Report("extensions", {"n": n})
    with timed(rep):
        a, b = macdonald_family(n, "revlex"), macdonald_family(n, "conjugate")
        for mu in _basis(n):
            if a[mu] != b[mu]:
                rep.fail(f"P[{mu}]", _m_text(a[mu]), _m_text(b[mu]))
    return rep


def _m_text(coeffs: Mapping[Partition, RatFunc]) -> str:
    return " + ".join(f"({c})*m[{nu}]" for nu, c in sorted(coeffs.items(), key=lambda t: _dominance_key(t[0])))
