"""The parameter map kappa and the end-to-end duality checks.

Equivariant parameters ``a_1..a_n`` only ever appear through ratios, so every
X-side quantity is rewritten in the coordinates ``r_i = a_{i+1}/a_i`` and
expanded around ``r = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra.laurent import LaurentPoly, Monomial
from .algebra.ratfunc import RatFunc, ratfunc_equal
from .algebra.series import CapSpec, TruncatedSeries, product_to_caps, series_expand, series_inverse, series_substitute
from .algebra.vars import Group
from .macdonald import macdonald_P, x_name
from .partitions import Partition, check_kn, rectangle
from .pochhammer import PhiProduct, phi_inverse_truncated, phi_truncated, qfactor_ratio, qpoch, ZERO
from .qdifference import d_coefficient
from .reports import Report, compare_ratfunc, compare_series, timed
from .vertex import (
    compositions,
    compositions_exact,
    grassmannian_term,
    prefactor_dual,
    prefactor_X,
    vertex_product,
    vertex_Xdual,
    vertex_Xlambda,
)

KAHLER, RATIO = Group.KAHLER, Group.RATIO


def _m(**kw: int) -> Monomial:
    return Monomial.of(**kw)


def _r(i: int) -> Monomial:
    return Monomial.of({f"r_{i}": 1})


# -- coordinates --------------------------------------------------------------


@dataclass(frozen=True)
class RatioFrame:
    """``a_j/a_i -> r_i r_{i+1} ... r_{j-1}`` for ``i < j``."""

    n: int

    def a_image(self, i: int) -> Monomial:
        """Image of ``a_i`` under the normalization ``a_1 = 1``."""
        out = Monomial.one()
        for l in range(1, i):
            out = out * _r(l)
        return out

    def ratio(self, j: int, i: int) -> Monomial:
        return self.a_image(j) / self.a_image(i)

    def rules(self) -> dict[str, Monomial]:
        return {f"a_{i}": self.a_image(i) for i in range(1, self.n + 1)}

    def __call__(self, f) -> RatFunc:
        """Rewrite a rational function of degree zero in ``a``."""
        f = RatFunc.coerce(f)
        return f.substitute(self.rules())

    def shift_rules(self, shifts: dict[int, int]) -> dict[str, tuple[int, Monomial]]:
        """``a_j -> q^{s_j} a_j`` written on the ``r`` variables."""
        exps: dict[int, int] = {}
        for j, s in shifts.items():
            if not s:
                continue
            if j - 1 >= 1:
                exps[j - 1] = exps.get(j - 1, 0) + s
            if j <= self.n - 1:
                exps[j] = exps.get(j, 0) - s
        return {f"r_{i}": (1, _r(i) * _m(q=e)) for i, e in exps.items() if e}


def kappa_rules(k: int, n: int) -> dict[str, Monomial]:
    """Images of ``z_i``, ``hbar_dual`` and ``u`` (``q`` is fixed)."""
    check_kn(k, n)
    rules: dict[str, Monomial] = {}
    for i in range(1, n):
        if i < k:
            rules[f"z_{i}"] = _r(i) * _m(hbar=-1)
        elif i < n - k:
            rules[f"z_{i}"] = _r(i)
        else:
            rules[f"z_{i}"] = _r(i) * _m(hbar=1)
    rules["hbar_dual"] = _m(q=1, hbar=-1)
    rules["u"] = _m(z=1, hbar=k, q=-k)
    return rules


def kappa_inverse_rules(k: int, n: int) -> dict[str, Monomial]:
    check_kn(k, n)
    rules: dict[str, Monomial] = {}
    # hbar -> q / hbar_dual
    for i in range(1, n):
        if i < k:
            rules[f"r_{i}"] = Monomial.of({f"z_{i}": 1, "q": 1, "hbar_dual": -1})
        elif i < n - k:
            rules[f"r_{i}"] = Monomial.of({f"z_{i}": 1})
        else:
            rules[f"r_{i}"] = Monomial.of({f"z_{i}": 1, "q": -1, "hbar_dual": 1})
    rules["hbar"] = _m(q=1, hbar_dual=-1)
    rules["z"] = _m(u=1, hbar_dual=k)
    return rules


def kappa_monomial(m: Monomial, k: int, n: int) -> Monomial:
    (img,) = LaurentPoly.monomial(m).substitute(kappa_rules(k, n)).terms()
    return Monomial(img[0])


def kappa_caps(spec: CapSpec) -> CapSpec:
    """Dual caps to X-side caps: Kähler total becomes ratio total, the ``u`` cap becomes the ``z`` cap."""
    caps = spec.as_dict()
    out = {}
    if KAHLER in caps:
        out[RATIO] = caps[KAHLER]
    if "u" in caps:
        out[KAHLER] = caps["u"]
    return CapSpec(out)


def kappa(s: TruncatedSeries, k: int, n: int, caps=None) -> TruncatedSeries:
    tgt = kappa_caps(s.spec) if caps is None else caps
    return series_substitute(s, kappa_rules(k, n), tgt)


def kappa_ratfunc(f, k: int, n: int) -> RatFunc:
    return RatFunc.coerce(f).substitute(kappa_rules(k, n))


# -- product forms in a ---------------------------------------------------------


def _a(i: int) -> Monomial:
    return Monomial.of({f"a_{i}": 1})


def prform_phi(k: int, n: int) -> PhiProduct:
    """``prod_{j > n-k} prod_{i <= n-k} phi(q a_j/a_i) / phi(hbar a_j/a_i)``."""
    out = PhiProduct()
    for j in range(n - k + 1, n + 1):
        for i in range(1, n - k + 1):
            x = _a(j) / _a(i)
            out = out * PhiProduct.phi(_m(q=1) * x) / PhiProduct.phi(_m(hbar=1) * x)
    return out


def _phi_product_series(p: PhiProduct, spec: CapSpec) -> TruncatedSeries:
    out = TruncatedSeries.one(spec)
    for (c, e), m in p.args():
        f = phi_truncated((c, e), spec) if m > 0 else phi_inverse_truncated((c, e), spec)
        for _ in range(abs(m)):
            out = out * f
    return out


def check_prform(k: int, n: int, rcap: int) -> Report:
    rep = Report("prform", {"k": k, "n": n}, {"r": rcap})
    with timed(rep):
        frame = RatioFrame(n)
        left = kappa(vertex_product(rectangle(k, n), {KAHLER: rcap}), k, n)
        right = _phi_product_series(prform_phi(k, n).substitute(frame.rules()), CapSpec({RATIO: rcap}))
        compare_series(rep, left, right)
    return rep


def check_prefactor(k: int, zcap: int) -> Report:
    """kappa(prefactor_dual) against prefactor_X, both truncated in ``z``."""
    rep = Report("prefactor", {"k": k}, {"z": zcap})
    with timed(rep):
        n = 2 * k
        left = kappa(prefactor_dual(k, {"u": zcap}), k, n, CapSpec({KAHLER: zcap}))
        compare_series(rep, left, prefactor_X(k, zcap))
    return rep


# -- coefficient identity -------------------------------------------------------


def _top_shifts(k: int, n: int, ds: tuple[int, ...]) -> dict[int, int]:
    return {n - k + m: ds[m - 1] for m in range(1, k + 1)}


def vgr_ratio(k: int, n: int, ds: tuple[int, ...]) -> RatFunc:
    """``p^ds kappa(V_lambda) / kappa(V_lambda)`` from the factored product form."""
    base = prform_phi(k, n)
    rules = {f"a_{j}": (1, _a(j) * _m(q=s)) for j, s in _top_shifts(k, n, ds).items() if s}
    ratio = (base.substitute(rules) / base).collapse()
    return ratio.to_ratfunc()


def vgr_expected_ratio(k: int, n: int, ds: tuple[int, ...]) -> RatFunc:
    """``prod_{j > n-k} prod_{i <= n-k} (hbar a_j/a_i)_{d_j} / (q a_j/a_i)_{d_j}``."""
    num, den = [], []
    for j, d in _top_shifts(k, n, ds).items():
        for i in range(1, n - k + 1):
            x = _a(j) / _a(i)
            num.append(qpoch(_m(hbar=1) * x, d))
            den.append(qpoch(_m(q=1) * x, d))
    return qfactor_ratio(num, den)


def operator_coefficient_a(k: int, n: int, ds: tuple[int, ...]) -> RatFunc:
    """Coefficient of ``p^ds`` in ``D_d(a_{n-k+1..n}; q, hbar)``."""
    rules = {x_name(m): _a(n - k + m) for m in range(1, k + 1)}
    rules["t"] = _m(hbar=1)
    return d_coefficient(ds).substitute(rules)


def check_vgrcoeff(k: int, n: int, ds: tuple[int, ...]) -> Report:
    check_kn(k, n)
    ds = tuple(ds)
    if len(ds) != k:
        raise ValueError(f"need {k} degrees")
    rep = Report("vgrcoeff", {"k": k, "n": n, "d": ds})
    with timed(rep):
        frame = RatioFrame(n)
        ratio = frame(vgr_ratio(k, n, ds))
        compare_ratfunc(rep, "shift ratio", ratio, frame(vgr_expected_ratio(k, n, ds)))
        term = frame(operator_coefficient_a(k, n, ds)) * ratio
        compare_ratfunc(rep, "operator term", term, frame(grassmannian_term(k, n, ds).to_ratfunc()))
    return rep


# -- descendant insertions --------------------------------------------------------


def _q_over_hd() -> Monomial:
    return _m(q=1, hbar_dual=-1)


def row_descendant(d: int, k: int) -> RatFunc:
    """``(q/hbar_dual)_d/(q)_d * P_(d)(x; q, q/hbar_dual)`` in ``x_1..x_k``."""
    pref = qfactor_ratio([qpoch(_q_over_hd(), d)], [qpoch(_m(q=1), d)])
    if d == 0:
        return pref
    p = macdonald_P((d,), k).to_ratfunc().substitute({"t": _q_over_hd()})
    return pref * p


def insertion_descendant(d: int, k: int) -> RatFunc:
    """The descendant of the insertion identity, including ``hbar_dual^(d(1-k))``."""
    return row_descendant(d, k) * RatFunc(LaurentPoly.monomial(_m(hbar_dual=d * (1 - k))))


def apply_D_to_kappa_V(k: int, n: int, d: int, rcap: int) -> TruncatedSeries:
    """``D_d(a; q, hbar)`` applied to ``kappa(V_lambda)`` as a series in ``r``."""
    spec = CapSpec({RATIO: rcap})
    frame = RatioFrame(n)
    coeffs = []
    deficit = 0
    for ds in compositions_exact(d, k):
        c = frame(operator_coefficient_a(k, n, ds))
        if c.is_zero():
            continue
        cs = series_expand(c, spec)
        deficit = max(deficit, -min(cs.valuation()))
        coeffs.append((ds, cs))
    wide = CapSpec({RATIO: rcap + deficit})
    kv = kappa(vertex_product(rectangle(k, n), {KAHLER: rcap + deficit}), k, n, wide)
    out = TruncatedSeries.zero(spec)
    for ds, cs in coeffs:
        shifted = kv.substitute(frame.shift_rules(_top_shifts(k, n, ds)))
        out = out + product_to_caps([cs, shifted], spec)
    return out


def check_insertion(k: int, n: int, d: int, rcap: int) -> Report:
    check_kn(k, n)
    rep = Report("insertion", {"k": k, "n": n, "d": d}, {"r": rcap})
    with timed(rep):
        left = apply_D_to_kappa_V(k, n, d, rcap)
        tau = insertion_descendant(d, k)
        right = kappa(vertex_Xlambda(rectangle(k, n), {KAHLER: rcap}, tau), k, n)
        compare_series(rep, left, right)
    return rep


def reduce_descendant(k: int, ucap: int) -> RatFunc:
    """``sum_{d <= ucap} (q/hbar_dual)_d/(q)_d P_(d)(x; q, q/hbar_dual) (hbar_dual u)^d``."""
    out = RatFunc.zero()
    for d in range(ucap + 1):
        w = RatFunc(LaurentPoly.monomial(_m(hbar_dual=d, u=d)))
        out = out + row_descendant(d, k) * w
    return out


def check_reduce(k: int, n: int, zcap: int, ucap: int) -> Report:
    """Dual vertex function = prefactor times the point vertex function with the row descendant."""
    check_kn(k, n)
    rep = Report("reduce", {"k": k, "n": n}, {"z": zcap, "u": ucap})
    with timed(rep):
        spec = CapSpec({KAHLER: zcap, "u": ucap})
        left = vertex_Xdual(k, n, spec)
        inner = vertex_Xlambda(rectangle(k, n), spec, reduce_descendant(k, ucap))
        right = prefactor_dual(k, spec) * inner
        compare_series(rep, left, right)
    return rep


# -- main identity -----------------------------------------------------------------


def main_left(k: int, n: int, zcap: int, rcap: int) -> TruncatedSeries:
    """``prefactor_X * V_p`` with each ``z``-coefficient rewritten in ``r`` and expanded."""
    spec = CapSpec({KAHLER: zcap, RATIO: rcap})
    frame = RatioFrame(n)
    groups: dict[int, RatFunc] = {}
    for ds in compositions(zcap, k):
        val = grassmannian_term(k, n, ds).to_ratfunc()
        s = sum(ds)
        groups[s] = groups[s] + val if s in groups else val
    vx = TruncatedSeries.zero(spec)
    for s, val in sorted(groups.items()):
        vx = vx + series_expand(frame(val), spec).shift_by(_m(z=s))
    return prefactor_X(k, spec) * vx


def main_right(k: int, n: int, zcap: int, rcap: int, inverse: str = "series") -> TruncatedSeries:
    """``kappa(V_lambda^-1 V^!)`` truncated at ``z``-cap ``zcap`` and ``r``-cap ``rcap``.

    ``inverse`` selects series inversion of the product form (``"series"``)
    or the reciprocal product itself (``"product"``).
    """
    from .vertex import vertex_product_inverse

    dual_spec = CapSpec({KAHLER: rcap, "u": zcap})
    vdual = vertex_Xdual(k, n, dual_spec)
    lam = rectangle(k, n)
    if inverse == "series":
        vinv = series_inverse(vertex_product(lam, dual_spec))
    else:
        vinv = vertex_product_inverse(lam, dual_spec)
    return kappa(vinv * vdual, k, n, CapSpec({KAHLER: zcap, RATIO: rcap}))


def check_main(k: int, n: int, zcap: int, rcap: int) -> Report:
    check_kn(k, n)
    rep = Report("main", {"k": k, "n": n}, {"z": zcap, "r": rcap})
    with timed(rep):
        if rcap == 0:
            rep.weak = True
        compare_series(rep, main_left(k, n, zcap, rcap), main_right(k, n, zcap, rcap))
    return rep


def proof_bundle(k: int, n: int, zcap: int, rcap: int) -> list[Report]:
    """The reports whose conjunction the main identity factors through, then the identity itself."""
    reports = [check_prform(k, n, rcap)]
    for ds in compositions(zcap, k):
        reports.append(check_vgrcoeff(k, n, ds))
    for d in range(zcap + 1):
        reports.append(check_insertion(k, n, d, rcap))
    reports.append(check_reduce(k, n, rcap, zcap))
    reports.append(check_main(k, n, zcap, rcap))
    return reports
