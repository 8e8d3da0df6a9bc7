"""Vertex functions of T*Gr(k,n), of its dual quiver variety, and of the point variety X_lambda.

Each vertex function is a sum over degree tuples of products of q-Pochhammer
ratios.  Summands are assembled as ``QFactorList`` objects, so tuples outside
the effective cone come out as ``ZERO`` through an identically vanishing
factor rather than by division.  Sums run over the whole nonnegative orthant
up to the caps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator

from .algebra.laurent import Monomial
from .algebra.ratfunc import RatFunc
from .algebra.series import CapSpec, TruncatedSeries, series_expand
from .algebra.vars import VARS, Group
from .errors import LengthError, PoleError
from .partitions import Partition, QuiverA, check_kn, rectangle, zbox
from .pochhammer import QFactorList, phi_inverse_truncated, phi_truncated, qpoch
from .reports import FAIL, Report, compare_series, timed

KAHLER = Group.KAHLER


def _spec(caps, key) -> CapSpec:
    """An int means a single cap on ``key``; mappings and specs pass through."""
    if isinstance(caps, CapSpec):
        return caps
    return CapSpec({key: caps}) if isinstance(caps, int) else CapSpec(caps)


def _m(**kw: int) -> Monomial:
    return Monomial.of(**kw)


def _hd(k: int) -> Monomial:
    return _m(hbar_dual=k)


def _q_hd(qe: int, he: int) -> Monomial:
    return _m(q=qe, hbar_dual=he)


def compositions(total_max: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer tuples of length ``parts`` with sum at most ``total_max``."""
    if parts == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in compositions(total_max - first, parts - 1):
            yield (first,) + rest


def compositions_exact(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer tuples of length ``parts`` summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions_exact(total - first, parts - 1):
            yield (first,) + rest


# -- sum formula for T*Gr(k, n) ----------------------------------------------------


def _a_ratio(j: int, i: int) -> Monomial:
    return _m(**{f"a_{j}": 1}) / _m(**{f"a_{i}": 1}) if i != j else Monomial.one()


def grassmannian_term(k: int, n: int, ds: tuple[int, ...]) -> QFactorList:
    """Summand of the T*Gr(k,n) vertex function at ``d_{n-k+1..n} = ds`` (without ``z``)."""
    check_kn(k, n)
    return _grassmannian_term(k, n, ds)


def _grassmannian_term(k: int, n: int, ds: tuple[int, ...]) -> QFactorList:
    if len(ds) != k:
        raise ValueError("need one degree per tautological weight")
    hb, q = _m(hbar=1), _m(q=1)
    top = range(n - k + 1, n + 1)
    d = dict(zip(top, ds))
    out = QFactorList()
    for i in range(1, n + 1):
        for j in top:
            x = _a_ratio(j, i)
            out = out * qpoch(hb * x, d[j]) / qpoch(q * x, d[j])
    for i in top:
        for j in top:
            x = _a_ratio(j, i)
            out = out * qpoch(q * x, d[j] - d[i]) / qpoch(hb * x, d[j] - d[i])
    return out


def vertex_X(k: int, n: int, D: int) -> TruncatedSeries:
    """Vertex function of T*Gr(k,n) at the fixed point ``{n-k+1..n}``, to ``z``-degree ``D``."""
    check_kn(k, n)
    return _vertex_X(k, n, D)


def vertex_Grkk(k: int, D: int) -> TruncatedSeries:
    """The same sum for the zero-dimensional T*Gr(k,k) (outside the ``2k <= n`` range)."""
    return _vertex_X(k, k, D)


def _vertex_X(k: int, n: int, D: int) -> TruncatedSeries:
    caps = CapSpec({KAHLER: D})
    body = {}
    for ds in compositions(D, k):
        val = _grassmannian_term(k, n, ds).to_ratfunc()
        e = _m(z=sum(ds)).exps
        body[e] = body[e] + val if e in body else val
    out = TruncatedSeries.zero(caps)
    for e, val in sorted(body.items()):
        out = out + TruncatedSeries.from_scalar(val, caps).shift_by(e)
    return out


# -- sum formula for the quiver varieties of a partition ---------------------------


@dataclass(frozen=True)
class LambdaData:
    """Node data used by the point-variety sum."""

    lam: Partition
    quiver: QuiverA
    frame: int
    nodes: int
    slots: tuple[tuple[int, int], ...] = field(default=())

    @classmethod
    def of(cls, lam: Partition) -> "LambdaData":
        quiver = QuiverA.for_partition(lam)
        slots = tuple((i, j) for i in range(1, quiver.nodes + 1) for j in range(1, quiver.dim(i) + 1))
        return cls(lam, quiver, lam[0] if lam else 0, quiver.nodes, slots)


def lambda_term(data: LambdaData, d: dict[tuple[int, int], int]) -> QFactorList:
    """Summand of the point-variety sum at degrees ``d[(node, j)]`` (without Kähler monomial)."""
    q = _m(q=1)
    v = data.quiver.dim
    f = data.frame
    out = QFactorList()
    for j in range(1, v(f) + 1):
        out = out * qpoch(_hd(j), d[f, j]) / qpoch(q * _hd(j - 1), d[f, j])
    for i in range(1, data.nodes):
        off = 0 if i < f else 1
        for j in range(1, v(i) + 1):
            for l in range(1, v(i + 1) + 1):
                m = d[i + 1, l] - d[i, j]
                out = out * qpoch(_hd(l - j + off), m) / qpoch(q * _hd(l - j - 1 + off), m)
    for i in range(1, data.nodes + 1):
        for j in range(1, v(i) + 1):
            for l in range(1, v(i) + 1):
                if l == j:
                    continue
                m = d[i, l] - d[i, j]
                out = out * qpoch(q * _hd(l - j), m) / qpoch(_hd(l - j + 1), m)
    return out


def u_block(k: int, degs: tuple[int, ...]) -> QFactorList:
    """Extra factors of the dual Grassmannian sum at node ``n-k``."""
    q, u = _m(q=1), _m(u=1)
    out = QFactorList()
    for j, dj in enumerate(degs, start=1):
        out = out * qpoch(u * _hd(j), dj) / qpoch(q * u * _hd(j - 1), dj)
    return out


def kahler_monomial(d: dict[tuple[int, int], int]) -> Monomial:
    acc: dict[str, int] = {}
    for (i, _), x in d.items():
        acc[f"z_{i}"] = acc.get(f"z_{i}", 0) + x
    return Monomial.of(acc)


@dataclass
class SumStats:
    """Bookkeeping for one vertex sum: summands seen, vanishing and alarms."""

    summands: int = 0
    zero: int = 0
    poles: int = 0


def _degree_tuples(data: LambdaData, D: int) -> Iterator[dict[tuple[int, int], int]]:
    for vals in compositions(D, len(data.slots)):
        yield dict(zip(data.slots, vals))


def lambda_summands(lam: Partition, D: int, stats: SumStats | None = None):
    """Yield ``(degrees, RatFunc)`` for every nonvanishing summand up to total degree ``D``."""
    data = LambdaData.of(Partition(lam))
    for d in _degree_tuples(data, D):
        if stats is not None:
            stats.summands += 1
        try:
            val = lambda_term(data, d)
        except PoleError:
            if stats is not None:
                stats.poles += 1
            raise
        if val.is_zero():
            if stats is not None:
                stats.zero += 1
            continue
        yield d, val


def insertion_point(lam: Partition, d: dict[tuple[int, int], int]) -> dict[str, Monomial]:
    """Fixed-point weights at node ``l(lam)`` shifted by the degrees: ``x_j = hbar_dual^(j-1) q^d``."""
    node = len(lam)
    quiver = QuiverA.for_partition(lam)
    return {f"x_{j}": _q_hd(d[node, j], j - 1) for j in range(1, quiver.dim(node) + 1)}


def vertex_Xlambda(lam, caps, tau: RatFunc | None = None, stats: SumStats | None = None) -> TruncatedSeries:
    """Point-variety vertex function, optionally with a descendant ``tau`` at node ``l(lam)``.

    ``caps`` is an int (total Kähler cap) or a cap mapping; ``tau`` is a rational
    function in ``x_1..x_k`` (and possibly other variables, e.g. ``u``).
    """
    lam = Partition(lam)
    spec = _spec(caps, KAHLER)
    D = spec.as_dict()[KAHLER]
    if tau is not None:
        k = QuiverA.for_partition(lam).dim(len(lam)) if lam else 0
        allowed = {VARS[f"x_{j}"].index for j in range(1, k + 1)}
        extra = {i for i in tau.variables() if VARS.by_index(i).name.startswith("x_")} - allowed
        if extra:
            raise LengthError(f"descendant uses more than {k} variables")
    groups: dict[tuple, RatFunc] = {}
    for d, fl in lambda_summands(lam, D, stats):
        val = fl.to_ratfunc()
        if tau is not None:
            val = val * tau.substitute(insertion_point(lam, d))
        e = kahler_monomial(d).exps
        groups[e] = groups[e] + val if e in groups else val
    return _assemble(groups, spec)


def _assemble(groups: dict, spec: CapSpec) -> TruncatedSeries:
    out = TruncatedSeries.zero(spec)
    for e, val in sorted(groups.items()):
        if val.is_zero():
            continue
        out = out + series_expand(val, spec).shift_by(e)
    return out


def vertex_Xdual(k: int, n: int, caps, stats: SumStats | None = None) -> TruncatedSeries:
    """Dual-side vertex function at the fixed point of the rectangle ``(k^(n-k))``.

    ``caps`` maps ``KAHLER`` (total degree in ``z_1..z_{n-1}``) and ``"u"``.
    """
    check_kn(k, n)
    spec = _spec(caps, KAHLER)
    D = spec.as_dict()[KAHLER]
    lam = rectangle(k, n)
    node = n - k
    groups: dict[tuple, RatFunc] = {}
    for d, fl in lambda_summands(lam, D, stats):
        degs = tuple(d[node, j] for j in range(1, k + 1))
        val = (fl * u_block(k, degs)).to_ratfunc()
        e = kahler_monomial(d).exps
        groups[e] = groups[e] + val if e in groups else val
    return _assemble(groups, spec)


# -- product forms and prefactors ---------------------------------------------


def vertex_product(lam, caps) -> TruncatedSeries:
    """``prod_box phi(hbar_dual z_box) / phi(z_box)`` truncated at ``caps``."""
    lam = Partition(lam)
    spec = _spec(caps, KAHLER)
    out = TruncatedSeries.one(spec)
    for cell in lam.cells():
        zb = zbox(lam, cell)
        out = out * phi_truncated(_hd(1) * zb, spec) * phi_inverse_truncated(zb, spec)
    return out


def vertex_product_inverse(lam, caps) -> TruncatedSeries:
    """``prod_box phi(z_box) / phi(hbar_dual z_box)``, built directly from the product form."""
    lam = Partition(lam)
    spec = _spec(caps, KAHLER)
    out = TruncatedSeries.one(spec)
    for cell in lam.cells():
        zb = zbox(lam, cell)
        out = out * phi_truncated(zb, spec) * phi_inverse_truncated(_hd(1) * zb, spec)
    return out


def prefactor_dual(k: int, caps) -> TruncatedSeries:
    """``prod_{i=1..k} phi(u hbar_dual^i) / phi(u q hbar_dual^(i-1))``."""
    spec = _spec(caps, "u")
    out = TruncatedSeries.one(spec)
    for i in range(1, k + 1):
        out = out * phi_truncated(_m(u=1, hbar_dual=i), spec)
        out = out * phi_inverse_truncated(_m(u=1, q=1, hbar_dual=i - 1), spec)
    return out


def prefactor_X(k: int, caps) -> TruncatedSeries:
    """``prod_{i=1..k} phi((hbar/q)^(i-1) z) / phi(hbar (hbar/q)^(i-1) z)``."""
    spec = _spec(caps, KAHLER)
    out = TruncatedSeries.one(spec)
    for i in range(1, k + 1):
        out = out * phi_truncated(_m(z=1, hbar=i - 1, q=1 - i), spec)
        out = out * phi_inverse_truncated(_m(z=1, hbar=i, q=1 - i), spec)
    return out


def in_cone(lam: Partition, d: dict[tuple[int, int], int]) -> bool:
    """Interlacing inequalities cutting out the nonvanishing summands.

    Degrees increase along each node, and consecutive nodes interlace:
    ``d[i+1,j] <= d[i,j] <= d[i+1,j+1]`` left of the framing node and
    ``d[i+1,j-1] <= d[i,j] <= d[i+1,j]`` from it onwards (bounds that refer
    to a missing slot are dropped).
    """
    data = LambdaData.of(Partition(lam))
    v = data.quiver.dim
    for i in range(1, data.nodes + 1):
        for j in range(1, v(i)):
            if d[i, j] > d[i, j + 1]:
                return False
    for i in range(1, data.nodes):
        lo, hi = (0, 1) if i < data.frame else (-1, 0)
        for j in range(1, v(i) + 1):
            if 1 <= j + lo <= v(i + 1) and d[i + 1, j + lo] > d[i, j]:
                return False
            if 1 <= j + hi <= v(i + 1) and d[i, j] > d[i + 1, j + hi]:
                return False
    return True


def random_out_of_cone(lam: Partition, rng, count: int, max_degree: int = 4) -> list[dict]:
    """Random degree tuples violating :func:`in_cone` (rejection sampling)."""
    data = LambdaData.of(Partition(lam))
    out = []
    tries = 0
    while len(out) < count and tries < 100 * count:
        tries += 1
        d = {s: rng.randint(0, max_degree) for s in data.slots}
        if not in_cone(lam, d):
            out.append(d)
    return out


# -- checks ---------------------------------------------------------------------


def check_verpoint(lam, zcap: int) -> Report:
    """Sum form of the point vertex function against its phi-product form."""
    lam = Partition(lam)
    rep = Report("verpoint", {"partition": str(lam)}, {"z": zcap})
    with timed(rep):
        stats = SumStats()
        left = vertex_Xlambda(lam, zcap, stats=stats)
        compare_series(rep, left, vertex_product(lam, zcap))
        if stats.poles:
            rep.status = FAIL
            rep.message = f"{stats.poles} pole alarms"
    return rep


def check_cone(lam, samples: int = 50, seed: int = 0, k: int | None = None) -> Report:
    """Out-of-cone summands vanish exactly; none raises a pole alarm.

    With ``k`` set, the dual-side summand (extra ``u`` block at node
    ``l(lam)``) is tested as well.
    """
    lam = Partition(lam)
    rep = Report("cone", {"partition": str(lam), "samples": samples, "seed": seed})
    with timed(rep):
        data = LambdaData.of(lam)
        rng = random.Random(seed)
        tuples = random_out_of_cone(lam, rng, samples)
        rep.params["tested"] = len(tuples)
        for d in tuples:
            label = ",".join(f"{i}.{j}:{x}" for (i, j), x in sorted(d.items()))
            try:
                term = lambda_term(data, d)
                if k is not None:
                    term = term * u_block(k, tuple(d[len(lam), j] for j in range(1, k + 1)))
                if not term.is_zero():
                    rep.fail(label, term, 0)
            except PoleError as exc:
                rep.fail(label, f"PoleError: {exc}", 0)
    return rep
