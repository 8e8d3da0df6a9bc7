import flint
import pytest
from hypothesis import given, strategies as st

from qdual.algebra.laurent import LaurentPoly, Monomial, var
from qdual.algebra.ratfunc import RatFunc, ratfunc_equal
from qdual.algebra.series import CapSpec, TruncatedSeries, series_expand, series_substitute
from qdual.algebra.text import format_laurent, format_ratfunc, format_series, parse_laurent, parse_ratfunc, parse_series
from qdual.errors import NonExpandablePole

q, t, x, y, z = (var(n) for n in ("q", "t", "x_1", "y", "z"))
hbar, hd, r1, r2, z1 = (var(n) for n in ("hbar", "hbar_dual", "r_1", "r_2", "z_1"))

NAMES = ["q", "t", "hbar", "x_1", "x_2", "y"]


@st.composite
def laurent(draw, max_terms=4):
    out = LaurentPoly.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        names = draw(st.lists(st.sampled_from(NAMES), max_size=3, unique=True))
        m = Monomial.of({n: draw(st.integers(-2, 3)) for n in names})
        c = draw(st.fractions(min_value=-5, max_value=5, max_denominator=4))
        out = out + LaurentPoly.monomial(m, flint.fmpq(c.numerator, c.denominator))
    return out


polys = laurent()
nonzero = laurent().filter(lambda p: not p.is_zero())


# -- Laurent polynomials -----------------------------------------------------


def test_distributivity_example():
    assert (1 - x) * (1 - q * x) == 1 - x - q * x + q * x**2


def test_identity_and_zero():
    p = 3 * q * t - x / y
    assert p * 1 == p
    assert ((x - x) * p).is_zero()


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys)
def test_laurent_text_roundtrip(p):
    assert parse_laurent(format_laurent(p)) == p


def test_negative_exponents_and_monomials():
    m = Monomial.of(q=2, t=-1)
    assert m * m.inverse() == Monomial.one()
    assert (LaurentPoly.monomial(m) * LaurentPoly.monomial(m.inverse())).is_one()
    assert (q**-1 * q).is_one()


# -- rational functions ------------------------------------------------------


def test_ratfunc_examples():
    assert ratfunc_equal((1 - q**2) / (1 - q), RatFunc(1 + q))
    assert not ratfunc_equal(x / y, y / x)
    base = (1 - t) * (1 + q) / (1 - q * t)
    scaled = RatFunc.fraction((1 - t) * (1 + q) * (1 - x), (1 - q * t) * (1 - x))
    assert ratfunc_equal(base, scaled)


@given(nonzero, nonzero, polys)
def test_field_laws(a, b, c):
    f = RatFunc(c) / a
    g = RatFunc(a) / b
    assert f * g == RatFunc(c) / b
    assert (f + g) - g == f
    assert (g * g.inverse()) == RatFunc.one()


@given(nonzero, polys)
def test_ratfunc_text_roundtrip(a, c):
    f = RatFunc(c) / (a * (1 - q * t))
    assert parse_ratfunc(format_ratfunc(f)) == f


def test_substitution_example():
    f = RatFunc(1 - hd)
    g = f.substitute({"hbar_dual": Monomial.of(q=1, hbar=-1)})
    assert g == RatFunc(1 - q / hbar)
    assert f.substitute({}) == f


# -- truncated series --------------------------------------------------------


def test_geometric_series():
    s = series_expand(1 / (1 - r1), {"RATIO": 3})
    assert s == TruncatedSeries.from_poly(1 + r1 + r1**2 + r1**3, {"RATIO": 3})


def test_geometric_times_numerator():
    s = series_expand((1 - hbar * r1) / (1 - q * r1), {"RATIO": 2})
    expected = 1 + (q - hbar) * r1 + q * (q - hbar) * r1**2
    assert s == TruncatedSeries.from_poly(expected, {"RATIO": 2})


def test_degree_zero_pole_rejected():
    with pytest.raises(NonExpandablePole):
        series_expand(1 / (r1 - r2), {"RATIO": 3})


def test_series_substitution_example():
    s = TruncatedSeries.from_poly(1 + z1, {"KAHLER": 2})
    out = series_substitute(s, {"z_1": Monomial.of(hbar=1, r_1=1)}, {"RATIO": 2})
    assert out == TruncatedSeries.from_poly(1 + hbar * r1, {"RATIO": 2})
    assert series_substitute(s, {}) == s


@given(st.integers(1, 4), st.integers(0, 3))
def test_inverse_and_truncation(cap, shift):
    spec = CapSpec({"z": cap})
    s = series_expand((1 - q**shift * z) / ((1 - t * z) * (1 - q * z)), spec)
    assert (s * s.inverse()) == TruncatedSeries.one(spec)
    lower = s.truncate({"z": cap - 1}) if cap > 1 else None
    if lower is not None:
        assert lower == series_expand((1 - q**shift * z) / ((1 - t * z) * (1 - q * z)), {"z": cap - 1})


@given(st.integers(1, 3))
def test_series_text_roundtrip(cap):
    s = series_expand((1 - hbar * z) / ((1 - q * z) * (1 - y * z)), {"z": cap, "y": 2})
    assert parse_series(format_series(s)) == s
    zero = TruncatedSeries.zero({"KAHLER": 2})
    assert format_series(zero) == "0 + O(KAHLER<=2)"
    assert parse_series(format_series(zero)) == zero


@given(polys, st.integers(1, 3))
def test_expansion_times_denominator(p, cap):
    den = (1 - q * z) * (1 - t * z) ** 2
    f = RatFunc.coerce(p) / den
    spec = {"z": cap}
    left = series_expand(f, spec) * TruncatedSeries.from_poly(den, spec)
    assert left == series_expand(RatFunc.coerce(p), spec)


nonnegative = laurent().filter(lambda p: all(min(e) >= 0 for e, _ in p.terms()))


@given(nonnegative, nonnegative)
def test_substitution_is_multiplicative(a, b):
    spec = {"z": 3}
    rules = {"x_1": Monomial.of(z=1, q=1), "y": Monomial.of(z=2)}
    sa = series_expand(RatFunc.coerce(a), spec)
    sb = series_expand(RatFunc.coerce(b) / (1 - t * z), spec)
    assert series_substitute(sa * sb, rules) == series_substitute(sa, rules) * series_substitute(sb, rules)
