import pytest
from hypothesis import given, strategies as st

from qdual.algebra.laurent import Monomial, var
from qdual.algebra.ratfunc import RatFunc
from qdual.algebra.series import TruncatedSeries, series_expand
from qdual.errors import NonTruncating
from qdual.pochhammer import ZERO, PhiProduct, phi_inverse_truncated, phi_ratio_truncated, phi_truncated, qfactor_ratio, qpoch, qpoch_ratfunc

q, x, y, z, hbar = (var(n) for n in ("q", "x_1", "y", "z", "hbar"))
X = Monomial.of(x_1=1)
HB = Monomial.of(hbar=1)


def test_qpoch_small_cases():
    assert qpoch_ratfunc(X, 0) == RatFunc.one()
    assert qpoch_ratfunc(X, 2) == RatFunc((1 - x) * (1 - q * x))
    assert qpoch_ratfunc(X, -1) == 1 / RatFunc(1 - x / q)


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_qpoch_splits(m, n):
    # (x)_{m+n} = (x)_m (x q^m)_n holds for every pair of integers
    left = qpoch_ratfunc(X, m + n)
    right = qpoch_ratfunc(X, m) * qpoch_ratfunc(Monomial.of(x_1=1, q=m), n)
    assert left == right


def test_zero_factor_detected():
    one = Monomial.one()
    assert qfactor_ratio([qpoch(one, 2)], [qpoch(Monomial.of(q=1, hbar=-1), 2)]) is ZERO


def test_ratio_simplifies():
    got = qfactor_ratio([qpoch(HB, 1)], [qpoch(Monomial.of(q=1), 1)])
    assert got == (1 - hbar) / RatFunc(1 - q)


def test_negative_index_ratio_is_finite():
    one = Monomial.one()
    got = qfactor_ratio([qpoch(one, -2)], [qpoch(Monomial.of(q=1, hbar=-1), -2)])
    # expand both products by the negative-index rule
    expected = RatFunc.coerce((1 - 1 / hbar) * (1 - 1 / (q * hbar))) / ((1 - 1 / q) * (1 - q**-2))
    assert got == expected


def test_phi_truncated_two_factors():
    got = phi_truncated(Monomial.of(z=1), {"z": 2, "q": 1})
    assert got == TruncatedSeries.from_poly(1 - (1 + q) * z + q * z**2, {"z": 2, "q": 1})


def test_phi_of_qy_to_first_order():
    got = phi_truncated(Monomial.of(q=1, y=1), {"y": 1})
    assert got == series_expand(1 - RatFunc(q * y) / (1 - q), {"y": 1})


def test_phi_of_one_does_not_truncate():
    with pytest.raises(NonTruncating):
        phi_truncated(Monomial.one(), {"z": 3})


@given(st.integers(1, 4))
def test_phi_times_inverse(cap):
    spec = {"z": cap}
    m = Monomial.of(z=1, hbar=1)
    assert phi_truncated(m, spec) * phi_inverse_truncated(m, spec) == TruncatedSeries.one(spec)


@given(st.integers(1, 4))
def test_q_binomial(cap):
    # phi(b x)/phi(x) = sum (b)_n/(q)_n x^n
    spec = {"z": cap}
    direct = phi_truncated(Monomial.of(z=1, hbar=1), spec) * phi_inverse_truncated(Monomial.of(z=1), spec)
    assert phi_ratio_truncated(Monomial.of(z=1, hbar=1), Monomial.of(z=1), spec) == direct


def test_phi_product_collapse():
    # phi(x)/phi(q^2 x) = (x)_2
    prod = PhiProduct.phi(X) * PhiProduct.phi(Monomial.of(x_1=1, q=2)).inverse()
    assert prod.collapse().to_ratfunc() == qpoch_ratfunc(X, 2)
