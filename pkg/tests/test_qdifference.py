from hypothesis import given, strategies as st

from qdual.algebra.laurent import Monomial, var
from qdual.algebra.ratfunc import RatFunc
from qdual.partitions import Partition, partitions_in_box
from qdual.pochhammer import qpoch_ratfunc
from qdual.qdifference import (
    ShiftOperator,
    apply,
    check_commute,
    check_diagonal,
    check_generating,
    check_lemma_rewrite,
    commutator,
    compose,
    d_coefficient,
    eigenvalue_D,
    op_D,
    op_N,
    qselberg_check,
    selberg_sides,
)

q, t, x1, x2 = (var(n) for n in ("q", "t", "x_1", "x_2"))
T, Q = Monomial.of(t=1), Monomial.of(q=1)


def ratio(d):
    return qpoch_ratfunc(T, d) / qpoch_ratfunc(Q, d)


def test_identity_operator():
    assert op_D(0, 2) == ShiftOperator.identity(2)
    assert op_N(0, 3) == ShiftOperator.identity(3)
    f = RatFunc.coerce(x1 * x2 + q)
    assert apply(ShiftOperator.identity(2), f) == f


@given(st.integers(0, 4))
def test_one_variable_operator(d):
    expected = ShiftOperator.shift(1, 1, d).scale(ratio(d))
    assert op_D(d, 1) == expected
    assert op_N(d, 1) == expected


@given(st.integers(0, 3), st.integers(0, 4))
def test_monomial_eigenvector(d, m):
    f = RatFunc.coerce(x1**m)
    assert apply(op_D(d, 1), f) == ratio(d) * q ** (d * m) * f


def test_two_variable_coefficient():
    expected = RatFunc.coerce(1 - t) / (1 - q) * (RatFunc.coerce(1 - (t / q) * x2 / x1) / (1 - x2 / x1))
    assert d_coefficient((1, 0)) == expected
    assert op_D(1, 2).coefficient((1, 0)) == expected


def test_eigenvalue_on_linear_function():
    f = RatFunc.coerce(x1 + x2)
    value = RatFunc.coerce(1 - t) / (1 - q) * (q + t / q)
    assert apply(op_D(1, 2), f) == value * f
    assert eigenvalue_D(1, Partition((1,)), 2) == value


def test_noumi_operator_has_two_terms():
    assert len(op_N(1, 2).terms) == 2


def test_composition_laws():
    a, b = ShiftOperator.shift(2, 1), ShiftOperator.shift(2, 2)
    assert compose(a, b) == compose(b, a)
    assert compose(ShiftOperator.identity(2), op_D(1, 2)) == op_D(1, 2)
    assert commutator(op_D(1, 2), op_D(2, 2)).is_zero()


def test_spectrum_examples():
    for d in range(4):
        assert eigenvalue_D(d, Partition(()), 1) == ratio(d)
        assert eigenvalue_D(d, Partition((3,)), 1) == ratio(d) * q ** (3 * d)
    assert check_diagonal(Partition((2, 1)), 2, 2).passed


@given(st.sampled_from(list(partitions_in_box(2, 2))), st.integers(0, 2))
def test_diagonal_property(mu, d):
    assert check_diagonal(mu, d, 2).passed


def test_commute_and_rewrite():
    assert check_commute(2, 2).passed
    for d in range(3):
        assert check_lemma_rewrite(d, 2).passed


def test_generating_function():
    assert check_generating(Partition((1,)), 2, 2).passed


def test_selberg_one_variable_is_q_binomial():
    left, right = selberg_sides(Partition(()), 1, 3)
    z = Monomial.of(z=1)
    for d in range(4):
        assert left.coefficient(z**d) == ratio(d)
    assert left == right


def test_selberg_small():
    assert qselberg_check(Partition((1,)), 2, 2).passed
    assert qselberg_check(Partition((2,)), 2, 2).passed


def test_selberg_needs_dual_parameter():
    # with P(q, t) in place of P(q, q/t) the two sides disagree already at z^1
    assert not qselberg_check(Partition((2,)), 2, 2, dual_t=False).passed


shifts = st.tuples(st.integers(0, 2), st.integers(0, 2))
coeffs = st.sampled_from([RatFunc.one(), RatFunc.coerce(q), RatFunc.coerce(1 - t * x1 / x2), RatFunc.coerce(x2) / (1 - q * x1)])


@st.composite
def operators(draw):
    op = ShiftOperator(2, {})
    for _ in range(draw(st.integers(1, 3))):
        op = op + ShiftOperator(2, {draw(shifts): draw(coeffs)})
    return op


@given(operators(), operators(), st.sampled_from([x1 + x2, x1 * x2**2 - q, 1 - t * x2]))
def test_apply_compose_coherence(a, b, poly):
    f = RatFunc.coerce(poly) / (1 - x1)
    assert apply(compose(a, b), f) == apply(a, apply(b, f))
