from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from qdual.algebra.laurent import Monomial, var
from qdual.algebra.ratfunc import RatFunc
from qdual.algebra.series import TruncatedSeries
from qdual.algebra.text import format_series, parse_series
from qdual.errors import PreconditionError
from qdual.partitions import Partition, partitions_of
from qdual.pochhammer import phi_inverse_truncated, phi_truncated, qpoch_ratfunc
from qdual.vertex import (
    LambdaData,
    check_cone,
    check_verpoint,
    grassmannian_term,
    in_cone,
    lambda_summands,
    lambda_term,
    prefactor_X,
    u_block,
    vertex_product,
    vertex_X,
    vertex_Xdual,
    vertex_Xlambda,
)

GOLDEN = Path(__file__).parent / "golden"
q, hbar, a1, a2 = (var(n) for n in ("q", "hbar", "a_1", "a_2"))
HD, Q = Monomial.of(hbar_dual=1), Monomial.of(q=1)
Z1 = Monomial.of(z_1=1)


def golden_series(name):
    return parse_series((GOLDEN / name).read_text())


@pytest.mark.parametrize("k,n", [(1, 2), (1, 3), (2, 4), (2, 5)])
def test_constant_term_is_one(k, n):
    assert vertex_X(k, n, 1).constant_term() == RatFunc.one()
    assert vertex_Xdual(k, n, {"KAHLER": 1, "u": 1}).constant_term() == RatFunc.one()


def test_first_coefficient_one_box():
    c = vertex_X(1, 2, 1).coefficient(Monomial.of(z=1))
    r = a2 / a1
    expected = RatFunc.coerce((1 - hbar) * (1 - hbar * r)) / ((1 - q) * (1 - q * r))
    assert c == expected


def test_first_coefficient_two_by_four():
    c = vertex_X(2, 4, 1).coefficient(Monomial.of(z=1))
    parts = [grassmannian_term(2, 4, ds).to_ratfunc() for ds in ((1, 0), (0, 1))]
    assert c == parts[0] + parts[1]
    assert vertex_X(2, 4, 1) == golden_series("vertex_X_k2_n4_z1.txt")


def test_precondition():
    with pytest.raises(PreconditionError):
        vertex_X(3, 4, 1)
    with pytest.raises(PreconditionError):
        vertex_Xdual(3, 5, 1)


def test_dual_golden():
    assert vertex_Xdual(1, 2, {"KAHLER": 3, "u": 3}) == golden_series("vertex_dual_k1_n2_z3_u3.txt")


def test_out_of_cone_summand_vanishes():
    d = {(1, 1): 0, (2, 1): 1, (2, 2): 0, (3, 1): 0}
    lam = Partition((2, 2))
    assert not in_cone(lam, d)
    assert (lambda_term(LambdaData.of(lam), d) * u_block(2, (1, 0))).is_zero()


@given(st.integers(0, 4))
def test_single_box(cap):
    expected = TruncatedSeries.zero({"KAHLER": cap})
    for d in range(cap + 1):
        coeff = qpoch_ratfunc(HD, d) / qpoch_ratfunc(Q, d)
        expected = expected + TruncatedSeries.from_scalar(coeff, {"KAHLER": cap}).shift_by(Z1**d)
    assert vertex_Xlambda((1,), cap) == expected
    product = phi_truncated(HD * Z1, {"KAHLER": cap}) * phi_inverse_truncated(Z1, {"KAHLER": cap})
    assert vertex_product((1,), cap) == product == expected


def test_single_box_descendant():
    tau = RatFunc.coerce(var("x_1"))
    got = vertex_Xlambda((1,), 3, tau)
    for d in range(4):
        coeff = qpoch_ratfunc(HD, d) / qpoch_ratfunc(Q, d) * Monomial.of(q=d)
        assert got.coefficient(Z1**d) == RatFunc.coerce(coeff)


def test_square_golden():
    golden = golden_series("vertex_lambda_22_z3.txt")
    assert vertex_Xlambda((2, 2), 3) == golden
    assert vertex_product((2, 2), 3) == golden
    assert vertex_product((), 3) == TruncatedSeries.one({"KAHLER": 3})


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1), (2, 2)])
def test_sum_equals_product(lam):
    assert check_verpoint(Partition(lam), 3).passed


@given(st.integers(1, 4).flatmap(lambda n: st.sampled_from(list(partitions_of(n)))), st.integers(0, 100))
def test_cone_vanishing(lam, seed):
    assert check_cone(lam, samples=10, seed=seed).passed


@given(st.sampled_from([(1,), (2, 1), (2, 2), (3, 1)]))
def test_cone_predicate_matches_summands(lam):
    # every enumerated nonvanishing summand lies in the cone
    lam = Partition(lam)
    for d, fl in lambda_summands(lam, 3):
        assert in_cone(lam, d)
        assert not fl.is_zero()


def test_prefactor():
    z = Monomial.of(z=1)
    spec = {"KAHLER": 3}
    assert prefactor_X(1, 3) == phi_truncated(z, spec) * phi_inverse_truncated(Monomial.of(z=1, hbar=1), spec)
    assert format_series(prefactor_X(2, 2)) == (GOLDEN / "prefactor_X_k2_z2.txt").read_text().strip()
