from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from qdual.algebra.laurent import Monomial, var
from qdual.algebra.ratfunc import RatFunc
from qdual.errors import LengthError
from qdual.macdonald import (
    SymPoly,
    check_extensions,
    check_orthogonality,
    check_qbinomial,
    check_triangularity,
    macdonald_eval,
    macdonald_P,
    monomial_sym,
    power_inner,
    sym_inner,
)
from qdual.partitions import Partition, partitions_of

q, t, x1, x2 = (var(n) for n in ("q", "t", "x_1", "x_2"))
GOLDEN = Path(__file__).parent / "golden"
P = Partition


def test_monomial_symmetric():
    assert monomial_sym((1,), 2) == x1 + x2
    assert monomial_sym((1, 1), 2) == x1 * x2
    assert monomial_sym((2, 1), 2) == x1**2 * x2 + x1 * x2**2
    with pytest.raises(LengthError):
        monomial_sym((1, 1, 1), 2)


def test_power_sum_norms():
    assert power_inner((1,), (1,)) == (1 - q) / RatFunc.coerce(1 - t)
    assert power_inner((2,), (2,)) == RatFunc.coerce(2 * (1 - q**2)) / (1 - t**2)
    assert power_inner((1, 1), (2,)).is_zero()


def test_low_degree_polynomials():
    assert macdonald_P((1,), 2) == SymPoly(2, {P((1,)): 1})
    assert macdonald_P((1, 1), 2) == SymPoly(2, {P((1, 1)): 1})


def test_two_row_coefficient():
    c = macdonald_P((2,), 2).coefficient((1, 1))
    assert c == RatFunc.coerce((1 + q) * (1 - t)) / (1 - q * t)
    p2, p11 = macdonald_P((2,), 2), macdonald_P((1, 1), 2)
    assert sym_inner(p2.coeffs, p11.coeffs, 2).is_zero()


def test_hook_coefficient():
    # classical value of the m[1,1,1] coefficient of P_(2,1)
    c = macdonald_P((2, 1), 3).coefficient((1, 1, 1))
    assert c == RatFunc.coerce((1 - t) * (2 + q + t + 2 * q * t)) / (1 - q * t**2)


def test_text_matches_golden():
    text = str(macdonald_P((2,), 2))
    assert text == (GOLDEN / "macdonald_P2_k2.txt").read_text().strip()


def test_schur_and_monomial_specialisations():
    # t = q gives Schur functions, t = 1 gives monomial symmetric functions
    for mu in partitions_of(3, max_length=3):
        p = macdonald_P(mu, 3)
        at_one = p.substitute_params({"t": 1})
        assert at_one == SymPoly(3, {mu: 1})
    s21 = macdonald_P((2, 1), 3).substitute_params({"t": Monomial.of(q=1)})
    assert s21 == SymPoly(3, {P((2, 1)): 1, P((1, 1, 1)): 2})


def test_evaluation():
    mu1, mu2 = 2, 1
    point = [Monomial.of(q=mu1), Monomial.of(q=mu2 - 1, t=1)]
    got = macdonald_eval((1,), point, k=2)
    assert got == RatFunc.coerce(q**mu1 + q**mu2 * t / q)
    assert macdonald_eval((3,), [Monomial.one()], k=1) == RatFunc.one()
    value = macdonald_eval((2,), [Monomial.of(q=2), Monomial.of(q=-1, t=1)], k=2)
    direct = macdonald_P((2,), 2).to_ratfunc().substitute({"x_1": Monomial.of(q=2), "x_2": Monomial.of(q=-1, t=1)})
    assert value == direct


@given(st.integers(1, 4), st.integers(1, 3))
def test_orthogonal_and_triangular(n, k):
    assert check_orthogonality(n, k).passed
    assert check_triangularity(n, k).passed


def test_extension_independence():
    for n in range(1, 6):
        assert check_extensions(n).passed


@pytest.mark.parametrize("k", [1, 2, 3])
def test_q_binomial_identity(k):
    assert check_qbinomial(k, 4).passed
