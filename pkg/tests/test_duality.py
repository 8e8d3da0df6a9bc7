import pytest

from qdual.algebra.laurent import Monomial, var
from qdual.algebra.ratfunc import RatFunc
from qdual.algebra.series import TruncatedSeries
from qdual.duality import (
    RatioFrame,
    check_insertion,
    check_main,
    check_prefactor,
    check_prform,
    check_reduce,
    check_vgrcoeff,
    kappa,
    kappa_monomial,
    kappa_rules,
    main_left,
    main_right,
    prform_phi,
    proof_bundle,
    vgr_ratio,
)
from qdual.pochhammer import phi_inverse_truncated, phi_truncated
from qdual.vertex import vertex_product

q, hbar, r1 = (var(n) for n in ("q", "hbar", "r_1"))


def test_kappa_examples():
    assert kappa_rules(1, 2)["z_1"] == Monomial.of(hbar=1, r_1=1)
    assert kappa_monomial(Monomial.of(hbar_dual=2), 2, 4) == Monomial.of(q=2, hbar=-2)
    for k in (1, 2, 3):
        got = kappa_monomial(Monomial.of(u=1, hbar_dual=1), k, 2 * k)
        assert got == Monomial.of(z=1, hbar=k - 1, q=1 - k)


def test_kappa_on_series():
    s = TruncatedSeries.from_poly(1 + var("z_1"), {"KAHLER": 1})
    assert kappa(s, 1, 2) == TruncatedSeries.from_poly(1 + hbar * r1, {"RATIO": 1})


def test_ratio_frame():
    frame = RatioFrame(3)
    assert frame.ratio(2, 1) == Monomial.of(r_1=1)
    assert frame.ratio(3, 1) == Monomial.of(r_1=1, r_2=1)


def test_one_box_product_form():
    spec = {"RATIO": 4}
    expected = phi_truncated(Monomial.of(q=1, r_1=1), spec) * phi_inverse_truncated(Monomial.of(hbar=1, r_1=1), spec)
    assert check_prform(1, 2, 4).passed
    assert kappa(vertex_product((1,), {"KAHLER": 4}), 1, 2) == expected
    assert prform_phi(1, 2).substitute(RatioFrame(2).rules()).truncated(spec) == expected


def test_coefficient_ratios():
    assert vgr_ratio(2, 4, (0, 0)) == RatFunc.one()
    got = vgr_ratio(1, 2, (1,)).substitute({"a_2": Monomial.of(a_1=1, r_1=1)})
    assert got == RatFunc.coerce(1 - hbar * r1) / (1 - q * r1)
    assert check_vgrcoeff(2, 4, (1, 1)).passed


@pytest.mark.parametrize("k,n", [(1, 2), (1, 3), (2, 4)])
def test_descendant_chain(k, n):
    assert check_prefactor(k, 2).passed
    assert check_reduce(k, n, 2, 2).passed
    for d in (0, 1):
        assert check_insertion(k, n, d, 2).passed


def test_main_identity_small():
    for k, n in [(1, 2), (1, 3), (2, 4)]:
        rep = check_main(k, n, 2, 2)
        assert rep.passed, rep.summary()
    left = main_left(1, 2, 0, 3)
    assert left.constant_term() == RatFunc.one()


def test_main_right_inverse_paths_agree():
    assert main_right(1, 3, 2, 2, inverse="series") == main_right(1, 3, 2, 2, inverse="product")
    assert main_right(2, 4, 1, 2, inverse="series") == main_right(2, 4, 1, 2, inverse="product")


def test_weak_flag():
    rep = check_main(1, 2, 2, 0)
    assert rep.passed and rep.weak


def test_proof_chain_implies_main():
    # if every lemma in the chain holds, the main identity must hold too
    reports = proof_bundle(1, 3, 2, 2)
    names = [r.check for r in reports]
    assert names[-1] == "main"
    assert all(r.passed for r in reports[:-1])
    assert reports[-1].passed


@pytest.mark.parametrize("k,n", [(1, 2), (1, 3), (2, 4), (2, 5)])
def test_kappa_inverts(k, n):
    from qdual.duality import kappa_inverse_rules

    inverse = kappa_inverse_rules(k, n)
    for name, image in kappa_rules(k, n).items():
        back = Monomial.one()
        for v, e in image.items():
            back = back * inverse[v.name] ** e if v.name in inverse else back * Monomial.of({v.name: e})
        assert back == Monomial.of({name: 1})
