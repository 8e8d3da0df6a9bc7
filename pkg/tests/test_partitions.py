import pytest
from hypothesis import given, strategies as st

from qdual.algebra.laurent import Monomial
from qdual.errors import CellOutOfRange, PreconditionError
from qdual.partitions import Partition, QuiverA, check_kn, content, hook, partitions_in_box, partitions_of, sigma, zbox

partitions = st.lists(st.integers(1, 5), max_size=5).map(lambda xs: Partition(sorted(xs, reverse=True)))


def test_content_examples():
    assert content(Partition((2, 2)), (1, 2)) == 1
    assert content(Partition((2, 2)), (2, 1)) == 3
    assert content(Partition((1,)), (1, 1)) == 1


def test_hook_examples():
    assert hook(Partition((2, 2)), (1, 1)) == {(1, 1), (1, 2), (2, 1)}
    assert hook(Partition((2, 2)), (2, 2)) == {(2, 2)}
    assert hook(Partition((3,)), (1, 2)) == {(1, 2), (1, 3)}


def test_cell_outside_diagram():
    with pytest.raises(CellOutOfRange):
        hook(Partition((2,)), (2, 1))


def test_zbox_examples():
    assert zbox(Partition((1,)), (1, 1)) == Monomial.of(z_1=1)
    assert zbox(Partition((2, 2)), (1, 1)) == Monomial.of(z_1=1, z_2=1, z_3=1)
    assert zbox(Partition((2, 2)), (2, 2)) == Monomial.of(z_2=1)
    assert [sigma(Partition((2, 2)), i) for i in (1, 2, 3)] == [-1, 0, 1]


@given(partitions)
def test_conjugate_is_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().size == lam.size


@given(partitions)
def test_hook_sizes(lam):
    for cell in lam.cells():
        i, j = cell
        arm = lam.part(i) - j
        leg = lam.conjugate().part(j) - i
        assert len(hook(lam, cell)) == arm + leg + 1
    if lam.size:
        assert min(content(lam, c) for c in lam.cells()) == 1


@given(st.integers(0, 7))
def test_partition_counts(n):
    counts = [1, 1, 2, 3, 5, 7, 11, 15]
    parts = list(partitions_of(n))
    assert len(parts) == counts[n]
    assert len(set(parts)) == len(parts)
    assert all(p.size == n for p in parts)


def test_box_and_text():
    assert len(list(partitions_in_box(2, 2))) == 6
    assert str(Partition(())) == "0"
    assert Partition.parse("2,1") == Partition((2, 1))
    assert Partition((2, 1, 1)).dominated_by(Partition((2, 2)))
    assert not Partition((3,)).dominated_by(Partition((2, 1)))


def test_dual_quiver_shape():
    quiver = QuiverA.for_dual(2, 4)
    assert quiver.dim(1) == 1 and quiver.dim(2) == 2 and quiver.dim(3) == 1


def test_precondition():
    with pytest.raises(PreconditionError, match="require 2k ≤ n"):
        check_kn(3, 4)
    check_kn(2, 4)


@pytest.mark.parametrize("k,n", [(k, n) for n in range(2, 7) for k in range(1, n // 2 + 1)])
def test_rectangle_contents_give_dual_dimensions(k, n):
    lam = Partition([k] * (n - k))
    quiver = QuiverA.for_dual(k, n)
    counts = [sum(1 for c in lam.cells() if content(lam, c) == i) for i in range(1, n)]
    assert counts == [quiver.dim(i) for i in range(1, n)]
