"""Partitions, Young diagram combinatorics and A-type quiver data."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .algebra.laurent import Monomial
from .algebra.vars import MAX_INDEX
from .errors import CellOutOfRange, PreconditionError

Cell = tuple[int, int]


class Partition(tuple):
    """Weakly decreasing tuple of positive integers (trailing zeros dropped)."""

    def __new__(cls, parts=()):
        parts = [int(p) for p in parts]
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts are not weakly decreasing: {parts}")
        return super().__new__(cls, (p for p in parts if p > 0))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if text in ("", "0", "()", "-"):
            return cls(())
        return cls(int(t) for t in text.split(","))

    def __str__(self) -> str:
        return ",".join(map(str, self)) if self else "0"

    def __repr__(self) -> str:
        return f"Partition({str(self)})"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """``lambda_i`` with 1-based ``i``; zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def cells(self) -> list[Cell]:
        return [(i, j) for i, row in enumerate(self, start=1) for j in range(1, row + 1)]

    def __contains__(self, cell) -> bool:  # type: ignore[override]
        if isinstance(cell, tuple) and len(cell) == 2:
            i, j = cell
            return 1 <= i <= len(self) and 1 <= j <= self[i - 1]
        return super().__contains__(cell)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition(())
        return Partition(sum(1 for p in self if p >= j) for j in range(1, self[0] + 1))

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def dominated_by(self, other: "Partition") -> bool:
        """``self <= other`` in dominance order (sizes must agree)."""
        if self.size != other.size:
            return False
        a = b = 0
        for i in range(max(len(self), len(other))):
            a += self.part(i + 1)
            b += other.part(i + 1)
            if a > b:
                return False
        return True


def partitions_of(n: int, max_length: int | None = None, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of ``n``, in reverse lexicographic order."""

    def rec(rest: int, cap: int, length: int):
        if rest == 0:
            yield ()
            return
        if max_length is not None and length >= max_length:
            return
        for p in range(min(rest, cap), 0, -1):
            for tail in rec(rest - p, p, length + 1):
                yield (p,) + tail

    cap = n if max_part is None else max_part
    for parts in rec(n, cap, 0):
        yield Partition(parts)


def partitions_in_box(rows: int, cols: int) -> Iterator[Partition]:
    """Partitions fitting in a ``rows x cols`` rectangle."""
    for n in range(rows * cols + 1):
        yield from partitions_of(n, max_length=rows, max_part=cols)


def _check_cell(lam: Partition, cell: Cell) -> None:
    if cell not in lam:
        raise CellOutOfRange(f"cell {cell} is not in {lam!r}")


def content(lam: Partition, cell: Cell) -> int:
    """``c(i, j) = i - j + lambda_1``; the minimum over the diagram is 1."""
    _check_cell(lam, cell)
    i, j = cell
    return i - j + lam[0]


def hook(lam: Partition, cell: Cell) -> frozenset[Cell]:
    """Cells to the right of and below ``cell``, including itself."""
    _check_cell(lam, cell)
    i, j = cell
    arm = {(i, m) for m in range(j, lam[i - 1] + 1)}
    leg = {(m, j) for m in range(i, len(lam) + 1) if lam[m - 1] >= j}
    return frozenset(arm | leg)


@dataclass(frozen=True)
class QuiverA:
    """A-type quiver with nodes ``1..N``, dimension vector ``v`` and framing ``w``."""

    v: tuple[int, ...]
    w: tuple[int, ...]

    @property
    def nodes(self) -> int:
        return len(self.v)

    def dim(self, i: int) -> int:
        """``v_i`` with the conventions ``v_0 = 0`` and ``v_i = 0`` past the last node."""
        return self.v[i - 1] if 1 <= i <= len(self.v) else 0

    def frame(self, i: int) -> int:
        return self.w[i - 1] if 1 <= i <= len(self.w) else 0

    @classmethod
    def for_partition(cls, lam: Partition) -> "QuiverA":
        """Quiver of the point variety: ``v_i`` counts boxes of content ``i``."""
        if not lam:
            return cls((), ())
        top = lam[0] + len(lam) - 1
        v = [0] * top
        for cell in lam.cells():
            v[content(lam, cell) - 1] += 1
        w = [1 if i == lam[0] else 0 for i in range(1, top + 1)]
        return cls(tuple(v), tuple(w))

    @classmethod
    def for_dual(cls, k: int, n: int) -> "QuiverA":
        """Quiver of the dual Grassmannian side (requires ``2k <= n``)."""
        check_kn(k, n)
        v = []
        for i in range(1, n):
            v.append(i if i < k else (k if i <= n - k else n - i))
        w = [(1 if i == k else 0) + (1 if i == n - k else 0) for i in range(1, n)]
        return cls(tuple(v), tuple(w))


def check_kn(k: int, n: int) -> None:
    if k < 1 or 2 * k > n:
        raise PreconditionError(f"require 2k ≤ n with k ≥ 1 (got k={k}, n={n})")
    if n - 1 > MAX_INDEX:
        raise PreconditionError(f"n is limited to {MAX_INDEX + 1}")


def rectangle(k: int, n: int) -> Partition:
    """The partition ``(k, ..., k)`` with ``n - k`` rows."""
    return Partition([k] * (n - k))


def sigma(lam: Partition, i: int) -> int:
    """Exponent of ``hbar_dual/q`` in the shifted Kähler parameter at node ``i``.

    ``v_{i-1} - v_i``, plus one at the framing node ``i = lambda_1``.
    """
    quiver = QuiverA.for_partition(lam)
    s = quiver.dim(i - 1) - quiver.dim(i)
    if lam and i == lam[0]:
        s += 1
    return s


@lru_cache(maxsize=None)
def _zhat(lam: Partition, i: int) -> Monomial:
    s = sigma(lam, i)
    return Monomial.of({f"z_{i}": 1, "hbar_dual": s, "q": -s})


def zbox(lam: Partition, cell: Cell) -> Monomial:
    """Product of the shifted Kähler parameters over the hook of ``cell``."""
    out = Monomial.one()
    for c in sorted(hook(lam, cell)):
        out = out * _zhat(lam, content(lam, c))
    return out
