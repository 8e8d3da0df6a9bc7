"""Variable registry shared by every algebraic object in the package.

All polynomials live in a single flint context whose generators are the
registered variables, in registration order.  That order also fixes the
graded-lexicographic monomial order used for canonical text.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

import flint

MAX_INDEX = 12


class Group(enum.Enum):
    PARAMETER = "PARAMETER"
    KAHLER = "KAHLER"
    RATIO = "RATIO"
    GENERIC = "GENERIC"


@dataclass(frozen=True)
class VarId:
    name: str
    index: int
    group: Group

    def __str__(self) -> str:
        return self.name


class VarTable:
    """Fixed, ordered set of variable names with their group tags."""

    def __init__(self, entries: list[tuple[str, Group]]):
        self._vars: list[VarId] = []
        self._by_name: dict[str, VarId] = {}
        for name, group in entries:
            if name in self._by_name:
                raise ValueError(f"duplicate variable name {name!r}")
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
                raise ValueError(f"bad variable name {name!r}")
            v = VarId(name, len(self._vars), group)
            self._vars.append(v)
            self._by_name[name] = v
        self.ctx = flint.fmpq_mpoly_ctx.get(tuple(v.name for v in self._vars), "deglex")
        self.nvars = len(self._vars)
        self.zero_exp = (0,) * self.nvars

    def __getitem__(self, name: str) -> VarId:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self):
        return iter(self._vars)

    def __len__(self) -> int:
        return self.nvars

    def by_index(self, i: int) -> VarId:
        return self._vars[i]

    def names(self) -> list[str]:
        return [v.name for v in self._vars]

    def group_indices(self, group: Group) -> tuple[int, ...]:
        return tuple(v.index for v in self._vars if v.group is group)


def _default_entries() -> list[tuple[str, Group]]:
    P, K, R, G = Group.PARAMETER, Group.KAHLER, Group.RATIO, Group.GENERIC
    entries = [("q", P), ("t", P), ("hbar", P), ("hbar_dual", P), ("u", G), ("y", G), ("z", K)]
    entries += [(f"z_{i}", K) for i in range(1, MAX_INDEX + 1)]
    entries += [(f"a_{i}", G) for i in range(1, MAX_INDEX + 1)]
    entries += [(f"r_{i}", R) for i in range(1, MAX_INDEX + 1)]
    entries += [(f"x_{i}", G) for i in range(1, MAX_INDEX + 1)]
    return entries


VARS = VarTable(_default_entries())
CTX = VARS.ctx
