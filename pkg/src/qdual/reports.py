"""Check reports shared by every verification routine and the CLI."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

from .algebra.laurent import format_monomial
from .algebra.ratfunc import ratfunc_equal

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class Mismatch:
    monomial: str
    left: str
    right: str

    def as_dict(self) -> dict[str, str]:
        return {"monomial": self.monomial, "left": self.left, "right": self.right}


@dataclass
class Report:
    """Outcome of one identity check.

    ``params`` holds whatever identifies the instance (k, n, partition, d, ...);
    ``caps`` the truncation orders used.  ``elapsed_ms`` is wall time and is
    the only field that may differ between two runs of the same request.
    """

    check: str
    params: dict[str, Any] = field(default_factory=dict)
    caps: dict[str, int] = field(default_factory=dict)
    status: str = PASS
    mismatches: list[Mismatch] = field(default_factory=list)
    elapsed_ms: float = 0.0
    message: str = ""
    weak: bool = False

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def fail(self, monomial: str, left, right) -> None:
        self.status = FAIL
        self.mismatches.append(Mismatch(monomial, str(left), str(right)))

    def as_dict(self, timing: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check}
        out.update(self.params)
        out["caps"] = dict(self.caps)
        out["status"] = self.status
        out["mismatches"] = [m.as_dict() for m in self.mismatches]
        out["elapsed_ms"] = round(self.elapsed_ms, 1) if timing else 0
        if self.message:
            out["message"] = self.message
        if self.weak:
            out["weak"] = True
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=False)

    def summary(self) -> str:
        label = " ".join(f"{k}={_fmt(v)}" for k, v in self.params.items())
        caps = ",".join(f"{k}<={v}" for k, v in self.caps.items())
        line = f"{self.check} {label}".strip()
        if caps:
            line += f" [{caps}]"
        line += f": {self.status.upper()}"
        if self.weak:
            line += " (weak)"
        if self.mismatches:
            line += f" ({len(self.mismatches)} mismatches)"
        if self.message:
            line += f" - {self.message}"
        return line


def _fmt(v) -> str:
    if isinstance(v, (tuple, list)):
        return "(" + ",".join(map(str, v)) + ")"
    return str(v)


@contextmanager
def timed(report: Report) -> Iterator[Report]:
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed_ms = (time.perf_counter() - start) * 1000.0


def compare_series(report: Report, left, right, limit: int = 5) -> Report:
    """Record coefficientwise differences of two truncated series."""
    for e, a, b in left.mismatches(right, limit):
        report.fail(format_monomial(e), a, b)
    return report


def compare_ratfunc(report: Report, label: str, left, right) -> Report:
    if not ratfunc_equal(left, right):
        report.fail(label, left, right)
    return report
