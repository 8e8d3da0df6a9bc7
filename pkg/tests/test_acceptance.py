"""Acceptance criteria 1-7, each checked exactly and reported on one line.

The full default matrix runs once per session, spread over worker
processes (``QDUAL_JOBS``, or up to four by default).
"""

import json
import os
from pathlib import Path

import pytest

from make_golden import CLI_GOLDEN
from qdual.checks import JOBS_ENV
from qdual.cli import main, run_suite, suite_summary

GOLDEN = Path(__file__).parent / "golden"

TITLES = {
    1: "Macdonald orthogonality, unitriangularity, q-binomial",
    2: "operator spectrum, commutativity, rewrite lemma",
    3: "q-Selberg evaluation and T*Gr(2,2)",
    4: "point vertex functions, product form, cone vanishing",
    5: "descendant chain",
    6: "main duality identity",
    7: "round-trip, deterministic parallel reports, golden stability",
}


def _jobs() -> int:
    if JOBS_ENV in os.environ:
        return max(1, int(os.environ[JOBS_ENV]))
    return max(1, min(4, os.cpu_count() or 1))


@pytest.fixture(scope="module")
def matrix():
    return run_suite("default", _jobs())


def _line(capsys, criterion, ok, detail):
    with capsys.disabled():
        print(f"\n[acceptance {criterion}] {'PASS' if ok else 'FAIL'}: {TITLES[criterion]} ({detail})")


@pytest.mark.parametrize("criterion", [1, 2, 3, 4, 5, 6])
def test_criterion(matrix, capsys, criterion):
    reports = matrix[criterion]
    bad = [r.summary() for r in reports if not r.passed]
    _line(capsys, criterion, not bad, f"{len(reports) - len(bad)}/{len(reports)} checks")
    assert reports and not bad, "\n".join(bad)
    assert not any(r.weak for r in reports)


def _golden_outputs(tmp_path, tag):
    out = {}
    for name, argv in CLI_GOLDEN.items():
        path = tmp_path / f"{tag}-{name}"
        assert main(argv + ["--golden", str(path), "--record"]) == 0
        out[name] = path.read_bytes()
    return out


def test_criterion_7(matrix, capsys, tmp_path):
    problems = []
    roundtrip = matrix[7]
    problems += [r.summary() for r in roundtrip if not r.passed]

    serial = json.dumps(suite_summary("quick", run_suite("quick", 1)))
    parallel = json.dumps(suite_summary("quick", run_suite("quick", 2)))
    if serial != parallel:
        problems.append("quick suite report differs between 1 and 2 workers")

    first, second = _golden_outputs(tmp_path, "a"), _golden_outputs(tmp_path, "b")
    if first != second:
        problems.append("golden output differs between consecutive runs")
    for name, data in first.items():
        if (GOLDEN / name).read_bytes() != data:
            problems.append(f"golden file {name} changed")
    capsys.readouterr()
    _line(capsys, 7, not problems, "round-trip, jobs 1 vs 2, two golden runs" if not problems else "; ".join(problems))
    assert not problems, problems
