"""Named checks, their default parameters, and the acceptance matrix.

Every task is a ``(name, params)`` pair resolved through ``CHECKS``; a task
always yields exactly one report, so a batch can be farmed out to worker
processes and reassembled in the declared order.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable

from . import duality, macdonald, qdifference, vertex
from .algebra.series import CapSpec
from .algebra.text import format_ratfunc, format_series, parse_ratfunc, parse_series
from .algebra.laurent import Monomial
from .partitions import Partition, partitions_in_box, partitions_of
from .reports import ERROR, Report, compare_series, timed

Task = tuple[str, dict[str, Any]]

JOBS_ENV = "QDUAL_JOBS"


def _part(text) -> Partition:
    return text if isinstance(text, Partition) else Partition.parse(str(text))


def _tuple(text) -> tuple[int, ...]:
    if isinstance(text, (tuple, list)):
        return tuple(int(x) for x in text)
    return tuple(int(x) for x in str(text).split(","))


def check_grkk(k: int, zcap: int) -> Report:
    """T*Gr(k,k): Selberg sum at ``mu = 0``, its phi-product, and the inverse of ``prefactor_X``."""
    rep = Report("grkk", {"k": k}, {"z": zcap})
    with timed(rep):
        hb = {"t": Monomial.of(hbar=1)}
        sel_left, sel_right = qdifference.selberg_sides(Partition(()), k, zcap)
        sel_left, sel_right = sel_left.substitute(hb), sel_right.substitute(hb)
        vx = vertex.vertex_Grkk(k, zcap).substitute({}, sel_left.spec)
        compare_series(rep, sel_left, vx)
        compare_series(rep, sel_right, vx)
        inv = vertex.prefactor_X(k, CapSpec({"z": zcap})).inverse()
        compare_series(rep, inv, vx)
    return rep


def check_roundtrip(seed: int = 0) -> Report:
    """Canonical text of a few series and rational functions parses back to equal objects."""
    rep = Report("roundtrip", {"seed": seed})
    with timed(rep):
        rng = random.Random(seed)
        objects = [
            vertex.vertex_X(1, 2, 2),
            vertex.vertex_Xdual(2, 4, {"KAHLER": 2, "u": 1}),
            vertex.vertex_product(Partition((2, 1)), 3),
            duality.main_left(1, 3, 1, 2),
        ]
        for obj in objects:
            text = format_series(obj)
            back = parse_series(text)
            if back != obj or format_series(back) != text:
                rep.fail("series", text[:120], format_series(back)[:120])
        mus = [mu for n in range(1, 5) for mu in partitions_of(n, max_length=3)]
        for mu in rng.sample(mus, 4):
            f = macdonald.macdonald_P(mu, 3).to_ratfunc()
            text = format_ratfunc(f)
            if parse_ratfunc(text) != f:
                rep.fail(f"P[{mu}]", text[:120], format_ratfunc(parse_ratfunc(text))[:120])
    return rep


def _vgr_all(k: int, n: int, dmax: int) -> list[Task]:
    return [("vgrcoeff", {"k": k, "n": n, "dtuple": ds}) for ds in vertex.compositions(dmax, k)]


CHECKS: dict[str, Callable[..., Report]] = {
    "orthogonality": lambda p: macdonald.check_orthogonality(p["n"], p["k"]),
    "triangularity": lambda p: macdonald.check_triangularity(p["n"], p["k"]),
    "qbinomial": lambda p: macdonald.check_qbinomial(p["k"], p.get("ycap", 6)),
    "extensions": lambda p: macdonald.check_extensions(p["n"]),
    "diagonal": lambda p: qdifference.check_diagonal(_part(p.get("mu", "")), p.get("d", 1), p["k"]),
    "commute": lambda p: qdifference.check_commute(p["k"], p.get("dmax", 2)),
    "lemma-rewrite": lambda p: qdifference.check_lemma_rewrite(p.get("d", 1), p["k"]),
    "generating": lambda p: qdifference.check_generating(_part(p.get("mu", "")), p["k"], p.get("zcap", 4)),
    "selberg": lambda p: qdifference.qselberg_check(_part(p.get("mu", "")), p["k"], p.get("zcap", 3)),
    "grkk": lambda p: check_grkk(p["k"], p.get("zcap", 3)),
    "verpoint": lambda p: vertex.check_verpoint(_part(p["partition"]), p.get("zcap", 4)),
    "cone": lambda p: vertex.check_cone(_part(p["partition"]), p.get("samples", 50), p.get("seed", 0), p.get("k")),
    "prform": lambda p: duality.check_prform(p["k"], p["n"], p.get("rcap", 4)),
    "prefactor": lambda p: duality.check_prefactor(p["k"], p.get("zcap", 3)),
    "vgrcoeff": lambda p: duality.check_vgrcoeff(p["k"], p["n"], _tuple(p["dtuple"])),
    "insertion": lambda p: duality.check_insertion(p["k"], p["n"], p.get("d", 1), p.get("rcap", 4)),
    "reduce": lambda p: duality.check_reduce(p["k"], p["n"], p.get("zcap", 3), p.get("ucap", 3)),
    "main": lambda p: duality.check_main(p["k"], p["n"], p.get("zcap", 3), p.get("rcap", 4)),
    "roundtrip": lambda p: check_roundtrip(p.get("seed", 0)),
}

LAMBDAS = [(1,), (2,), (1, 1), (2, 2), (3, 3)]
KN = [(1, 2), (1, 3), (2, 4)]


def acceptance_matrix(profile: str = "default") -> dict[int, list[Task]]:
    """Tasks per acceptance criterion.

    ``quick`` shrinks every cap; ``weak`` sets the ratio cap to zero, which
    only compares the degree-0 part of the duality statements.
    """
    if profile not in PROFILES:
        raise KeyError(profile)
    quick = profile == "quick"
    rcap = 0 if profile == "weak" else (2 if quick else 4)
    zcap = 2 if quick else 3
    m: dict[int, list[Task]] = {i: [] for i in range(1, 8)}

    nmax = 3 if quick else 5
    for n in range(1, nmax + 1):
        for k in (1, 2, 3):
            m[1].append(("orthogonality", {"n": n, "k": k}))
            m[1].append(("triangularity", {"n": n, "k": k}))
        m[1].append(("extensions", {"n": n}))
    for k in (1, 2, 3):
        m[1].append(("qbinomial", {"k": k, "ycap": 3 if quick else 6}))

    box = 2 if quick else 3
    for k in (1, 2, 3):
        for mu in partitions_in_box(box, box):
            if len(mu) > k:
                continue
            for d in range(box + 1):
                m[2].append(("diagonal", {"k": k, "d": d, "mu": str(mu)}))
    m[2].append(("commute", {"k": 2, "dmax": 2}))
    for k in (1, 2, 3):
        for d in range(box + 1):
            m[2].append(("lemma-rewrite", {"k": k, "d": d}))
    for k in (1, 2):
        for mu in partitions_in_box(k, 2):
            m[2].append(("generating", {"k": k, "mu": str(mu), "zcap": 2 if quick else 4}))

    for k in (1, 2):
        for mu in partitions_in_box(k, 2):
            m[3].append(("selberg", {"k": k, "mu": str(mu), "zcap": zcap}))
    m[3].append(("grkk", {"k": 2, "zcap": zcap}))

    for lam in LAMBDAS:
        m[4].append(("verpoint", {"partition": ",".join(map(str, lam)), "zcap": 3 if quick else 4}))
        m[4].append(("cone", {"partition": ",".join(map(str, lam)), "samples": 50, "seed": 0}))
    for k, n in KN:
        m[4].append(("prform", {"k": k, "n": n, "rcap": rcap}))
        m[4].append(("cone", {"partition": ",".join([str(k)] * (n - k)), "samples": 50, "seed": 1, "k": k}))

    for k, n in KN:
        m[5].append(("reduce", {"k": k, "n": n, "zcap": zcap, "ucap": zcap}))
        for d in range(3):
            m[5].append(("insertion", {"k": k, "n": n, "d": d, "rcap": rcap}))
        m[5].extend(_vgr_all(k, n, zcap))

    for k in (1, 2):
        m[6].append(("prefactor", {"k": k, "zcap": zcap}))
    for k, n in KN:
        m[6].append(("main", {"k": k, "n": n, "zcap": zcap, "rcap": rcap}))
    if not quick:
        m[6].append(("main", {"k": 2, "n": 5, "zcap": 2, "rcap": 3 if profile != "weak" else 0}))

    m[7].append(("roundtrip", {"seed": 0}))
    return m


PROFILES = ("default", "quick", "weak")


def run_task(task: Task) -> Report:
    name, params = task
    try:
        rep = CHECKS[name](params)
    except Exception as exc:  # reported, never swallowed silently
        rep = Report(name, dict(params), status=ERROR, message=f"{type(exc).__name__}: {exc}")
    return rep


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def run_tasks(tasks: list[Task], jobs: int | None = None) -> list[Report]:
    """Run tasks, possibly in parallel, returning reports in task order."""
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(tasks) <= 1:
        return [run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_task, tasks))
