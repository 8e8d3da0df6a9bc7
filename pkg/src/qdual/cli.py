"""Command-line entry point.

Exit status: 0 when every requested identity holds (or an object was
printed), 1 on a coefficient mismatch or a golden-file difference, 2 on a
usage error, a violated precondition, or an internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import macdonald, vertex
from .algebra.text import format_series
from .checks import CHECKS, PROFILES, acceptance_matrix, default_jobs, run_task, run_tasks
from .errors import QDualError
from .partitions import Partition, check_kn
from .reports import ERROR, FAIL, PASS, Report

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

SUITES = ("paper-all",)


class _Parser(argparse.ArgumentParser):
    # argparse already exits 2 on bad flags; this also prints the full grammar
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("caps must be non-negative")
    return value


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--golden", metavar="PATH", help="compare output with this file (or write it with --record)")
    p.add_argument("--record", action="store_true", help="write the golden file instead of comparing")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdual", description="Exact vertex functions, Macdonald operators and duality checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pv = sub.add_parser("vertex", help="print a vertex function as a truncated series")
    pv.add_argument("kind", choices=("X", "dual", "lambda"))
    pv.add_argument("--k", type=int)
    pv.add_argument("--n", type=int)
    pv.add_argument("--partition")
    pv.add_argument("--zcap", type=_positive, default=3)
    pv.add_argument("--ucap", type=_positive, default=3)
    pv.add_argument("--product", action="store_true", help="expand the product formula instead of the sum")
    _output_flags(pv)

    pm = sub.add_parser("macdonald", help="print P_mu in the monomial basis")
    pm.add_argument("--mu", required=True)
    pm.add_argument("--k", type=int, required=True)
    _output_flags(pm)

    pc = sub.add_parser("check", help="run one identity check")
    pc.add_argument("name", choices=sorted(CHECKS))
    for flag in ("k", "n", "d", "dmax", "samples", "seed"):
        pc.add_argument(f"--{flag}", type=int)
    for flag in ("zcap", "rcap", "ucap", "ycap"):
        pc.add_argument(f"--{flag}", type=_positive)
    pc.add_argument("--mu")
    pc.add_argument("--partition")
    pc.add_argument("--dtuple", help="comma separated degrees, e.g. 1,0")
    pc.add_argument("--timing", action="store_true", help="report wall time (otherwise elapsed_ms is 0)")
    _output_flags(pc)

    ps = sub.add_parser("suite", help="run a named suite of checks")
    ps.add_argument("suite")
    ps.add_argument("--profile", default="default", choices=PROFILES)
    ps.add_argument("--jobs", type=int, default=None, help="worker processes (default from QDUAL_JOBS)")
    ps.add_argument("--timing", action="store_true")
    _output_flags(ps)
    return parser


# -- golden files ------------------------------------------------------------


def _emit(text: str, args) -> int:
    """Print ``text`` and handle ``--golden``; returns an exit status."""
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if not args.golden:
        return EXIT_OK
    path = Path(args.golden)
    if args.record:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text if text.endswith("\n") else text + "\n")
        return EXIT_OK
    if not path.exists():
        print(f"golden file {path} not found", file=sys.stderr)
        return EXIT_USAGE
    expected = path.read_text()
    if expected.rstrip("\n") != text.rstrip("\n"):
        print(f"golden file {path} differs", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# -- commands ----------------------------------------------------------------


def _require(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise _Usage(f"missing {', '.join(missing)}")


class _Usage(Exception):
    pass


def _object_json(kind: str, params: dict, text: str) -> str:
    return json.dumps({"object": kind, **params, "value": text})


def cmd_vertex(args) -> int:
    if args.kind == "lambda":
        _require(args, "partition")
        lam = Partition.parse(args.partition)
        caps = {"KAHLER": args.zcap}
        s = vertex.vertex_product(lam, caps) if args.product else vertex.vertex_Xlambda(lam, caps)
        params = {"partition": str(lam), "zcap": args.zcap, "product": args.product}
    else:
        _require(args, "k", "n")
        check_kn(args.k, args.n)
        if args.kind == "X":
            s = vertex.vertex_X(args.k, args.n, args.zcap)
            params = {"k": args.k, "n": args.n, "zcap": args.zcap}
        else:
            s = vertex.vertex_Xdual(args.k, args.n, {"KAHLER": args.zcap, "u": args.ucap})
            params = {"k": args.k, "n": args.n, "zcap": args.zcap, "ucap": args.ucap}
    text = format_series(s)
    if args.format == "json":
        text = _object_json(f"vertex-{args.kind}", params, text)
    return _emit(text, args)


def cmd_macdonald(args) -> int:
    mu = Partition.parse(args.mu)
    text = str(macdonald.macdonald_P(mu, args.k))
    if args.format == "json":
        text = _object_json("macdonald", {"mu": str(mu), "k": args.k}, text)
    return _emit(text, args)


_CHECK_PARAMS = ("k", "n", "d", "dmax", "samples", "seed", "zcap", "rcap", "ucap", "ycap", "mu", "partition", "dtuple")


def _status_code(reports: list[Report]) -> int:
    if any(r.status == ERROR for r in reports):
        return EXIT_USAGE
    if any(r.status == FAIL for r in reports):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_check(args) -> int:
    params = {name: getattr(args, name) for name in _CHECK_PARAMS if getattr(args, name) is not None}
    try:
        report = CHECKS[args.name](params)
    except KeyError as exc:
        raise _Usage(f"check {args.name} needs --{exc.args[0]}") from None
    text = report.to_json(args.timing) if args.format == "json" else report.summary()
    if report.status == ERROR:
        print(text)
        return EXIT_USAGE
    code = _emit(text, args)
    return max(code, _status_code([report]))


def suite_summary(profile: str, reports: dict[int, list[Report]], timing: bool = False) -> dict:
    criteria = []
    for crit, reps in reports.items():
        status = PASS if all(r.passed for r in reps) else (ERROR if any(r.status == ERROR for r in reps) else FAIL)
        criteria.append({
            "criterion": crit,
            "status": status,
            "passed": sum(r.passed for r in reps),
            "total": len(reps),
            "reports": [r.as_dict(timing) for r in reps],
        })
    overall = PASS if all(c["status"] == PASS for c in criteria) else FAIL
    return {"suite": "paper-all", "profile": profile, "weak": profile == "weak", "status": overall, "criteria": criteria}


def run_suite(profile: str, jobs: int | None = None) -> dict[int, list[Report]]:
    matrix = acceptance_matrix(profile)
    flat = [(crit, task) for crit, tasks in matrix.items() for task in tasks]
    reports = run_tasks([t for _, t in flat], jobs)
    out: dict[int, list[Report]] = {crit: [] for crit in matrix}
    for (crit, _), rep in zip(flat, reports):
        out[crit].append(rep)
    return out


def cmd_suite(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; available: {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    jobs = args.jobs if args.jobs is not None else default_jobs()
    reports = run_suite(args.profile, jobs)
    summary = suite_summary(args.profile, reports, args.timing)
    if args.format == "json":
        text = json.dumps(summary, indent=1)
    else:
        lines = []
        for c, reps in zip(summary["criteria"], reports.values()):
            lines.extend(r.summary() for r in reps)
            lines.append(f"criterion {c['criterion']}: {c['status'].upper()} ({c['passed']}/{c['total']})")
        lines.append(f"paper-all [{args.profile}]: {summary['status'].upper()}" + (" (weak)" if summary["weak"] else ""))
        text = "\n".join(lines)
    code = _emit(text, args)
    flat = [r for reps in reports.values() for r in reps]
    return max(code, _status_code(flat))


COMMANDS = {"vertex": cmd_vertex, "macdonald": cmd_macdonald, "check": cmd_check, "suite": cmd_suite}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"qdual: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QDualError as exc:
        print(f"qdual: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # internal error: still a clean exit status
        print(f"qdual: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


__all__ = ["main", "build_parser", "run_suite", "suite_summary", "run_task"]
