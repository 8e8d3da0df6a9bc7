import json
from pathlib import Path

import pytest

from make_golden import CLI_GOLDEN

GOLDEN = Path(__file__).parent / "golden"


def test_diagonal_passes(cli):
    code, out, _ = cli("check", "diagonal", "--k", 2, "--d", 1, "--mu", 1)
    assert code == 0
    assert out.strip() == "diagonal k=2 d=1 mu=1: PASS"


def test_precondition_exit_code(cli):
    code, _, err = cli("check", "main", "--k", 9, "--n", 4, "--zcap", 1, "--rcap", 1)
    assert code == 2
    assert "require 2k ≤ n" in err


def test_usage_errors(cli):
    with pytest.raises(SystemExit) as exc:
        cli("check", "no-such-check")
    assert exc.value.code == 2
    code, _, err = cli("check", "vgrcoeff", "--k", 2, "--n", 4)
    assert code == 2 and "--dtuple" in err
    code, _, _ = cli("suite", "everything")
    assert code == 2


def test_macdonald_text(cli):
    code, out, _ = cli("macdonald", "--mu", 2, "--k", 2, "--format", "text")
    assert code == 0
    assert out == (GOLDEN / "macdonald_P2_k2.txt").read_text()


def test_json_schema(cli):
    code, out, _ = cli("check", "main", "--k", 1, "--n", 2, "--zcap", 2, "--rcap", 2, "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert list(report) == ["check", "k", "n", "caps", "status", "mismatches", "elapsed_ms"]
    assert report["status"] == "pass" and report["elapsed_ms"] == 0


def test_timing_is_opt_in(cli):
    _, out, _ = cli("check", "commute", "--k", 2, "--dmax", 1, "--format", "json", "--timing")
    assert json.loads(out)["elapsed_ms"] > 0


@pytest.mark.parametrize("name", sorted(CLI_GOLDEN))
def test_golden_files_compare(cli, name):
    code, _, _ = cli(*CLI_GOLDEN[name], "--golden", GOLDEN / name)
    assert code == 0


def test_golden_difference_detected(cli, tmp_path):
    path = tmp_path / "p.txt"
    assert cli("macdonald", "--mu", "1,1", "--k", 2, "--golden", path, "--record")[0] == 0
    assert cli("macdonald", "--mu", "1,1", "--k", 2, "--golden", path)[0] == 0
    path.write_text(path.read_text().replace("1/1", "2/1"))
    code, _, err = cli("macdonald", "--mu", "1,1", "--k", 2, "--golden", path)
    assert code == 1 and "differs" in err


def test_lambda_product_matches_sum(cli):
    golden = GOLDEN / "vertex_lambda_22_z3.txt"
    assert cli("vertex", "lambda", "--partition", "2,2", "--zcap", 3, "--product", "--golden", golden)[0] == 0


def test_mismatch_exit_code(cli, monkeypatch):
    from qdual import checks
    from qdual.reports import Report

    def broken(params):
        rep = Report("diagonal", dict(params))
        rep.fail("x_1", "1", "2")
        return rep

    monkeypatch.setitem(checks.CHECKS, "diagonal", broken)
    code, out, _ = cli("check", "diagonal", "--k", 1)
    assert code == 1 and "FAIL" in out


def test_weak_suite_flagged(cli):
    code, out, _ = cli("suite", "paper-all", "--profile", "weak", "--format", "json", "--jobs", 1)
    summary = json.loads(out)
    assert code == 0
    assert summary["weak"] is True
    mains = [r for c in summary["criteria"] for r in c["reports"] if r["check"] == "main"]
    assert mains and all(r.get("weak") for r in mains)
