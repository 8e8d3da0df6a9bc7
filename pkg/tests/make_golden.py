"""Regenerate the golden files under ``tests/golden``.

Run ``python3 tests/make_golden.py`` after an intentional change to a
canonical serialization, then review the diff.
"""

from pathlib import Path

from qdual.algebra.text import format_series
from qdual.cli import main
from qdual.qdifference import op_N
from qdual.vertex import prefactor_X

GOLDEN = Path(__file__).parent / "golden"

# file name -> CLI arguments
CLI_GOLDEN = {
    "macdonald_P2_k2.txt": ["macdonald", "--mu", "2", "--k", "2"],
    "vertex_X_k2_n4_z1.txt": ["vertex", "X", "--k", "2", "--n", "4", "--zcap", "1"],
    "vertex_dual_k1_n2_z3_u3.txt": ["vertex", "dual", "--k", "1", "--n", "2", "--zcap", "3", "--ucap", "3"],
    "vertex_lambda_22_z3.txt": ["vertex", "lambda", "--partition", "2,2", "--zcap", "3"],
    "check_main_k2_n4.json": ["check", "main", "--k", "2", "--n", "4", "--zcap", "3", "--rcap", "4", "--format", "json"],
    "check_diagonal_k2_d2_mu21.json": ["check", "diagonal", "--k", "2", "--d", "2", "--mu", "2,1", "--format", "json"],
}


def library_golden() -> dict[str, str]:
    return {
        "prefactor_X_k2_z2.txt": format_series(prefactor_X(2, 2)),
        "op_N_d1_k2.txt": str(op_N(1, 2)),
    }


if __name__ == "__main__":
    for name, argv in CLI_GOLDEN.items():
        main(argv + ["--golden", str(GOLDEN / name), "--record"])
    for name, text in library_golden().items():
        (GOLDEN / name).write_text(text + "\n")
