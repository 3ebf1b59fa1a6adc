"""Regenerate the golden reduction traces and operator dumps used by the tests.

The goldens are produced through the command-line entry point, so the tests
compare exactly what a user would see. Inspect the diff before committing a
regenerated golden. Run from the repository root::

    python3 tools/make_golden.py
"""

from __future__ import annotations

import contextlib
import io
from pathlib import Path

from qaffine.cli import main

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"

# name -> (n, N, word)
TRACES = {
    "f0f1f0f1_n2_N2": (2, 2, "F0 F1 F0 F1 1_(0,2)"),
    "f0f1_n2_N2": (2, 2, "F0 F1 1_(0,2)"),
    "e1e0_n2_N1": (2, 1, "E1 E0 1_(0,1)"),
    "identity_n2_N2": (2, 2, "1_(0,2)"),
    "split_n3_N2": (3, 2, "E2 F0 F1 F2 F0 F1 F2^(2) 1_(0,0,2)"),
}

# name -> argv after "eval"
DUMPS = {
    "sl2_skew_n2_m2_N2": ["--side", "skew", "-n", "2", "-m", "2", "-N", "2", "-k", "(0,2)", "E1 F1 1_(0,2)"],
    "sl2_symmetric_n2_m2_N2": ["--side", "symmetric", "-n", "2", "-m", "2", "-N", "2", "-k", "(0,2)",
                               "E1 F1 1_(0,2)"],
    "f1_skew_n3_m2_N2": ["--side", "skew", "-n", "3", "-m", "2", "-N", "2", "F1 1_(0,2,0)"],
    "e0_symmetric_n3_m2_N2": ["--side", "symmetric", "-n", "3", "-m", "2", "-N", "2", "E0 1_(0,1,1)"],
}


def run(argv: list[str]) -> str:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    if code != 0:
        raise SystemExit(f"{argv} exited with {code}")
    return buf.getvalue()


def build() -> dict[str, str]:
    files = {}
    for name, (n, N, word) in TRACES.items():
        files[f"traces/{name}.json"] = run(["reduce", "-n", str(n), "-N", str(N), word])
    for name, argv in DUMPS.items():
        files[f"dumps/{name}.txt"] = run(["eval", *argv])
    return files


if __name__ == "__main__":
    for rel, text in build().items():
        path = GOLDEN / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"wrote {path.relative_to(GOLDEN.parent.parent)}")
