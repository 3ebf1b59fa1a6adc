"""Byte-exact comparison with the stored golden traces and operator dumps."""

from __future__ import annotations

import importlib.util
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"

_spec = importlib.util.spec_from_file_location("make_golden", ROOT / "tools" / "make_golden.py")
make_golden = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(make_golden)

CURRENT = make_golden.build()


@pytest.mark.parametrize("rel", sorted(CURRENT))
def test_matches_golden(rel):
    assert (GOLDEN / rel).read_text() == CURRENT[rel]


def test_every_golden_is_generated():
    stored = {str(p.relative_to(GOLDEN)) for p in GOLDEN.rglob("*") if p.is_file()}
    assert stored == set(CURRENT)
