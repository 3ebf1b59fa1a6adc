from __future__ import annotations

import json

import pytest

from qaffine.bootstrap import (SELECTION_SUITE, AmbiguousConvention, NoConventionFound, action_isomorphism,
                               bootstrap, bootstrap_side, write_ledger)
from qaffine.kmodel import DEFAULT_LEDGER, Convention, ModelConfig


def test_colour_reversal_relates_mirror_conventions():
    a = ModelConfig("symmetric", 3, 2, 2, Convention.from_name("EL+FR-"))
    b = ModelConfig("symmetric", 3, 2, 2, Convention.from_name("ER+FL-"))
    assert action_isomorphism(a, b) is not None
    c = ModelConfig("symmetric", 3, 2, 2, Convention.from_name("EL+FR+"))
    assert action_isomorphism(a, c) is None


def test_selection_suite_excludes_the_t0_composite():
    assert "T0def" not in SELECTION_SUITE


def test_side_selection_is_unique_up_to_isomorphism():
    res = bootstrap_side("skew")
    assert res.selected == "EL+FR-"
    assert res.classes == [["EL+FR-", "EL-FR+", "ER+FL-", "ER-FL+"]]
    assert res.evidence["ER+FL-"]["isomorphism"]["isomorphic_to"] == "EL+FR-"


def test_q1_run_is_ambiguous():
    with pytest.raises(AmbiguousConvention) as info:
        bootstrap_side("symmetric", point="classical")
    assert info.value.exit_code == 6 and len(info.value.classes) > 1


def test_impossible_constraint_leaves_nothing():
    with pytest.raises(NoConventionFound) as info:
        bootstrap_side("symmetric", extra=["EF-equal"])
    assert info.value.exit_code == 5


def test_frozen_ledger_is_reproduced(tmp_path):
    path = write_ledger(bootstrap(), tmp_path / "ledger.json")
    assert path.read_bytes() == DEFAULT_LEDGER.read_bytes()
    doc = json.loads(path.read_text())
    assert doc["selected"] == {"symmetric": "EL+FR-", "skew": "EL+FR-"}
