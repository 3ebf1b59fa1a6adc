from __future__ import annotations

import pytest

from qaffine.qlaurent import ONE, qint
from qaffine.weightlat import DimensionMismatch, Weight
from qaffine.wordlang import (IndexOutOfRange, PatternMismatch, WeightFlowZero, WordSyntaxError, Zero,
                              apply_rule, left_adjoint, net_shift, normalize_shifts, parse, right_adjoint,
                              target_weight, weight_flow)
from qaffine.wordlang.proofs import bundled_scripts, parse_script, replay


# -- syntax ---------------------------------------------------------------------------------


def test_parse_and_print():
    text = "T1^-1 E0^(2) F1,-1 E2,1 R' phi1' <2> [1] {-1} 1_(0,1,2)"
    w = parse(text)
    assert str(w) == text
    assert [f.kind for f in w][:5] == ["T", "E", "Floop-1", "Eloop1", "Rprime"]


def test_alternative_loop_spelling():
    assert str(parse("F1,1")) == "F1,-1"


def test_parse_error_reports_offset():
    with pytest.raises(WordSyntaxError) as info:
        parse("E1 F@ 1_(0,2)")
    assert info.value.offset == 4
    assert "offset 4" in str(info.value)


def test_index_range_is_checked_with_n():
    with pytest.raises(IndexOutOfRange):
        parse("E3 1_(0,2)", 2)
    with pytest.raises(IndexOutOfRange):
        parse("E0,1", 3)


# -- weight flow ----------------------------------------------------------------------------


def test_weight_flow_and_zero():
    w = parse("F0 F1 1_(0,2)")
    assert weight_flow(w, Weight.of(0, 2), 2) == [Weight.of(0, 2), Weight.of(1, 1), Weight.of(0, 2)]
    z = weight_flow(parse("E1 1_(0,2)"), Weight.of(0, 2), 2)
    assert isinstance(z, Zero) and not z
    assert "zero object" in z.reason


def test_mismatched_idempotent_is_zero():
    z = weight_flow(parse("E1 1_(2,0) F1 1_(0,2)"), Weight.of(0, 2), 2)
    assert isinstance(z, Zero)


def test_idempotent_dimension_is_checked():
    with pytest.raises(DimensionMismatch):
        weight_flow(parse("1_(0,2)"), Weight.of(0, 0, 2), 2)


def test_adjoint_shift_of_divided_power():
    # (E^(a) 1_k)^R = F^(a) <a(lam + a)>; here a = 1, lam = <(1,1), alpha_1> = 0
    w = parse("E1 1_(1,1)")
    assert net_shift(right_adjoint(w, Weight.of(1, 1))) == (1, 0, 0)
    assert net_shift(left_adjoint(w, Weight.of(1, 1))) == (-1, 0, 0)


def test_normalize_shifts_collects_one_block():
    assert str(normalize_shifts(parse("E1 <2> F1 <-1> 1_(1,1)"))) == "E1 F1 <1> 1_(1,1)"


# -- rules ---------------------------------------------------------------------------------


def test_ef_rule_at_highest_weight():
    res = apply_rule(parse("E1 F1 1_(0,2)"), "EF", 0)
    assert res.exact and res.cite == "action axiom (iii)"
    text = {str(w): m for m, w in res.summands}
    assert text["F1 E1 1_(0,2)"] == ONE
    assert text["1_(0,2)"] == qint(2)


def test_commute_rule_for_distant_colours():
    res = apply_rule(parse("E1 F2 1_(1,0,1)"), "commute", 0)
    assert [str(w) for _, w in res.summands] == ["F2 E1 1_(1,0,1)"]


def test_merge_rule_has_quantum_binomial():
    res = apply_rule(parse("F1 F1 1_(0,2)"), "merge", 0)
    assert [(m, str(w)) for m, w in res.summands] == [(qint(2), "F1^(2) 1_(0,2)")]


def test_sl3_rule_cites_the_lemma():
    res = apply_rule(parse("F2 F1 F2 1_(0,0,2)"), "sl3", 0)
    assert res.cite == "sl3 lemma"
    assert sorted(str(w) for _, w in res.summands) == ["F1 F2^(2) 1_(0,0,2)", "F2^(2) F1 1_(0,0,2)"]


def test_rule_errors():
    with pytest.raises(PatternMismatch):
        apply_rule(parse("E1 F1 1_(0,2)"), "commute", 0)
    with pytest.raises(PatternMismatch):
        apply_rule(parse("E1 F1 1_(0,2)"), "no-such-rule", 0)
    with pytest.raises(WeightFlowZero):
        apply_rule(parse("E1 E1 1_(1,1)"), "merge", 0)


def test_target_weight_is_formal():
    assert target_weight(parse("E1 1_(0,2)"), Weight.of(0, 2)) == Weight.of(-1, 3)


# -- proofs ---------------------------------------------------------------------------------


def test_bundled_derivations_replay():
    scripts = bundled_scripts()
    assert set(scripts) == {"cor_app1_n3", "cor_app1_n4", "lemma_app1_n3", "lemma_app1_n4"}
    for group in scripts.values():
        for s in group:
            rep = replay(s)
            assert rep.success and rep.matches_expected, rep.summary()


def test_replay_reports_a_bad_step():
    text = "# n: 3\n# start: E1 F1 1_(0,0,2)\nstep 1: commute @ 0\n"
    (script,) = parse_script(text, "bad")
    rep = replay(script)
    assert not rep.success and rep.failed_step == 1
    assert "FAIL at step 1" in rep.summary()


def test_replay_detects_unexpected_result():
    text = "# n: 2\n# start: E1 F1 1_(0,2)\n# expect: F1 E1 1_(0,2)\nstep 1: EF @ 0\n"
    (script,) = parse_script(text, "wrong")
    rep = replay(script)
    assert rep.matches_expected is False and not rep.success
