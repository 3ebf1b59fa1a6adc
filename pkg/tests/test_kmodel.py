from __future__ import annotations

from math import comb

import pytest

from qaffine.kmodel import (TRIVIAL, Convention, KModel, ModelConfig, UnsupportedFactor, dump_operator,
                            enumerate_basis, evaluate, load_convention, parse_dump, DEFAULT_LEDGER)
from qaffine.qlaurent import ONE, Q, qfactorial, qint
from qaffine.weightlat import ConfigMismatch, DimensionMismatch, Weight, object_weights
from qaffine.wordlang import parse


def test_basis_dimensions():
    skew = ModelConfig("skew", 3, 3, 3)
    sym = ModelConfig("symmetric", 3, 3, 3)
    k = Weight.of(1, 2, 0)
    assert len(enumerate_basis(skew, k)) == comb(3, 1) * comb(3, 2)
    assert len(enumerate_basis(sym, k)) == comb(3, 1) * comb(4, 2)
    assert enumerate_basis(skew, Weight.of(0, 4, -1)) == []
    assert enumerate_basis(skew, Weight.of(0, 3, 0))[0] == ((), (1, 2, 3), ())


def test_basis_requires_matching_n():
    with pytest.raises(ConfigMismatch):
        enumerate_basis(ModelConfig("skew", 2, 2, 2), Weight.of(0, 0, 2))


def test_config_validation():
    with pytest.raises(ConfigMismatch):
        ModelConfig("exterior", 2, 2, 2)
    with pytest.raises(ConfigMismatch):
        ModelConfig("skew", 2, 2, 2, point="q=2")


def test_identity_word():
    cfg = ModelConfig("symmetric", 2, 2, 2)
    op = evaluate(cfg, parse("1_(1,1)"))
    assert op.matrix == KModel(cfg).identity(Weight.of(1, 1)).matrix


def test_sl2_commutator_on_the_symmetric_side():
    cfg = ModelConfig("symmetric", 2, 2, 2)
    k = Weight.of(0, 2)
    diff = evaluate(cfg, parse("E1 F1"), k) - evaluate(cfg, parse("F1 E1"), k)
    assert diff.matrix == KModel(cfg).identity(k).matrix.scale(qint(2))


def test_sl2_commutator_on_the_skew_side_is_read_at_the_grading_unit():
    cfg = ModelConfig("skew", 2, 2, 2)
    K = KModel(cfg)
    k = Weight.of(0, 2)
    op = evaluate(cfg, parse("E1 F1 1_(0,2)"))
    # [2] at v = -q^-1 is -(q + q^-1)
    assert op.matrix.entry(0, 0) == K.at_unit(qint(2)) == -qint(2)


@pytest.mark.parametrize("side", ["symmetric", "skew"])
def test_divided_power_exactness(side):
    cfg = ModelConfig(side, 3, 3, 3)
    K = KModel(cfg)
    for kind in ("E", "F"):
        for k in object_weights(3, 3):
            for a in (2, 3):
                plain = evaluate(K, parse(" ".join([f"{kind}1"] * a)), k)
                div = evaluate(K, parse(f"{kind}1^({a})"), k)
                assert plain.matrix == div.matrix.scale(K.at_unit(qfactorial(a)))


def test_affine_generators_move_across_the_wrap():
    cfg = ModelConfig("symmetric", 3, 2, 2)
    op = evaluate(cfg, parse("E0 1_(0,1,1)"))
    assert op.target == Weight.of(1, 1, 0)
    assert op.rank() == 4


def test_zero_flow_gives_empty_operator():
    cfg = ModelConfig("skew", 2, 2, 2)
    assert evaluate(cfg, parse("E1 1_(0,2)")).is_zero()


def test_specialization_commutes_with_evaluation():
    cfg = ModelConfig("symmetric", 3, 2, 2)
    w = parse("E1 F2^(2) E2 1_(0,1,1)")
    gen = evaluate(cfg, w).specialize_at_one()
    one = evaluate(ModelConfig("symmetric", 3, 2, 2, cfg.convention, "classical"), w)
    assert gen.matrix == one.matrix


def test_symbolic_only_generators_are_rejected():
    with pytest.raises(UnsupportedFactor):
        evaluate(ModelConfig("skew", 3, 2, 2), parse("E1,1 1_(0,1,1)"))


def test_source_dimension_checked():
    with pytest.raises(DimensionMismatch):
        evaluate(ModelConfig("skew", 3, 2, 2), parse("E1"), Weight.of(0, 2))


def test_shift_factors_scale_by_the_grading_unit():
    for side, unit in (("symmetric", Q), ("skew", -(Q ** -1))):
        cfg = ModelConfig(side, 2, 2, 1)
        assert evaluate(cfg, parse("<1> 1_(0,1)")).matrix == KModel(cfg).identity(Weight.of(0, 1)).matrix.scale(unit)


def test_dump_round_trip():
    cfg = ModelConfig("skew", 3, 2, 2)
    op = evaluate(cfg, parse("F2 1_(0,0,2)"))
    header, mat = parse_dump(dump_operator(cfg, op))
    assert header["side"] == "skew" and header["source"] == "(0,0,2)" and header["basis"] == "lex-slots-v1"
    assert mat == op.matrix


def test_convention_names():
    names = [c.name for c in Convention.candidates()]
    assert len(names) == len(set(names)) == 16
    for name in names:
        assert Convention.from_name(name).name == name
    assert Convention().name == "EL+FR-"
    assert Convention.from_name("EL+FR-r+1").rot == 1
    with pytest.raises(ValueError):
        Convention.from_name("XL+FR-")


def test_ledger_holds_the_default_convention():
    for side in ("symmetric", "skew"):
        assert load_convention(DEFAULT_LEDGER, side) == Convention()


def test_trivial_convention_gives_integer_matrices_at_the_classical_point():
    cfg = ModelConfig("skew", 3, 2, 2, TRIVIAL, "classical")
    op = evaluate(cfg, parse("E1 F0 E2 1_(1,1,0)"))
    assert all(x.is_constant() for _, _, x in op.matrix.entries())


def test_trivial_convention_has_its_own_name():
    assert TRIVIAL.name == "ER0FL0"
    assert Convention.from_name("ER0FL0") == TRIVIAL
    assert TRIVIAL.name not in [c.name for c in Convention.candidates()]
