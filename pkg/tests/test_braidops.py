from __future__ import annotations

import pytest

from qaffine.braidops import BraidModel, PreconditionViolated
from qaffine.kmodel import ModelConfig
from qaffine.weightlat import Weight, eta, object_weights, reflect, rotate


@pytest.fixture(params=["symmetric", "skew"])
def model(request):
    return BraidModel(ModelConfig(request.param, 3, 2, 2))


def test_T_maps_to_the_reflected_weight_and_is_invertible(model):
    for k in object_weights(3, 2):
        for i in range(3):
            t = model.T(i, k)
            assert t.target == reflect(k, i)
            back = model.T_inv(i, t.target) @ t
            assert back.matrix == model.k.identity(k).matrix


def test_shifted_braid_is_a_unit_multiple(model):
    k = Weight.of(1, 1, 0)
    assert model.Tprime(1, k).matrix == model.T(1, k).matrix.scale(model.prime_unit(1, k))
    assert model.prime_unit(1, k).is_unit()


def test_canonical_shifted_braid_squares_to_one(model):
    # k_i = 0 or k_{i+1} = 0
    k = Weight.of(2, 0, 0)
    sq = model.word([("Tp", 1), ("Tp", 1)], k)
    assert sq.matrix == model.k.identity(k).matrix


def test_rotation_needs_a_zero_in_the_last_slot(model):
    op = model.Rprime(Weight.of(1, 1, 0))
    assert op.target == rotate(Weight.of(1, 1, 0))
    with pytest.raises(PreconditionViolated):
        model.Rprime(Weight.of(1, 0, 1))


def test_canonical_identification_moves_a_zero_right(model):
    op, k2 = model.canonical_identification(Weight.of(1, 0, 1))
    assert k2 == Weight.of(1, 1, 0)
    assert op.target == k2
    with pytest.raises(PreconditionViolated):
        BraidModel(ModelConfig(model.cfg.side, 3, 2, 3)).canonical_identification(Weight.of(1, 1, 1))


def test_A_loops_are_inverse(model):
    N = model.cfg.N
    h = eta(3, N)
    ident = model.k.identity(h).matrix
    assert (model.A(N) @ model.A(-N)).matrix == ident
    assert (model.A(-N) @ model.A(N)).matrix == ident
    assert model.A(0).matrix == ident
    with pytest.raises(ValueError):
        model.A(N + 1)
