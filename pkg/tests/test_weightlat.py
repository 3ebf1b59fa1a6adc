from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaffine.weightlat import (ConfigMismatch, Weight, eta, mu, object_weights, pairing, parse_weight,
                               reflect, root, root_pairing, rotate)


def test_roots():
    assert root(1, 3) == Weight.of(-1, 1, 0)
    assert root(0, 3) == Weight.of(1, 0, -1)
    assert sum(root(i, 4).entries[j] for i in range(4) for j in range(4)) == 0


def test_cartan_matrix_of_affine_type():
    n = 4
    assert [root_pairing(i, i, n) for i in range(n)] == [2] * n
    assert root_pairing(0, 1, n) == -1 and root_pairing(3, 0, n) == -1
    assert root_pairing(0, 2, n) == 0


def test_cartan_matrix_for_two_nodes():
    # for n = 2 the two simple roots are negatives of each other
    assert root_pairing(0, 1, 2) == -2


def test_special_weights():
    assert eta(3, 2) == Weight.of(0, 0, 2)
    assert mu(4, 2) == Weight.of(0, 0, 1, 1)
    with pytest.raises(ConfigMismatch):
        mu(2, 2)


def test_object_weights_count():
    from math import comb

    for n, N in [(2, 2), (3, 2), (4, 3)]:
        ws = object_weights(n, N)
        assert len(ws) == comb(N + n - 1, n - 1)
        assert all(w.is_nonzero_object(N) for w in ws)
        assert ws == sorted(ws, key=lambda w: w.entries)


def test_parse_weight():
    assert parse_weight("(0, 2,-1)") == Weight.of(0, 2, -1)
    with pytest.raises(ValueError):
        parse_weight("0,2")


weights = st.integers(2, 5).flatmap(lambda n: st.lists(st.integers(-3, 3), min_size=n, max_size=n)).map(
    lambda e: Weight(tuple(e)))


@given(weights, st.data())
def test_reflection_is_involution_and_matches_root(k, data):
    n = k.n
    i = data.draw(st.integers(0, n - 1))
    s = reflect(k, i)
    assert reflect(s, i) == k
    # s_i k = k - <k, alpha_i> alpha_i
    a = root(i, n)
    lam = pairing(k, a)
    assert s.entries == tuple(x - lam * y for x, y in zip(k.entries, a.entries))


@given(weights)
def test_rotation_has_order_n(k):
    assert rotate(k, k.n) == k
    assert rotate(rotate(k), -1) == k
