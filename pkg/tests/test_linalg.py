from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import laurent
from qaffine.linalg import LMatrix, NotInvertible, SpanBasis, inverse, rank
from qaffine.qlaurent import ONE, Q, ZERO, qint


def test_identity_and_product():
    a = LMatrix.from_dense([[Q, ONE], [ZERO, qint(2)]])
    assert LMatrix.identity(2) @ a == a
    assert (a @ LMatrix.identity(2)).to_dense() == a.to_dense()


def test_rank_over_fraction_field():
    # rows proportional over Q(q) but not over Z
    m = LMatrix.from_dense([[qint(2), ONE], [qint(2) * qint(3), qint(3)]])
    assert rank(m) == 1
    assert rank(LMatrix.identity(3)) == 3
    assert rank(LMatrix.zeros(2, 3)) == 0


def test_inverse_needs_unit_determinant():
    m = LMatrix.from_dense([[Q, ONE], [ZERO, Q ** -1]])
    assert m @ inverse(m) == LMatrix.identity(2)
    with pytest.raises(NotInvertible):
        inverse(LMatrix.from_dense([[qint(2)]]))


def test_span_basis_membership():
    s = SpanBasis(3)
    assert s.add([ONE, Q, ZERO])
    assert s.add([ZERO, ONE, ONE])
    assert not s.add([qint(2), qint(2) * Q + qint(3), qint(3)])
    assert s.contains([ONE, Q + ONE, ONE])
    assert not s.contains([ZERO, ZERO, ONE])
    assert len(s) == 2


def test_diagonal_and_first_difference():
    d = LMatrix.from_dense([[Q, ZERO], [ZERO, ONE]])
    assert d.is_diagonal()
    e = LMatrix.from_dense([[Q, ONE], [ZERO, ONE]])
    assert not e.is_diagonal()
    r, c, x, y = d.first_difference(e)
    assert (r, c) == (0, 1) and x == ZERO and y == ONE


@given(st.lists(st.lists(laurent(max_terms=2, span=2, coeff=2), min_size=3, max_size=3), min_size=3, max_size=3))
def test_rank_is_invariant_under_transpose_and_bounded(rows):
    m = LMatrix.from_dense(rows)
    t = LMatrix.from_dense([list(col) for col in zip(*rows)])
    assert rank(m) == rank(t) <= 3


@given(laurent(max_terms=2, span=2), laurent(max_terms=2, span=2))
def test_rank_of_outer_product_is_at_most_one(a, b):
    m = LMatrix.from_dense([[a * a, a * b], [b * a, b * b]])
    assert rank(m) == (0 if a.is_zero() and b.is_zero() else 1)
