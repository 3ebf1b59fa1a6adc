from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import laurent
from qaffine.qlaurent import (ONE, Q, ZERO, InexactDivision, LaurentPoly, grading_unit, is_positive,
                              parse_poly, qbinom, qfactorial, qint, shift_class)


def test_quantum_integers():
    assert str(qint(1)) == "1"
    assert str(qint(2)) == "q + q^-1"
    assert str(qint(3)) == "q^2 + 1 + q^-2"
    assert qint(-2) == -qint(2)
    assert qint(0) == ZERO


def test_factorial_and_binomial():
    assert qfactorial(3) == qint(2) * qint(3)
    assert qbinom(4, 2) == qfactorial(4).exact_div(qfactorial(2) * qfactorial(2))
    assert qbinom(3, 5) == ZERO
    assert qbinom(5, 0) == ONE


def test_text_form_is_canonical():
    p = parse_poly("3*q^2 + 1 - q^-4")
    assert p == LaurentPoly({2: 3, 0: 1, -4: -1})
    assert str(p) == "3*q^2 + 1 - q^-4"
    for bad in ["q^0", "1 + q", "1*q", "q + q", "0*q"]:
        with pytest.raises(ValueError):
            parse_poly(bad)


def test_exact_division():
    assert (qint(2) * qint(3)).exact_div(qint(3)) == qint(2)
    with pytest.raises(InexactDivision):
        qint(3).exact_div(qint(2))
    with pytest.raises(ZeroDivisionError):
        ONE.exact_div(ZERO)


def test_units_and_grading():
    assert Q.is_unit() and (-Q ** -2).is_unit()
    assert not qint(2).is_unit()
    assert grading_unit("symmetric") == Q
    assert grading_unit("skew") == -(Q ** -1)
    assert shift_class("skew", 1, 2) == -(Q ** 2)


def test_positivity():
    assert is_positive(qint(3)) and not is_positive(-qint(2))


@given(laurent())
def test_text_round_trip(p):
    assert parse_poly(str(p)) == p


@given(laurent(), laurent(), laurent())
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == ZERO


@given(laurent(), laurent())
def test_division_inverts_multiplication(a, b):
    if not b.is_zero():
        assert (a * b).exact_div(b) == a


@given(laurent(), laurent())
def test_specialization_is_a_ring_homomorphism(a, b):
    assert (a * b).at_one() == a.at_one() * b.at_one()
    assert (a + b).at_one() == a.at_one() + b.at_one()


@given(st.integers(0, 8), st.integers(0, 8))
def test_binomial_specializes_to_integer_binomial(n, k):
    from math import comb

    assert qbinom(n, k).at_one() == (comb(n, k) if k <= n else 0)
    assert qbinom(n, k).bar() == qbinom(n, k)
