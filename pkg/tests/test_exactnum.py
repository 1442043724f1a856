"""Exact arithmetic in Q(sqrt2) and evaluation of polynomials in q."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dadecheck.exactnum import (
    NotRationalInteger,
    PHI_POLYS,
    QPoly,
    SqrtTwoRat,
    ZeroInput,
    as_integer,
    eval_poly,
    q_value,
    val2,
)

small_rats = st.fractions(
    min_value=-50, max_value=50, max_denominator=16
)
numbers = st.builds(SqrtTwoRat, small_rats, small_rats)


@given(numbers, numbers)
@settings(max_examples=200)
def test_mul_matches_float(x, y):
    # closure of the ring law, cross-checked against independent float math
    z = x * y
    assert abs(z.to_float() - x.to_float() * y.to_float()) < 1e-9 * (
        1 + abs(x.to_float() * y.to_float())
    )


@given(numbers, numbers, numbers)
@settings(max_examples=100)
def test_ring_axioms(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x
    assert x * y == y * x


@given(numbers)
def test_inverse(x):
    if not x.is_zero():
        assert x * x.inverse() == SqrtTwoRat(1)


def test_component_equality():
    assert SqrtTwoRat(1, 2) == SqrtTwoRat(1, 2)
    assert SqrtTwoRat(1, 2) != SqrtTwoRat(1, Fraction(3, 2))
    assert SqrtTwoRat(3) == 3


def test_as_integer():
    assert as_integer(SqrtTwoRat(13)) == 13
    with pytest.raises(NotRationalInteger):
        as_integer(SqrtTwoRat(0, 2))
    with pytest.raises(NotRationalInteger):
        as_integer(SqrtTwoRat(Fraction(1, 2)))


def test_as_integer_quarter_degree():
    # (q^4 + sqrt2 q^3 - q^2 - sqrt2 q)/4 at n = 1 is the count 21
    q = q_value(1)
    s2 = SqrtTwoRat(0, 1)
    v = (q ** 4 + s2 * q ** 3 - q * q - s2 * q) / 4
    assert as_integer(v) == 21


def test_val2():
    assert val2(524288) == 19
    assert val2(802816) == 14
    assert val2(13) == 0
    assert val2(-8) == 3
    with pytest.raises(ZeroInput):
        val2(0)


def test_val2_half_q10_example():
    # (1/2) q^10 phi1^2 phi2^2 at n = 1 is 2^14 * 49
    p = QPoly.q(10) * PHI_POLYS["p1"] ** 2 * PHI_POLYS["p2"] ** 2 / QPoly.const(2)
    v = as_integer(eval_poly(p, 1))
    assert v == 802816
    assert val2(v) == 14


def test_eval_phi8a():
    # q^2 + sqrt2 q + 1 at n = 1: q^2 = 8, sqrt2 q = 4
    assert as_integer(eval_poly(PHI_POLYS["p8a"], 1)) == 13


def test_eval_q13_over_sqrt2():
    p = QPoly.q(13) / QPoly.const(SqrtTwoRat(0, 1))
    assert as_integer(eval_poly(p, 1)) == 2 ** 19


def test_phi24_split_product():
    # oracle: evaluate q^8 - q^4 + 1 independently
    for n in range(1, 9):
        lhs = eval_poly(PHI_POLYS["p24a"], n) * eval_poly(PHI_POLYS["p24b"], n)
        q = q_value(n)
        oracle = q ** 8 - q ** 4 + 1
        assert lhs == oracle
    assert as_integer(eval_poly(PHI_POLYS["p24a"] * PHI_POLYS["p24b"], 1)) == 4033


def test_phi8_split_product():
    for n in range(1, 9):
        lhs = eval_poly(PHI_POLYS["p8a"], n) * eval_poly(PHI_POLYS["p8b"], n)
        assert lhs == eval_poly(PHI_POLYS["p8"], n)


def test_phi8_factors_odd_and_one_mod_four():
    for n in range(1, 9):
        for name in ("p8a", "p8b"):
            v = as_integer(eval_poly(PHI_POLYS[name], n))
            assert v % 2 == 1
            assert v % 4 == 1


def test_qpoly_division_only_by_monomials():
    p = PHI_POLYS["p1"]
    with pytest.raises(ValueError):
        p / PHI_POLYS["p2"]
    assert (QPoly.q(3) / QPoly.q(1)) == QPoly.q(2)
