import math

import pytest
from hypothesis import given, strategies as st

from rjw.numeric import (
    DivisionByZero,
    EvenDenominator,
    NotAUnit,
    TwoLocalNumber,
    normalize,
    two_adic_valuation,
)


def tl(num, den=1):
    return TwoLocalNumber(num, den)


two_locals = st.builds(
    tl,
    st.integers(min_value=-10**6, max_value=10**6),
    st.integers(min_value=0, max_value=10**4).map(lambda k: 2 * k + 1),
)


def test_normalize_rejects_even_reduced_denominator():
    with pytest.raises(EvenDenominator):
        normalize(6, 4)


def test_normalize_integer_reduction():
    assert normalize(6, 3) == tl(2)
    assert normalize(6, 3).denominator == 1


def test_normalize_sign_and_gcd():
    x = normalize(-5, -15)
    assert (x.numerator, x.denominator) == (1, 3)


def test_zero_is_unique():
    assert normalize(0, 7) == tl(0)
    assert normalize(0, 7).denominator == 1


def test_arith_examples():
    assert tl(1, 3) + tl(1, 5) == tl(8, 15)
    assert tl(2) * tl(1, 3) == tl(2, 3)
    assert -tl(0) == tl(0)


def test_valuation_examples():
    assert tl(12, 5).valuation2() == 2
    assert tl(1, 3).valuation2() == 0
    assert tl(0).valuation2() == math.inf
    assert two_adic_valuation(8) == 3


def test_invert_examples():
    assert tl(3, 5).invert() == tl(5, 3)
    with pytest.raises(NotAUnit):
        tl(2).invert()
    with pytest.raises(EvenDenominator):
        tl(2).invert(unit_mode=False)
    assert tl(-1).invert() == tl(-1)
    with pytest.raises(DivisionByZero):
        tl(0).invert()


def test_division_by_zero_on_construction():
    with pytest.raises(DivisionByZero):
        normalize(1, 0)


def test_json_roundtrip():
    x = tl(-12, 35)
    assert TwoLocalNumber.from_json(x.to_json()) == x
    assert x.to_json() == {"num": "-12", "den": "35"}


@given(two_locals, two_locals, two_locals)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@given(two_locals, two_locals)
def test_valuation_is_additive(a, b):
    if a and b:
        assert (a * b).valuation2() == a.valuation2() + b.valuation2()


@given(two_locals)
def test_normalize_idempotent(a):
    assert TwoLocalNumber(a) == a


@given(two_locals)
def test_unit_iff_valuation_zero(a):
    if a:
        assert a.is_unit() == (a.valuation2() == 0)
