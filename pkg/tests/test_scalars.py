from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kplump.scalars import ExactScalar, IMAG, ONE, ZERO, scalar


def test_lowest_terms_and_positive_denominator():
    a = ExactScalar("6/4")
    assert a.re.numerator == 3 and a.re.denominator == 2
    b = ExactScalar(Fraction(-2, -8))
    assert b.re.numerator == 1 and b.re.denominator == 4


def test_complex_arithmetic():
    z = ExactScalar(1, 2)
    w = ExactScalar(3, -1)
    assert z * w == ExactScalar(5, 5)
    assert z + w == ExactScalar(4, 1)
    assert (z / w) * w == z
    assert IMAG * IMAG == ExactScalar(-1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_conjugate_and_norm():
    z = ExactScalar("1/2", "3/4")
    assert z.conjugate() == ExactScalar("1/2", "-3/4")
    assert z * z.conjugate() == ExactScalar(z.norm())


def test_power():
    assert ExactScalar(2) ** 10 == ExactScalar(1024)
    assert IMAG ** 4 == ONE
    assert ExactScalar(2) ** -2 == ExactScalar("1/4")


def test_string_round_trip():
    for text in ["3", "-3/2", "i", "-i", "2*i", "1/2-3/4*i", "5+i"]:
        from kplump.poly import SparsePoly
        val = SparsePoly.parse(text, vars=()).constant_value()
        assert SparsePoly.parse(val.as_str(), vars=()).constant_value() == val


def test_ordering_real_only():
    assert ExactScalar(1) < ExactScalar(2)
    with pytest.raises(TypeError):
        IMAG < ONE


def test_immutability():
    z = ExactScalar(1)
    with pytest.raises(AttributeError):
        z.re = 2


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
scalars = st.builds(ExactScalar, rationals, rationals)


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a + (b + c) == (a + b) + c
    if not b.is_zero():
        assert (a / b) * b == a


@given(scalars)
def test_float_conversion_matches(z):
    approx = z.to_complex()
    assert abs(approx.real - float(Fraction(int(z.re.numerator), int(z.re.denominator)))) < 1e-12
