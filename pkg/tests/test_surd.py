import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dunkl.surd import QuadSurd, sqrt3

fr = st.fractions(-6, 6, max_denominator=7)
surds = st.builds(QuadSurd, fr, fr)


def test_sqrt3_squares_to_three():
    assert sqrt3() * sqrt3() == 3
    assert (sqrt3() * sqrt3()).simplify() == Fraction(3)
    assert float(sqrt3()) == pytest.approx(math.sqrt(3))


@given(surds, surds, surds)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(surds, surds)
def test_division_inverts_multiplication(a, b):
    if not b:
        with pytest.raises(ZeroDivisionError):
            a / b
        return
    assert (a / b) * b == a


@given(surds)
def test_float_is_a_homomorphism(a):
    b = QuadSurd(Fraction(1, 3), Fraction(-2, 5))
    assert float(a * b) == pytest.approx(float(a) * float(b), abs=1e-12)
    assert float(a + b) == pytest.approx(float(a) + float(b), abs=1e-12)


@given(surds)
def test_json_round_trip(a):
    assert QuadSurd.from_json(a.to_json()) == a


def test_mixing_with_rationals_and_floats():
    s = sqrt3()
    assert s + 1 == QuadSurd(1, 1)
    assert 2 * s == QuadSurd(0, 2)
    assert isinstance(s * 0.5, float)
    assert s ** -2 == Fraction(1, 3)
    assert abs(-s) == s and -s < s
