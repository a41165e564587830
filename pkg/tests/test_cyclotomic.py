from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heegaard.cyclotomic import CyclotomicElement, exp_2pi_i, rho, root_of_unity, sqrt2, sqrt2_power
from heegaard.errors import LevelError


def elements(level=4):
    size = 1 << (level - 1)
    return st.lists(st.integers(-5, 5), min_size=size, max_size=size).map(
        lambda coeffs: CyclotomicElement(level, tuple(coeffs))
    )


def test_rho_has_order_eight():
    assert rho() ** 8 == 1
    assert rho() ** 4 == -1


def test_sqrt2_squares_to_two():
    assert sqrt2() * sqrt2() == 2
    assert sqrt2_power(3) == sqrt2() * 2
    assert sqrt2(5) * sqrt2(5) == 2


def test_embedding_is_compatible():
    assert root_of_unity(2, 4) == rho(3).embed(4)
    assert rho(3).embed(5) == rho(5)


def test_embedding_down_fails():
    with pytest.raises(LevelError):
        rho(4).embed(3)


def test_exp_2pi_i():
    assert exp_2pi_i(Fraction(1, 8), 3) == rho()
    assert exp_2pi_i(Fraction(1, 2), 3) == -1
    with pytest.raises(LevelError):
        exp_2pi_i(Fraction(1, 16), 3)


def test_rational_value():
    assert (rho() * rho().conj()).rational_value() == 1
    assert rho().rational_value() is None


@given(elements(), elements(), elements())
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(elements(3), elements(3))
def test_embedding_is_a_homomorphism(a, b):
    assert (a * b).embed(5) == a.embed(5) * b.embed(5)
    assert (a + b).embed(5) == a.embed(5) + b.embed(5)
