from fractions import Fraction

import pytest

from steinberg import Series


def test_geometric():
    assert Series.geometric(1, 4).int_coeffs() == (1, 1, 1, 1, 1)
    assert Series.geometric(3, 7).int_coeffs() == (1, 0, 0, 1, 0, 0, 1, 0)


def test_inv_prod():
    # partitions into parts of size <= 2
    s = Series.inv_prod_one_minus([1, 2], 6)
    assert s.int_coeffs() == (1, 1, 2, 2, 3, 3, 4)


def test_min_cutoff_tracking():
    a = Series.one(5)
    b = Series.geometric(1, 3)
    assert (a + b).cutoff == 3
    assert (a * b).cutoff == 3
    assert (a - b).cutoff == 3


def test_mul_matches_convolution():
    a = Series.from_coeffs([1, 2, 3], 4)
    b = Series.from_coeffs([5, 7], 4)
    assert (a * b).int_coeffs() == (5, 17, 29, 21, 0)


def test_shift_and_substitute():
    s = Series.from_coeffs([1, 1, 1], 2)
    assert s.shift(1).int_coeffs() == (0, 1, 1)
    t = Series.from_coeffs([1, 2, 3, 4, 5], 4)
    assert t.substitute_power(2).int_coeffs() == (1, 0, 2, 0, 3)


def test_scalar_and_rationals():
    s = Series.from_coeffs([1, 2], 1) * Fraction(1, 2)
    assert s.coeffs == (Fraction(1, 2), Fraction(1))
    assert not s.is_integral()
    with pytest.raises(ValueError):
        s.int_coeffs()


def test_json_roundtrip():
    s = Series.from_coeffs([1, Fraction(3, 2)], 1)
    data = s.to_json()
    assert data == {"cutoff": 1, "coeffs": [1, "3/2"]}
    assert Series.from_json(data) == s


def test_validation():
    with pytest.raises(ValueError):
        Series((Fraction(1),), 1)
    with pytest.raises(TypeError):
        Series.from_coeffs([0.5], 0)
    with pytest.raises(ValueError):
        Series.one(3).truncate(5)
