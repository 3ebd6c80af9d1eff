from fractions import Fraction

import pytest

from su2tomo import DomainError, HalfInteger, mu_values
from su2tomo.halfint import check_projection


@pytest.mark.parametrize("x, twice", [(1, 2), (0, 0), ("3/2", 3), (Fraction(-1, 2), -1), (2.5, 5)])
def test_coercion(x, twice):
    assert HalfInteger.of(x).twice_value == twice


@pytest.mark.parametrize("x", [0.3, "1/3", True, None])
def test_rejects_non_half_integers(x):
    with pytest.raises(DomainError):
        HalfInteger.of(x)


def test_arithmetic_and_ordering():
    a, b = HalfInteger.of("1/2"), HalfInteger.of(1)
    assert (a + b).twice_value == 3
    assert (b - a) == a
    assert -a == HalfInteger(-1)
    assert a < b
    assert HalfInteger(3).dim == 4
    assert str(HalfInteger(3)) == "3/2" and str(HalfInteger(4)) == "2"


def test_projection_checks():
    check_projection(HalfInteger(3), HalfInteger(-3))
    with pytest.raises(DomainError):
        check_projection(HalfInteger(2), HalfInteger(1))
    with pytest.raises(DomainError):
        check_projection(HalfInteger(2), HalfInteger(4))


def test_mu_values_order():
    assert list(mu_values("3/2")) == [1.5, 0.5, -0.5, -1.5]
