"""Exact half-integer quantum numbers stored as doubled integers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Real
from typing import Union

from .errors import DomainError

__all__ = ["HalfInteger", "HalfLike", "half", "check_projection", "mu_values"]


@dataclass(frozen=True, order=True)
class HalfInteger:
    """A value ``x`` with ``2x`` integral, stored as ``twice_value = 2x``."""

    twice_value: int

    def __post_init__(self):
        if not isinstance(self.twice_value, Integral) or isinstance(self.twice_value, bool):
            raise DomainError(f"twice_value must be an integer, got {self.twice_value!r}")
        object.__setattr__(self, "twice_value", int(self.twice_value))

    @classmethod
    def of(cls, x: "HalfLike") -> "HalfInteger":
        """Coerce ``x`` to a HalfInteger.

        Accepts HalfInteger, int, Fraction, strings such as ``"3/2"`` and
        floats that are exactly half-integral (``1.5`` but not ``0.3``).
        """
        if isinstance(x, HalfInteger):
            return x
        if isinstance(x, bool):
            raise DomainError("booleans are not quantum numbers")
        if isinstance(x, Integral):
            return cls(2 * int(x))
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            doubled = 2 * x
            if doubled.denominator != 1:
                raise DomainError(f"{x} is not a half-integer")
            return cls(int(doubled))
        if isinstance(x, Real):
            doubled = 2.0 * float(x)
            if not doubled.is_integer():
                raise DomainError(f"{x!r} is not a half-integer")
            return cls(int(doubled))
        raise DomainError(f"cannot interpret {x!r} as a half-integer")

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __float__(self) -> float:
        return self.twice_value / 2.0

    def __neg__(self) -> "HalfInteger":
        return HalfInteger(-self.twice_value)

    def __add__(self, other):
        other = HalfInteger.of(other)
        return HalfInteger(self.twice_value + other.twice_value)

    __radd__ = __add__

    def __sub__(self, other):
        other = HalfInteger.of(other)
        return HalfInteger(self.twice_value - other.twice_value)

    def __rsub__(self, other):
        return HalfInteger.of(other) - self

    @property
    def dim(self) -> int:
        """Dimension ``2j+1`` of the irreducible space labelled by this value."""
        if self.twice_value < 0:
            raise DomainError(f"j={self} is negative")
        return self.twice_value + 1

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    def __repr__(self) -> str:
        return f"HalfInteger({self})"


HalfLike = Union[HalfInteger, int, Fraction, float, str]


def half(x: HalfLike) -> HalfInteger:
    return HalfInteger.of(x)


def check_projection(j: HalfInteger, mu: HalfInteger, name: str = "mu") -> None:
    """Raise DomainError unless ``|mu| <= j`` and ``j - mu`` is integral."""
    if j.twice_value < 0:
        raise DomainError(f"j={j} must be non-negative")
    if abs(mu.twice_value) > j.twice_value:
        raise DomainError(f"|{name}|={abs(float(mu))} exceeds j={j}")
    if (j.twice_value - mu.twice_value) % 2:
        raise DomainError(f"{name}={mu} and j={j} have mismatched parity")


def mu_values(j: HalfLike):
    """Projections ``j, j-1, ..., -j`` as floats (the basis index order)."""
    import numpy as np

    j = HalfInteger.of(j)
    return (j.twice_value - 2 * np.arange(j.dim)) / 2.0
