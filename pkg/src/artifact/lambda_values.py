"""Exact totally ordered abelian groups used for lengths and distances.

Four groups are shipped: the integers, the rationals, and lexicographically
ordered pairs of either.  Values are plain Python ``int`` and ``Fraction``
objects, plus the immutable :class:`Lex` pair.  :class:`HalfValue` holds the
symbols ``λ/m`` of the rationalisation, which is where Gromov products live.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Union


class LambdaMismatchError(TypeError):
    """Raised when values from two different ordered groups are combined."""


@dataclass(frozen=True, order=True)
class Lex:
    """A pair compared lexicographically: the first coordinate dominates."""

    first: Union[int, Fraction]
    second: Union[int, Fraction]

    def __add__(self, other: "Lex") -> "Lex":
        if not isinstance(other, Lex):
            return NotImplemented
        return Lex(self.first + other.first, self.second + other.second)

    def __sub__(self, other: "Lex") -> "Lex":
        if not isinstance(other, Lex):
            return NotImplemented
        return Lex(self.first - other.first, self.second - other.second)

    def __neg__(self) -> "Lex":
        return Lex(-self.first, -self.second)

    def __mul__(self, k: int) -> "Lex":
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return Lex(self.first * k, self.second * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"({self.first}, {self.second})"


LambdaValue = Union[int, Fraction, Lex]


def kind_of(value: LambdaValue) -> str:
    """Name of the ordered group a value belongs to: Z, Q, Z2 or Q2."""
    if isinstance(value, bool):
        raise LambdaMismatchError("booleans are not ordered-group values")
    if isinstance(value, int):
        return "Z"
    if isinstance(value, Fraction):
        return "Q"
    if isinstance(value, Lex):
        inner = {kind_of(value.first), kind_of(value.second)}
        if inner == {"Z"}:
            return "Z2"
        if inner == {"Q"}:
            return "Q2"
        raise LambdaMismatchError(f"mixed coordinates in {value!r}")
    raise LambdaMismatchError(f"not an ordered-group value: {value!r}")


def compare(a: LambdaValue, b: LambdaValue) -> int:
    """Three-way comparison: -1, 0 or 1.  Both values must share a group."""
    ka, kb = kind_of(a), kind_of(b)
    if ka != kb:
        raise LambdaMismatchError(f"cannot compare {ka} value with {kb} value")
    if a == b:
        return 0
    return -1 if a < b else 1


def is_zero(value: LambdaValue) -> bool:
    if isinstance(value, Lex):
        return value.first == 0 and value.second == 0
    return value == 0


def is_positive(value: LambdaValue) -> bool:
    if isinstance(value, Lex):
        return value.first > 0 or (value.first == 0 and value.second > 0)
    return value > 0


def _components(value: LambdaValue) -> tuple:
    if isinstance(value, Lex):
        return (value.first, value.second)
    return (value,)


def _content(value: LambdaValue) -> int:
    """gcd of the integer coordinates of an integer-valued element."""
    g = 0
    for c in _components(value):
        g = gcd(g, int(c))
    return g


def _divide_exact(value: LambdaValue, m: int) -> LambdaValue:
    if isinstance(value, Lex):
        return Lex(_divide_exact(value.first, m), _divide_exact(value.second, m))
    if isinstance(value, Fraction):
        return value / m
    assert value % m == 0
    return value // m


def is_two_divisible(value: LambdaValue) -> Optional[LambdaValue]:
    """Return ``v`` with ``2v == value`` when such ``v`` exists, else None."""
    kind = kind_of(value)
    if kind in ("Q", "Q2"):
        return _divide_exact(value, 2)
    if all(int(c) % 2 == 0 for c in _components(value)):
        return _divide_exact(value, 2)
    return None


@dataclass(frozen=True)
class HalfValue:
    """The element ``numerator / denominator`` of the rationalised group.

    Instances are always canonical: over divisible groups the denominator is
    1, over integer groups numerator content and denominator are coprime.
    Construct through :func:`half_value`.
    """

    numerator: LambdaValue
    denominator: int

    def in_lambda(self) -> Optional[LambdaValue]:
        return self.numerator if self.denominator == 1 else None

    def _scaled(self, k: int) -> LambdaValue:
        return self.numerator * k

    def __add__(self, other: "HalfValue") -> "HalfValue":
        # (λ/m) + (μ/n) = (nλ + mμ)/(nm)
        m, n = self.denominator, other.denominator
        return half_value(self._scaled(n) + other._scaled(m), m * n)

    def __neg__(self) -> "HalfValue":
        return HalfValue(-self.numerator, self.denominator)

    def __sub__(self, other: "HalfValue") -> "HalfValue":
        return self + (-other)

    def _cmp(self, other: "HalfValue") -> int:
        return compare(self._scaled(other.denominator), other._scaled(self.denominator))

    def __lt__(self, other: "HalfValue") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "HalfValue") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "HalfValue") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "HalfValue") -> bool:
        return self._cmp(other) >= 0

    def __str__(self) -> str:
        if self.denominator == 1:
            return format_value(self.numerator)
        return f"{format_value(self.numerator)}/{self.denominator}"


def half_value(value: LambdaValue, m: int) -> HalfValue:
    """Canonical form of ``value / m`` for a positive integer ``m``."""
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ValueError(f"invalid denominator {m!r}")
    kind = kind_of(value)
    if kind in ("Q", "Q2"):
        return HalfValue(_divide_exact(value, m), 1)
    g = gcd(_content(value), m)
    if g == 0:
        return HalfValue(value, 1)
    return HalfValue(_divide_exact(value, g), m // g)


def from_lambda(value: LambdaValue) -> HalfValue:
    return half_value(value, 1)


@dataclass(frozen=True)
class LambdaGroup:
    """One of the shipped ordered groups, with parsing and coercion."""

    name: str

    def __post_init__(self) -> None:
        if self.name not in ("Z", "Q", "Z2", "Q2"):
            raise ValueError(f"unknown ordered group {self.name!r}")

    @property
    def dim(self) -> int:
        return 2 if self.name.endswith("2") else 1

    @property
    def divisible(self) -> bool:
        return self.name.startswith("Q")

    def scalar(self, x) -> Union[int, Fraction]:
        if self.divisible:
            return Fraction(x)
        f = Fraction(x)
        if f.denominator != 1:
            raise ValueError(f"{x!r} is not an integer")
        return int(f)

    @property
    def zero(self) -> LambdaValue:
        return self.from_components((0,) * self.dim)

    def from_components(self, comps) -> LambdaValue:
        comps = tuple(self.scalar(c) for c in comps)
        if len(comps) != self.dim:
            raise ValueError(f"{self.name} expects {self.dim} coordinate(s)")
        return Lex(*comps) if self.dim == 2 else comps[0]

    def components(self, value: LambdaValue) -> tuple:
        self.check(value)
        return _components(value)

    def coerce(self, value) -> LambdaValue:
        if isinstance(value, Lex):
            return self.from_components((value.first, value.second))
        if isinstance(value, (tuple, list)):
            return self.from_components(value)
        return self.from_components((value,))

    def check(self, value: LambdaValue) -> LambdaValue:
        if kind_of(value) != self.name:
            raise LambdaMismatchError(f"expected a {self.name} value, got {value!r}")
        return value

    def parse(self, text: str) -> LambdaValue:
        return self.coerce(parse_value(text))

    def __str__(self) -> str:
        return self.name


ZZ = LambdaGroup("Z")
QQ = LambdaGroup("Q")
ZZ2 = LambdaGroup("Z2")
QQ2 = LambdaGroup("Q2")

_SCALAR = re.compile(r"\s*(-?\d+(?:/\d+)?)\s*$")
_PAIR = re.compile(r"\s*\(\s*(-?\d+(?:/\d+)?)\s*,\s*(-?\d+(?:/\d+)?)\s*\)\s*$")


def _parse_scalar(text: str) -> Union[int, Fraction]:
    f = Fraction(text)
    return int(f) if "/" not in text else f


def parse_value(text: str) -> LambdaValue:
    """Parse ``-3``, ``3/2`` or ``(3/2, -1)``."""
    m = _SCALAR.match(text)
    if m:
        return _parse_scalar(m.group(1))
    m = _PAIR.match(text)
    if m:
        a, b = _parse_scalar(m.group(1)), _parse_scalar(m.group(2))
        if isinstance(a, Fraction) or isinstance(b, Fraction):
            a, b = Fraction(a), Fraction(b)
        return Lex(a, b)
    raise ValueError(f"not an ordered-group literal: {text!r}")


def format_value(value: LambdaValue) -> str:
    if isinstance(value, Lex):
        return f"({format_value(value.first)}, {format_value(value.second)})"
    return str(value)


def group_of(value: LambdaValue) -> LambdaGroup:
    return LambdaGroup(kind_of(value))
