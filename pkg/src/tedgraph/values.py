"""Exact filtration values: rationals plus a distinguished infinity."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Union


@total_ordering
class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("tedgraph.INF")

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Value = Union[Fraction, _Infinity]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        # the float's exact binary value; callers wanting decimals pass strings
        return Fraction(x)
    return Fraction(x)


def as_value(x) -> Value:
    if x is INF or x == "inf" or (isinstance(x, float) and x == float("inf")):
        return INF
    return as_fraction(x)


def format_exact(x: Value) -> str:
    """``"p/q"`` for rationals, ``"inf"`` for infinity."""
    if x is INF:
        return "inf"
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Value) -> str:
    """Shortest round-trip decimal of the nearest float."""
    if x is INF:
        return "inf"
    return repr(float(x))


def value_key(x: Value) -> tuple[int, Fraction]:
    """Sort key that places INF after every rational."""
    return (1, Fraction(0)) if x is INF else (0, x)
