"""Value group elements: exact rationals extended with an absorbing infinity.

Valuations of nonzero base-field elements are integers; slopes of Newton
polygons live in the divisible closure, so the finite part is a Fraction.
``v(0)`` is represented by the infinite element, which dominates every
finite value and absorbs addition.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rat = Union[int, Fraction]


class Val:
    """A value-group element: a rational, or infinity (``Val.INF``)."""

    __slots__ = ("_q",)

    INF: "Val"

    def __init__(self, q: Rat | None):
        self._q = None if q is None else Fraction(q)

    @property
    def is_finite(self) -> bool:
        return self._q is not None

    @property
    def q(self) -> Fraction:
        if self._q is None:
            raise ValueError("infinite valuation has no finite value")
        return self._q

    def __add__(self, other: "Val") -> "Val":
        if self._q is None or other._q is None:
            return Val.INF
        return Val(self._q + other._q)

    def __sub__(self, other: "Val") -> "Val":
        if other._q is None:
            raise ValueError("cannot subtract an infinite valuation")
        if self._q is None:
            return Val.INF
        return Val(self._q - other._q)

    def __neg__(self) -> "Val":
        if self._q is None:
            raise ValueError("cannot negate an infinite valuation")
        return Val(-self._q)

    def scale(self, m: Rat) -> "Val":
        """Multiply by an exact rational; infinity needs m > 0."""
        m = Fraction(m)
        if self._q is None:
            if m <= 0:
                raise ValueError("infinite valuation scaled by a nonpositive factor")
            return Val.INF
        return Val(self._q * m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Val):
            return NotImplemented
        return self._q == other._q

    def __lt__(self, other: "Val") -> bool:
        if self._q is None:
            return False
        if other._q is None:
            return True
        return self._q < other._q

    def __le__(self, other: "Val") -> bool:
        return self == other or self < other

    def __gt__(self, other: "Val") -> bool:
        return not self <= other

    def __ge__(self, other: "Val") -> bool:
        return not self < other

    def __hash__(self) -> int:
        return hash(self._q)

    def __str__(self) -> str:
        return "∞" if self._q is None else str(self._q)

    def __repr__(self) -> str:
        return "Val.INF" if self._q is None else f"Val({self._q!r})"


Val.INF = Val.__new__(Val)
Val.INF._q = None

ZERO = Val(0)


def compare(a: Val, b: Val) -> int:
    """Total-order comparison: -1, 0 or 1."""
    if a == b:
        return 0
    return -1 if a < b else 1
