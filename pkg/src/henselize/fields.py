"""Valued fields as computational handles.

A valued field exposes exact arithmetic plus the two decidable predicates
every algorithm here is uniform in: the zero test, and comparison of
valuations.  The concrete base instance is the rationals with a p-adic
valuation; extension fields implement the same interface.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction

from .valgroup import Val, ZERO

# Above this cap, primality falls back to a Miller-Rabin test and the
# field is flagged as probabilistically certified.
_TRIAL_DIVISION_CAP = 10**9

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _trial_division_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _miller_rabin(p: int) -> bool:
    if p < 2:
        return False
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a % p == 0:
            continue
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> str:
    """Certify primality, returning ``"proven"`` or ``"probable"``.

    Raises ValueError for composites.  Trial division is used up to a size
    cap; larger inputs get a Miller-Rabin check and a "probable" flag.
    """
    if p <= _TRIAL_DIVISION_CAP:
        if not _trial_division_prime(p):
            raise ValueError(f"{p} is not prime")
        return "proven"
    if not _miller_rabin(p):
        raise ValueError(f"{p} is not prime")
    return "probable"


def padic_val(x: Fraction | int, p: int) -> Val:
    """Exponent of p in x, as a Val; infinity for x = 0."""
    x = Fraction(x)
    if x == 0:
        return Val.INF
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return Val(v)


class ValuedField(ABC):
    """Field handle: exact arithmetic plus zero test and valuation.

    Elements are plain values (Fractions for the base field); the handle
    interprets them.  All operations are pure.
    """

    @property
    @abstractmethod
    def zero(self): ...

    @property
    @abstractmethod
    def one(self): ...

    @abstractmethod
    def add(self, x, y): ...

    @abstractmethod
    def sub(self, x, y): ...

    @abstractmethod
    def mul(self, x, y): ...

    @abstractmethod
    def div(self, x, y): ...

    @abstractmethod
    def neg(self, x): ...

    @abstractmethod
    def is_zero(self, x) -> bool: ...

    @abstractmethod
    def val(self, x) -> Val: ...

    @abstractmethod
    def from_fraction(self, q: Fraction): ...

    @abstractmethod
    def render(self, x) -> str: ...

    def from_int(self, n: int):
        return self.from_fraction(Fraction(n))

    def val_compare(self, x, y) -> bool:
        """Whether v(x) >= v(y)."""
        return self.val(x) >= self.val(y)

    def residue_is_one(self, x) -> bool:
        """Whether x = 1 + m with v(m) > 0, i.e. x reduces to 1."""
        return self.val(self.sub(x, self.one)) > ZERO

    def equal(self, x, y) -> bool:
        return self.is_zero(self.sub(x, y))

    def pow(self, x, n: int):
        if n < 0:
            return self.div(self.one, self.pow(x, -n))
        acc = self.one
        base = x
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc


class PAdicRationals(ValuedField):
    """The rationals with the p-adic valuation; elements are Fractions."""

    def __init__(self, p: int):
        self.p = p
        self.primality = check_prime(p)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def div(self, x, y):
        if y == 0:
            raise ZeroDivisionError("division by zero in the base field")
        return x / y

    def neg(self, x):
        return -x

    def is_zero(self, x) -> bool:
        return x == 0

    def val(self, x) -> Val:
        return padic_val(x, self.p)

    def val_compare(self, x, y) -> bool:
        return self.val(x) >= self.val(y)

    def from_fraction(self, q: Fraction) -> Fraction:
        return Fraction(q)

    def render(self, x) -> str:
        return str(x)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PAdicRationals) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PAdicRationals", self.p))

    def __repr__(self) -> str:
        return f"PAdicRationals({self.p})"
