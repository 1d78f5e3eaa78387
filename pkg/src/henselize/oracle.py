"""Independent verification backend: Newton lifting in Z/p^N.

Used only by tests and the CLI's check command, never by the main
algorithms.  Everything here is plain modular integer arithmetic so the
verdicts are trivially auditable.  Rationals with p in the denominator
are rejected rather than coerced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fields import check_prime, padic_val
from .polynomials import Polynomial
from .valgroup import ZERO

DEFAULT_PRECISION = 50


class PrecisionError(ValueError):
    """The requested certificate needs more modular digits than available."""


@dataclass(frozen=True)
class ModularApprox:
    """A residue mod p^precision approximating an algebraic number."""

    residue: int
    p: int
    precision: int

    def __post_init__(self):
        if not 0 <= self.residue < self.p**self.precision:
            raise ValueError("residue out of range")

    @property
    def modulus(self) -> int:
        return self.p**self.precision


def _int_coeffs(coeffs: Sequence[Fraction], p: int, modulus: int) -> list[int]:
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ValueError("coefficient has p in its denominator")
        out.append(c.numerator * pow(c.denominator, -1, modulus) % modulus)
    return out


def _eval_mod(coeffs: list[int], x: int, modulus: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % modulus
    return acc


def hensel_lift(
    poly: Polynomial | Sequence[Fraction], a: int, p: int, precision: int
) -> ModularApprox:
    """Newton-lift the simple root near a to a residue mod p^precision.

    Requires v_p(P(a)) > 0 and v_p(P'(a)) = 0; the precision of the
    iterate doubles each step.
    """
    check_prime(p)
    coeffs = list(poly.coeffs) if isinstance(poly, Polynomial) else [Fraction(c) for c in poly]
    if not coeffs:
        raise ValueError("zero polynomial")
    for c in coeffs:
        if Fraction(c).denominator % p == 0:
            raise ValueError("coefficient has p in its denominator")
    value = sum(Fraction(c) * Fraction(a) ** i for i, c in enumerate(coeffs))
    deriv = sum(i * Fraction(c) * Fraction(a) ** (i - 1) for i, c in enumerate(coeffs) if i)
    if not padic_val(value, p) > ZERO:
        raise ValueError("P(a) not in the maximal ideal")
    if padic_val(deriv, p) != ZERO:
        raise ValueError("P'(a) not a unit")

    r = a % p
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        modulus = p**k
        ic = _int_coeffs(coeffs, p, modulus)
        dc = [(i * c) % modulus for i, c in enumerate(ic)][1:]
        fr = _eval_mod(ic, r, modulus)
        fdr = _eval_mod(dc, r, modulus)
        r = (r - fr * pow(fdr, -1, modulus)) % modulus
    modulus = p**precision
    ic = _int_coeffs(coeffs, p, modulus)
    if _eval_mod(ic, r % modulus, modulus) != 0:
        raise RuntimeError("lifting failed to reach the requested precision")
    return ModularApprox(residue=r % modulus, p=p, precision=precision)


def special_zero_approx(poly: Polynomial, p: int, precision: int) -> ModularApprox:
    """Approximate the special zero: the lift of 1."""
    d = poly.degree
    if d < 1 or poly.coeff(d) != 1 or (d >= 1 and poly.coeff(d - 1) != -1):
        raise ValueError("polynomial is not special")
    for i in range(d - 1):
        if not padic_val(poly.coeff(i), p) > ZERO:
            raise ValueError("polynomial is not special")
    return hensel_lift(poly, 1, p, precision)


def evaluate_approx(
    poly: Polynomial | Sequence[Fraction], approx: ModularApprox
) -> ModularApprox:
    """Evaluate a p-integral polynomial at an approximation."""
    coeffs = list(poly.coeffs) if isinstance(poly, Polynomial) else list(poly)
    ic = _int_coeffs([Fraction(c) for c in coeffs], approx.p, approx.modulus)
    return ModularApprox(
        residue=_eval_mod(ic, approx.residue, approx.modulus),
        p=approx.p,
        precision=approx.precision,
    )


def check_description(approx: ModularApprox, x: Fraction, p: int, precision: int) -> bool:
    """Verify that the approximated element equals x times a unit congruent
    to 1, at the available precision.

    Deciding v_p(approx/x - 1) >= 1 takes one digit beyond v_p(x), so a
    PrecisionError is raised when precision <= v_p(x), or when the residue
    is indistinguishable from zero.
    """
    x = Fraction(x)
    if x == 0:
        raise ValueError("description must be nonzero")
    if p != approx.p:
        raise ValueError("prime mismatch")
    sv = padic_val(x, p)
    if sv.q < 0:
        raise ValueError("description has p in its denominator")
    s = int(sv.q)
    n = min(precision, approx.precision)
    if n <= s:
        raise PrecisionError(f"need more than {s} digits, have {n}")
    modulus = p**n
    r = approx.residue % modulus
    if r == 0:
        raise PrecisionError("approximation is indistinguishable from zero")
    t = 0
    rr = r
    while rr % p == 0:
        rr //= p
        t += 1
    if t != s:
        return False
    num = x.numerator
    den = x.denominator
    unit_num = num // p**s
    m = p ** (n - s)
    ratio = rr * den % m * pow(unit_num, -1, m) % m
    return ratio % p == 1
