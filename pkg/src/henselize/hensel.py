"""Hensel codes, special polynomials, and the slope-to-special-zero transforms.

A Hensel code (P, a) has P(a) in the maximal ideal and P'(a) a unit; it
pins a unique root congruent to a.  After shifting the code to the origin
the root sits on an isolated (width-1) polygon segment, whose endpoints
give an immediate description -p_k/p_{k+1} of the root.  The remaining
transforms normalize the unit cofactor of that description into the
special zero of a "special" polynomial

    X^d - X^{d-1} + t_{d-2} X^{d-2} + ... + t_0,   v(t_i) > 0,

keeping the change of variable as an explicit Mobius form so the original
root stays expressible over the new generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .fields import PAdicRationals, ValuedField
from .newton import newton_polygon
from .polynomials import Polynomial
from .valgroup import ZERO


class HenselCodeError(ValueError):
    """A (P, a) pair that fails one of the code conditions; the message
    names the violated condition."""


class SpecialPolyError(ValueError):
    """A polynomial that is not special; the message names the violated
    condition."""


@dataclass(frozen=True)
class HenselCode:
    field: ValuedField
    poly: Polynomial
    point: object  # field element


@dataclass(frozen=True)
class SpecialPoly:
    poly: Polynomial

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def field(self) -> ValuedField:
        return self.poly.field


def validate_hensel_code(poly: Polynomial, point, field: ValuedField) -> HenselCode:
    """Check the code conditions, raising HenselCodeError naming the first failure."""
    if poly.is_zero:
        raise HenselCodeError("code polynomial is zero")
    for i, c in enumerate(poly.coeffs):
        if field.val(c) < ZERO:
            raise HenselCodeError(
                f"coefficient of X^{i} outside the valuation ring"
            )
    if field.val(point) < ZERO:
        raise HenselCodeError("point a outside the valuation ring")
    if not field.val(poly.evaluate(point)) > ZERO:
        raise HenselCodeError("P(a) not in the maximal ideal")
    if field.val(poly.derivative().evaluate(point)) != ZERO:
        raise HenselCodeError("P'(a) not a unit")
    return HenselCode(field=field, poly=poly, point=point)


def as_special(poly: Polynomial, field: ValuedField) -> SpecialPoly:
    """Validate the special shape: monic, next coefficient exactly -1,
    all lower coefficients of strictly positive valuation."""
    d = poly.degree
    if d < 1:
        raise SpecialPolyError("special polynomial must have degree >= 1")
    if not poly.is_monic():
        raise SpecialPolyError("special polynomial must be monic")
    if d >= 1 and not field.is_zero(field.add(poly.coeff(d - 1), field.one)):
        raise SpecialPolyError("coefficient of X^(d-1) must be exactly -1")
    for i in range(d - 1):
        if not field.val(poly.coeff(i)) > ZERO:
            raise SpecialPolyError(
                f"coefficient of X^{i} must lie in the maximal ideal"
            )
    return SpecialPoly(poly=poly)


@dataclass(frozen=True)
class MobiusForm:
    """The fractional-linear form (a·b1 + b)/(c·b1 + d) in a generator."""

    field: ValuedField
    a: object
    b: object
    c: object
    d: object

    def determinant(self):
        f = self.field
        return f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))

    def numerator_poly(self) -> Polynomial:
        return Polynomial(self.field, [self.b, self.a])

    def denominator_poly(self) -> Polynomial:
        return Polynomial(self.field, [self.d, self.c])

    def scaled(self, s) -> "MobiusForm":
        """Compose with multiplication by s: s·(aX+b)/(cX+d)."""
        f = self.field
        return MobiusForm(f, f.mul(s, self.a), f.mul(s, self.b), self.c, self.d)

    def shifted(self, s) -> "MobiusForm":
        """Compose with addition of s: (aX+b)/(cX+d) + s."""
        f = self.field
        return MobiusForm(
            f,
            f.add(self.a, f.mul(s, self.c)),
            f.add(self.b, f.mul(s, self.d)),
            self.c,
            self.d,
        )

    def normalized(self) -> "MobiusForm":
        """Over the rational base field, clear denominators, divide out the
        content, and fix the sign so the denominator leads positively."""
        if not isinstance(self.field, PAdicRationals):
            return self
        entries = [Fraction(x) for x in (self.a, self.b, self.c, self.d)]
        lcm = 1
        for e in entries:
            lcm = lcm * e.denominator // gcd(lcm, e.denominator)
        ints = [int(e * lcm) for e in entries]
        g = 0
        for n in ints:
            g = gcd(g, abs(n))
        if g > 1:
            ints = [n // g for n in ints]
        lead = ints[2] if ints[2] != 0 else ints[3]
        if lead < 0:
            ints = [-n for n in ints]
        return MobiusForm(self.field, *[Fraction(n) for n in ints])

    def render(self, var: str) -> str:
        num = self.numerator_poly().render(var)
        den = self.denominator_poly().render(var)
        return f"({num})/({den})"


@dataclass(frozen=True)
class Exact:
    """Specialization outcome when the unit root is exactly 1."""

    value: object


@dataclass(frozen=True)
class Extended:
    """Specialization outcome introducing a special polynomial; the Mobius
    form recovers the unit root from the special zero."""

    special: SpecialPoly
    mobius: MobiusForm


def shift_to_isolated_slope(code: HenselCode) -> Polynomial:
    """Move the code point to the origin: return P(X + a).

    The resulting polygon has an isolated segment at index 0 whose root is
    the coded zero minus a; if the new constant term is zero the coded
    zero is exactly a.
    """
    return code.poly.shift(code.point)


def _isolated_at(poly: Polynomial, k: int, field: ValuedField) -> tuple:
    np = newton_polygon(poly, field)
    for seg in np.segments:
        if seg.i == k and seg.width == 1:
            return seg
    raise ValueError(f"polygon segment at index {k} is not isolated")


def immediate_from_isolated_slope(poly: Polynomial, k: int, field: ValuedField):
    """Immediate description -p_k/p_{k+1} of the root on the width-1
    segment starting at index k."""
    seg = _isolated_at(poly, k, field)
    x = field.div(field.neg(poly.coeff(k)), poly.coeff(k + 1))
    assert field.val(x) == seg.root_val
    return x


def unit_factor_polynomial(poly: Polynomial, k: int, field: ValuedField) -> Polynomial:
    """The polynomial Q with Q-root the unit cofactor of the slope root.

    Q(Y) = (p_{k+1}^k / p_k^{k+1}) · P(-(p_k/p_{k+1})·Y); the pair (Q, 1)
    is a valid Hensel code whenever the segment at k is isolated and
    p_k is nonzero.
    """
    _isolated_at(poly, k, field)
    pk = poly.coeff(k)
    pk1 = poly.coeff(k + 1)
    if field.is_zero(pk):
        raise ValueError("p_k is zero: the slope root is 0 itself, no unit factor")
    scale = field.div(field.pow(pk1, k), field.pow(pk, k + 1))
    x0 = field.div(field.neg(pk), pk1)
    return poly.scale_arg(x0).scalar_mul(scale)


def specialize(q: Polynomial, field: ValuedField) -> Exact | Extended:
    """Turn a unit-root code (Q, 1) into an exact unit or a special polynomial.

    With R(X) = Q(1 + X) = sum r_i X^i one has v(r_0) > 0 and v(r_1) = 0.
    If r_0 = 0 the unit root is exactly 1.  Otherwise S(X) =
    (1/r_0)·R(-r_0·X/r_1) reversed at degree deg(Q) is special, and the
    unit root is (r_1·B - r_0)/(r_1·B) in its special zero B.
    """
    validate_hensel_code(q, field.one, field)
    d = q.degree
    r = q.shift(field.one)
    r0 = r.coeff(0)
    r1 = r.coeff(1)
    assert field.val(r0) > ZERO and field.val(r1) == ZERO
    if field.is_zero(r0):
        return Exact(value=field.one)
    s = r.scale_arg(field.div(field.neg(r0), r1)).scalar_mul(field.div(field.one, r0))
    t = s.reverse(d)
    special = as_special(t, field)
    mobius = MobiusForm(field, a=r1, b=field.neg(r0), c=r1, d=field.zero)
    det = mobius.determinant()
    assert not field.is_zero(det), "degenerate Mobius form"
    return Extended(special=special, mobius=mobius)
