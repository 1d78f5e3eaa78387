"""Extensions by special zeros, towers, and immediate descriptions.

An extension adjoins the special zero B of a special polynomial T over a
base valued field.  Elements are fractions num(B)/den(B) of polynomials of
degree < deg(T); the denominator is certified nonzero at construction.
Fractions are essential: T may well be reducible, and inverses cannot be
computed by extended gcd without factoring, which this code never does.

All predicates on the extension reduce to base-field computations through
the companion matrix of T: the characteristic polynomial of G(M) is the
product of (X - G(B_i)) over the roots B_i of T, so Newton polygons of
such products reveal valuations of values at the special zero.  Equality
to zero, exact valuations, and immediate descriptions in the base all
become decidable, level by level, down to the rationals.

Structural note: ``ExtElement.__eq__`` compares representations, not field
values (two distinct fractions may represent the same element when T is
reducible).  Mathematical equality goes through the field handle or
``Tower.element_equals``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .fields import ValuedField
from .hensel import (
    Exact,
    MobiusForm,
    SpecialPoly,
    as_special,
    immediate_from_isolated_slope,
    shift_to_isolated_slope,
    specialize,
    unit_factor_polynomial,
    validate_hensel_code,
)
from .newton import newton_polygon, root_valuations
from .polynomials import Polynomial, char_poly, companion_matrix, mat_poly_eval
from .valgroup import Val, ZERO


class InternalComputationError(RuntimeError):
    """A guaranteed-by-construction invariant failed, indicating a bug
    upstream rather than bad user input."""


class ExtElement:
    """A fraction of polynomials in the special zero of one extension."""

    __slots__ = ("ext", "num", "den")

    def __init__(self, ext: "SpecialExtension", num: Polynomial, den: Polynomial):
        self.ext = ext
        self.num = num
        self.den = den

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtElement):
            return NotImplemented
        return (
            self.ext is other.ext
            and self.num.coeffs == other.num.coeffs
            and self.den.coeffs == other.den.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.ext), self.num.coeffs, self.den.coeffs))

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.ext is not self.ext:
                raise TypeError("elements of different extensions; lift first")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ext.from_fraction(Fraction(other))
        raise TypeError(f"cannot coerce {type(other).__name__} into the extension")

    def __add__(self, other):
        return self.ext.add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.ext.sub(self, self._coerce(other))

    def __rsub__(self, other):
        return self.ext.sub(self._coerce(other), self)

    def __mul__(self, other):
        return self.ext.mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.ext.div(self, self._coerce(other))

    def __rtruediv__(self, other):
        return self.ext.div(self._coerce(other), self)

    def __neg__(self):
        return self.ext.neg(self)

    def __pow__(self, n: int):
        return self.ext.pow(self, n)

    def __repr__(self) -> str:
        return f"ExtElement({self.ext.render(self)})"


class SpecialExtension(ValuedField):
    """The base field extended by the special zero of a special polynomial.

    Implements the full valued-field handle; valuation and zero tests are
    memoized per reduced numerator polynomial, which keeps recursive tower
    descents from recomputing shared subproblems.  The caches are benign
    under concurrent use (pure results), but a consistent view requires
    confinement to one thread of control or outside synchronization.
    """

    def __init__(self, base: ValuedField, special: SpecialPoly, symbol: str = "b"):
        if special.poly.field != base:
            raise ValueError("special polynomial not over the given base field")
        self.base = base
        self.special = special
        self.modulus = special.poly
        self.degree = special.degree
        self.symbol = symbol
        self._companion = companion_matrix(self.modulus)
        self._val_cache: dict = {}
        self._desc_cache: dict = {}
        self._t_tail: Optional[tuple] = None

    # -- element plumbing ---------------------------------------------------

    def _one_poly(self) -> Polynomial:
        return Polynomial(self.base, [self.base.one])

    def _make(self, num: Polynomial, den: Polynomial) -> ExtElement:
        """Trusted constructor: the denominator is already known nonzero."""
        num = num.reduce_mod(self.modulus)
        den = den.reduce_mod(self.modulus)
        if num.is_zero:
            return ExtElement(self, num, self._one_poly())
        lead = den.coeffs[-1]
        if not self.base.is_zero(self.base.sub(lead, self.base.one)):
            inv = self.base.div(self.base.one, lead)
            num = num.scalar_mul(inv)
            den = den.scalar_mul(inv)
        return ExtElement(self, num, den)

    def element(self, num: Polynomial, den: Optional[Polynomial] = None) -> ExtElement:
        """Public constructor; certifies that the denominator is nonzero
        at the special zero."""
        if den is None:
            den = self._one_poly()
        if self.is_zero_at(den):
            raise ZeroDivisionError("denominator vanishes at the special zero")
        return self._make(num, den)

    def const(self, c) -> ExtElement:
        return ExtElement(self, Polynomial(self.base, [c]), self._one_poly())

    @property
    def beta(self) -> ExtElement:
        """The special zero as an element."""
        return ExtElement(self, Polynomial.x(self.base), self._one_poly())

    # -- field handle interface ----------------------------------------------

    @property
    def zero(self) -> ExtElement:
        return ExtElement(self, Polynomial(self.base, []), self._one_poly())

    @property
    def one(self) -> ExtElement:
        return self.const(self.base.one)

    def from_fraction(self, q: Fraction) -> ExtElement:
        return self.const(self.base.from_fraction(q))

    def add(self, x: ExtElement, y: ExtElement) -> ExtElement:
        if x.den.coeffs == y.den.coeffs:
            return self._make(x.num + y.num, x.den)
        return self._make(x.num * y.den + y.num * x.den, x.den * y.den)

    def sub(self, x: ExtElement, y: ExtElement) -> ExtElement:
        return self.add(x, self.neg(y))

    def neg(self, x: ExtElement) -> ExtElement:
        return ExtElement(self, -x.num, x.den)

    def mul(self, x: ExtElement, y: ExtElement) -> ExtElement:
        if x.num.is_zero or y.num.is_zero:
            return self.zero
        return self._make(x.num * y.num, x.den * y.den)

    def div(self, x: ExtElement, y: ExtElement) -> ExtElement:
        if self.is_zero(y):
            raise ZeroDivisionError("division by zero in the extension")
        return self._make(x.num * y.den, x.den * y.num)

    def is_zero(self, x: ExtElement) -> bool:
        return self.is_zero_at(x.num)

    def val(self, x: ExtElement) -> Val:
        return self.valuation_at(x.num) - self.valuation_at(x.den)

    def render(self, x: ExtElement) -> str:
        num = x.num.render(self.symbol)
        if x.den.coeffs == (self.base.one,):
            if x.num.degree <= 0:
                return num
            return f"({num})"
        return f"({num})/({x.den.render(self.symbol)})"

    # -- the uniform computations over the base ------------------------------

    def char_poly_of_values(self, g: Polynomial) -> Polynomial:
        """The monic degree-d polynomial whose roots are g evaluated at the
        d roots of the modulus, with multiplicity."""
        g = g.reduce_mod(self.modulus)
        return char_poly(mat_poly_eval(g, self._companion))

    def _t_tail_vals(self) -> tuple:
        """Root valuations of the modulus with one zero entry removed: the
        valuations of the non-special roots, all strictly positive."""
        if self._t_tail is None:
            vals = root_valuations(self.modulus, self.base)
            try:
                vals.remove(ZERO)
            except ValueError:
                raise InternalComputationError(
                    "special polynomial has no valuation-zero root"
                ) from None
            if not all(v > ZERO for v in vals):
                raise InternalComputationError(
                    "special polynomial has several unit roots"
                )
            self._t_tail = tuple(vals)
        return self._t_tail

    def _analyze(self, q: Polynomial) -> tuple[Val, tuple]:
        """Valuation of q at the special zero, plus the ascending valuation
        list of the conjugate values (used to pick the separating power).

        The two products compared are P1 = prod (X - q(B_i)) and
        P2 = prod (X - (1 - B_i) q(B_i)): multiplying by 1 - B_i raises the
        valuation of the i = 1 term strictly (B is a unit congruent to 1)
        and fixes every other term (the other roots lie in the maximal
        ideal), so the sorted valuation lists agree exactly when q(B) = 0
        and otherwise differ by one entry, which is v(q(B)).
        """
        if q.is_zero:
            return Val.INF, (Val.INF,) * self.degree
        if q.degree == 0:
            w = self.base.val(q.coeffs[0])
            return w, (w,) * self.degree
        key = q.coeffs
        hit = self._val_cache.get(key)
        if hit is not None:
            return hit
        q1 = self.char_poly_of_values(q)
        one_minus_x = Polynomial(
            self.base, [self.base.one, self.base.neg(self.base.one)]
        )
        q2 = self.char_poly_of_values(one_minus_x * q)
        l1 = root_valuations(q1, self.base)
        l2 = root_valuations(q2, self.base)
        if l1 == l2:
            result = (Val.INF, tuple(l1))
            self._val_cache[key] = result
            return result
        idx = next(i for i, (a, b) in enumerate(zip(l1, l2)) if a != b)
        w = l1[idx]
        removed = list((Counter(l1) - Counter(l2)).elements())
        added = list((Counter(l2) - Counter(l1)).elements())
        if len(removed) != 1 or len(added) != 1 or removed[0] != w or not added[0] > w:
            raise InternalComputationError(
                "conjugate valuation lists do not differ by a single raised entry"
            )
        result = (w, tuple(l1))
        self._val_cache[key] = result
        return result

    def is_zero_at(self, q: Polynomial) -> bool:
        """Whether q evaluates to zero at the special zero."""
        q = q.reduce_mod(self.modulus)
        w, _ = self._analyze(q)
        return not w.is_finite

    def valuation_at(self, q: Polynomial) -> Val:
        """Exact valuation of q at the special zero (infinite iff zero)."""
        q = q.reduce_mod(self.modulus)
        w, _ = self._analyze(q)
        return w

    def immediate_description(self, q: Polynomial):
        """A base-field x with q(B) = x·(1 + m), v(m) > 0; None when q(B) = 0.

        After the valuation w of q(B) is known, a power m is chosen so that
        multiplying by B^m separates the i = 1 conjugate valuation from all
        the others; the product polynomial then shows an isolated width-1
        polygon segment of root valuation w, whose endpoint ratio is the
        description.
        """
        q = q.reduce_mod(self.modulus)
        if q.is_zero:
            return None
        if q.degree == 0:
            c = q.coeffs[0]
            return None if self.base.is_zero(c) else c
        key = q.coeffs
        if key in self._desc_cache:
            return self._desc_cache[key]
        w, l1 = self._analyze(q)
        if not w.is_finite:
            self._desc_cache[key] = None
            return None
        m = choose_exponent(self._t_tail_vals(), l1)
        g3 = (Polynomial.x(self.base) ** m) * q
        q3 = self.char_poly_of_values(g3)
        np3 = newton_polygon(q3, self.base)
        hits = [s for s in np3.segments if s.width == 1 and s.root_val == w]
        if len(hits) != 1:
            raise InternalComputationError(
                "no unique isolated segment at the computed valuation"
            )
        x = immediate_from_isolated_slope(q3, hits[0].i, self.base)
        self._desc_cache[key] = x
        return x


def choose_exponent(t_root_vals, q1_root_vals) -> int:
    """Smallest m >= 1 with m·t different from every difference of finite
    conjugate valuations, for every finite non-special root valuation t.

    The exclusion set is finite and every t is strictly positive, so the
    search terminates.
    """
    ts = [v.q for v in t_root_vals if v.is_finite]
    if any(t <= 0 for t in ts):
        raise ValueError("non-special root valuations must be positive")
    finite = [v.q for v in q1_root_vals if v.is_finite]
    diffs = {u - w for u in finite for w in finite}
    m = 1
    while any(m * t in diffs for t in ts):
        m += 1
    return m


def describe_to_base(x, field: ValuedField):
    """Immediate description of x in the bottom field of the handle chain.

    Returns None exactly when x = 0.  Descriptions of numerator and
    denominator are taken separately and divided; this preserves the
    description property because units congruent to 1 form a group.
    """
    if isinstance(field, SpecialExtension):
        if not isinstance(x, ExtElement) or x.ext is not field:
            raise ValueError("element does not belong to the given extension")
        num_d = field.immediate_description(x.num)
        if num_d is None:
            return None
        den_d = field.immediate_description(x.den)
        if den_d is None:
            raise InternalComputationError("certified denominator described as zero")
        # both recursions land in the bottom field, where division is exact
        return describe_to_base(num_d, field.base) / describe_to_base(den_d, field.base)
    return None if field.is_zero(x) else x


@dataclass
class HenselZeroResult:
    """Everything the pipeline produced while adjoining one coded zero."""

    element: object
    exact: bool
    collapsed: bool
    shifted: Polynomial
    slope_description: object  # description of (zero - a); None when zero = a
    unit_factor: Optional[Polynomial]
    special: Optional[SpecialPoly]
    mobius: Optional[MobiusForm]
    level_index: Optional[int]  # 1-based tower level holding the new generator


class Tower:
    """A stack of special-zero extensions over a common bottom field."""

    def __init__(self, base: ValuedField):
        self.base = base
        self.levels: list[SpecialExtension] = []

    @property
    def top(self) -> ValuedField:
        return self.levels[-1] if self.levels else self.base

    def field_at(self, i: int) -> ValuedField:
        return self.base if i == 0 else self.levels[i - 1]

    @property
    def depth(self) -> int:
        return len(self.levels)

    # -- elements -------------------------------------------------------------

    def _level_of(self, x) -> int:
        if isinstance(x, ExtElement):
            for i, lvl in enumerate(self.levels):
                if x.ext is lvl:
                    return i + 1
            raise ValueError("element does not belong to this tower")
        return 0

    def lift(self, x):
        """Embed a base fraction or lower-level element into the top field."""
        i = self._level_of(x)
        cur = self.base.from_fraction(Fraction(x)) if i == 0 else x
        for j in range(i, len(self.levels)):
            cur = self.levels[j].const(cur)
        return cur

    def element_equals(self, x, y) -> bool:
        top = self.top
        return top.is_zero(top.sub(self.lift(x), self.lift(y)))

    def element_val(self, x) -> Val:
        return self.top.val(self.lift(x))

    def element_val_compare(self, x, y) -> bool:
        """Whether v(x) >= v(y)."""
        return self.element_val(x) >= self.element_val(y)

    def describe(self, x):
        """Immediate description of x in the bottom field; None for x = 0."""
        return describe_to_base(self.lift(x), self.top)

    # -- construction -----------------------------------------------------------

    def push_special(self, poly: Polynomial):
        """Adjoin the special zero of a special polynomial over the top field.

        Zero roots are divided out first (they are never the special zero),
        and a polynomial with T(1) = 0 yields the trivial extension: the
        special zero is 1 and no level is added.  Returns the special zero.
        """
        top = self.top
        as_special(poly, top)
        t = poly
        while t.degree > 1 and top.is_zero(t.coeff(0)):
            t = Polynomial(top, t.coeffs[1:])
        if top.is_zero(t.evaluate(top.one)):
            return top.one
        ext = SpecialExtension(top, as_special(t, top), symbol=f"b{len(self.levels) + 1}")
        self.levels.append(ext)
        return ext.beta

    def hensel_zero(self, poly: Polynomial, point) -> HenselZeroResult:
        """Adjoin the zero coded by (poly, point) over the current top field.

        Shifts the code onto an isolated polygon slope, extracts the unit
        cofactor, and either resolves the zero exactly in the current field
        or pushes one special extension and expresses the zero as a Mobius
        form in the new generator.
        """
        top = self.top
        code = validate_hensel_code(poly, point, top)
        shifted = shift_to_isolated_slope(code)
        if top.is_zero(shifted.coeff(0)):
            return HenselZeroResult(
                element=point,
                exact=True,
                collapsed=False,
                shifted=shifted,
                slope_description=None,
                unit_factor=None,
                special=None,
                mobius=None,
                level_index=None,
            )
        x0 = immediate_from_isolated_slope(shifted, 0, top)
        q = unit_factor_polynomial(shifted, 0, top)
        outcome = specialize(q, top)
        if isinstance(outcome, Exact):
            return HenselZeroResult(
                element=top.add(point, x0),
                exact=True,
                collapsed=False,
                shifted=shifted,
                slope_description=x0,
                unit_factor=q,
                special=None,
                mobius=None,
                level_index=None,
            )
        total = outcome.mobius.scaled(x0).shifted(point).normalized()
        depth_before = self.depth
        beta = self.push_special(outcome.special.poly)
        if self.depth == depth_before:
            # the special polynomial had 1 as a root: everything stays put
            f = total.field
            num = f.add(f.mul(total.a, beta), total.b)
            den = f.add(f.mul(total.c, beta), total.d)
            return HenselZeroResult(
                element=f.div(num, den),
                exact=True,
                collapsed=True,
                shifted=shifted,
                slope_description=x0,
                unit_factor=q,
                special=outcome.special,
                mobius=total,
                level_index=None,
            )
        ext = self.levels[-1]
        alpha = ext.element(
            num=total.numerator_poly(), den=total.denominator_poly()
        )
        return HenselZeroResult(
            element=alpha,
            exact=False,
            collapsed=False,
            shifted=shifted,
            slope_description=x0,
            unit_factor=q,
            special=outcome.special,
            mobius=total,
            level_index=self.depth,
        )


def _embed_fraction(q: Fraction, field: ValuedField):
    return field.from_fraction(q)


def merge_towers(
    a: Tower, b: Tower
) -> tuple[Tower, Callable, Callable]:
    """Concatenate two towers over the same bottom field.

    Returns the merged tower plus two injections: elements of ``a`` map to
    themselves (its levels are shared), elements of ``b`` are re-read over
    the enlarged fields by coefficient embedding.  The generators of the
    two towers remain distinct; no identification is attempted.
    """
    if a.base != b.base:
        raise ValueError("towers have different bottom fields")
    merged = Tower(a.base)
    merged.levels = list(a.levels)
    offset = len(a.levels)

    handle_map: dict[int, SpecialExtension] = {}

    def embed(x, src_level: int):
        """Element of b's field at src_level -> merged field at offset + src_level."""
        if src_level == 0:
            return _embed_fraction(Fraction(x), merged.field_at(offset))
        src_ext = b.levels[src_level - 1]
        dst_ext = handle_map[id(src_ext)]
        num = Polynomial(dst_ext.base, [embed(c, src_level - 1) for c in x.num.coeffs])
        den = Polynomial(dst_ext.base, [embed(c, src_level - 1) for c in x.den.coeffs])
        return dst_ext._make(num, den)

    for i, lvl in enumerate(b.levels):
        dst_field = merged.top
        coeffs = [embed(c, i) for c in lvl.modulus.coeffs]
        depth_before = merged.depth
        merged.push_special(Polynomial(dst_field, coeffs))
        if merged.depth != depth_before + 1:
            raise InternalComputationError("merged level collapsed unexpectedly")
        handle_map[id(lvl)] = merged.levels[-1]

    def inject_a(x):
        return merged.lift(x)

    def inject_b(x):
        lvl = b._level_of(x)
        if lvl == 0:
            return merged.lift(x)
        return merged.lift(embed(x, lvl))

    return merged, inject_a, inject_b
