"""Dense polynomials and square matrices over a valued-field handle.

Coefficient lists are index-by-degree and normalized so the trailing
coefficient is nonzero in the field (the zero test may be nontrivial over
extension fields).  The characteristic polynomial uses Faddeev-LeVerrier,
which divides only by integers and is therefore safe in characteristic 0
without any invertibility tests.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .fields import ValuedField


class Polynomial:
    """Immutable dense polynomial; ``coeffs[i]`` is the X^i coefficient."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ValuedField, coeffs: Sequence):
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def from_fractions(cls, field: ValuedField, qs: Sequence) -> "Polynomial":
        return cls(field, [field.from_fraction(Fraction(q)) for q in qs])

    @classmethod
    def x(cls, field: ValuedField) -> "Polynomial":
        return cls(field, [field.zero, field.one])

    @classmethod
    def constant(cls, field: ValuedField, c) -> "Polynomial":
        return cls(field, [c])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(f, [f.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(f, [f.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Polynomial(f, [])
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Polynomial(f, out)

    def scalar_mul(self, c) -> "Polynomial":
        f = self.field
        return Polynomial(f, [f.mul(c, a) for a in self.coeffs])

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        acc = Polynomial(self.field, [self.field.one])
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def evaluate(self, x):
        """Horner evaluation at a field element."""
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def derivative(self) -> "Polynomial":
        f = self.field
        return Polynomial(
            f,
            [f.mul(f.from_int(i), c) for i, c in enumerate(self.coeffs)][1:],
        )

    def shift(self, c) -> "Polynomial":
        """Return P(X + c), exactly."""
        f = self.field
        out = Polynomial(f, [])
        xc = Polynomial(f, [c, f.one])
        for a in reversed(self.coeffs):
            out = out * xc + Polynomial(f, [a])
        return out

    def scale_arg(self, s) -> "Polynomial":
        """Return P(s·X)."""
        f = self.field
        out = []
        power = f.one
        for a in self.coeffs:
            out.append(f.mul(a, power))
            power = f.mul(power, s)
        return Polynomial(f, out)

    def reverse(self, d: int) -> "Polynomial":
        """Return X^d · P(1/X): the coefficient list reversed into length d+1."""
        if d < self.degree:
            raise ValueError(f"reversal degree {d} below polynomial degree {self.degree}")
        padded = list(self.coeffs) + [self.field.zero] * (d + 1 - len(self.coeffs))
        return Polynomial(self.field, padded[::-1])

    def reduce_mod(self, t: "Polynomial") -> "Polynomial":
        """Remainder modulo a monic polynomial t."""
        f = self.field
        dt = t.degree
        if dt < 0:
            raise ZeroDivisionError("reduction modulo the zero polynomial")
        r = list(self.coeffs)
        for i in range(len(r) - 1, dt - 1, -1):
            c = r[i]
            r[i] = f.zero
            for j in range(dt):
                r[i - dt + j] = f.sub(r[i - dt + j], f.mul(c, t.coeffs[j]))
        return Polynomial(f, r[:dt])

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.field.is_zero(
            self.field.sub(self.coeffs[-1], self.field.one)
        )

    def render(self, var: str = "x") -> str:
        """Human-readable form, highest degree first; re-parseable."""
        f = self.field
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if f.is_zero(c):
                continue
            s = f.render(c)
            neg = s.startswith("-")
            mag = s[1:] if neg else s
            wrap = any(ch in mag for ch in "+-*/ ") or (i > 0 and "/" in mag)
            if i == 0:
                term = f"({mag})" if any(ch in mag for ch in "+- ") else mag
            else:
                xpow = var if i == 1 else f"{var}^{i}"
                if mag == "1":
                    term = xpow
                else:
                    term = (f"({mag})" if wrap else mag) + "*" + xpow
            if not parts:
                parts.append(("-" if neg else "") + term)
            else:
                parts.append(("- " if neg else "+ ") + term)
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"Polynomial({self.render()})"


class Matrix:
    """Immutable square matrix over a field handle."""

    __slots__ = ("field", "rows", "dim")

    def __init__(self, field: ValuedField, rows: Sequence[Sequence]):
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        self.dim = len(self.rows)
        if any(len(r) != self.dim for r in self.rows):
            raise ValueError("matrix must be square")

    @classmethod
    def identity(cls, field: ValuedField, d: int) -> "Matrix":
        return cls(
            field,
            [[field.one if i == j else field.zero for j in range(d)] for i in range(d)],
        )

    @classmethod
    def zeros(cls, field: ValuedField, d: int) -> "Matrix":
        return cls(field, [[field.zero] * d for _ in range(d)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        f = self.field
        return Matrix(
            f,
            [
                [f.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        f = self.field
        return Matrix(
            f,
            [
                [f.sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        f = self.field
        d = self.dim
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = f.zero
                for k in range(d):
                    acc = f.add(acc, f.mul(self.rows[i][k], other.rows[k][j]))
                row.append(acc)
            out.append(row)
        return Matrix(f, out)

    def scalar_mul(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.mul(c, a) for a in r] for r in self.rows])

    def trace(self):
        f = self.field
        acc = f.zero
        for i in range(self.dim):
            acc = f.add(acc, self.rows[i][i])
        return acc

    def _check(self, other: "Matrix") -> None:
        if self.dim != other.dim:
            raise ValueError("matrix dimension mismatch")
        if self.field != other.field:
            raise ValueError("matrix field mismatch")

    def __repr__(self) -> str:
        return f"Matrix({[[self.field.render(a) for a in r] for r in self.rows]})"


def companion_matrix(t: Polynomial) -> Matrix:
    """Companion matrix (column convention) of a monic polynomial of degree >= 1."""
    d = t.degree
    if d < 1:
        raise ValueError("companion matrix requires degree >= 1")
    if not t.is_monic():
        raise ValueError("companion matrix requires a monic polynomial")
    f = t.field
    rows = [[f.zero] * d for _ in range(d)]
    for i in range(d):
        rows[i][d - 1] = f.neg(t.coeffs[i])
    for i in range(1, d):
        rows[i][i - 1] = f.one
    return Matrix(f, rows)


def char_poly(m: Matrix) -> Polynomial:
    """Monic characteristic polynomial, by the Faddeev-LeVerrier recurrence.

    Only divisions by the integers 1..d occur, which are invertible in
    characteristic 0.
    """
    f = m.field
    d = m.dim
    if d == 0:
        return Polynomial(f, [f.one])
    coeffs = [f.zero] * (d + 1)
    coeffs[d] = f.one
    n = m
    c = f.neg(n.trace())
    coeffs[d - 1] = c
    for k in range(2, d + 1):
        n = m @ (n + Matrix.identity(f, d).scalar_mul(c))
        c = f.neg(f.div(n.trace(), f.from_int(k)))
        coeffs[d - k] = c
    # leading coefficient is exactly one, so no normalization loss here
    return Polynomial(f, coeffs)


def mat_poly_eval(q: Polynomial, m: Matrix) -> Matrix:
    """Horner evaluation of a polynomial at a square matrix."""
    if q.field != m.field:
        raise ValueError("polynomial/matrix field mismatch")
    f = m.field
    d = m.dim
    acc = Matrix.zeros(f, d)
    for c in reversed(q.coeffs):
        acc = (acc @ m) + Matrix.identity(f, d).scalar_mul(c)
    return acc
