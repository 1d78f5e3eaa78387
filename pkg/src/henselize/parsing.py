"""Tokenizer and recursive-descent parser for polynomial/element expressions.

Grammar (whitespace-insensitive):

    expr   :=  term (('+' | '-') term)*
    term   :=  unary (('*' | '/') unary)*
    unary  :=  ('-' | '+')* power
    power  :=  atom ('^' INT)?
    atom   :=  INT | NAME | '(' expr ')'

Values are dense polynomials in the indeterminate ``x`` over the session
field; names resolve to bound elements (degree-0 values).  Division
requires a constant nonzero divisor.  All literals are exact integers;
rationals are written as quotients (``25/196``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .fields import ValuedField
from .polynomials import Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (column {pos + 1})")
        self.message = message
        self.pos = pos


@dataclass(frozen=True)
class Token:
    kind: str  # INT NAME OP END
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<INT>\d+)|(?P<NAME>[A-Za-z_][A-Za-z_0-9]*)|(?P<OP>:=|[-+*/^(),]))"
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad_at]!r}", bad_at)
        kind = m.lastgroup or "OP"
        tokens.append(Token(kind=kind, text=m.group(kind), pos=m.start(kind)))
        pos = m.end()
    tokens.append(Token(kind="END", text="", pos=len(text)))
    return tokens


class ExpressionParser:
    """Parses expressions into polynomials over a field handle.

    ``env`` maps identifiers to field elements; the indeterminate ``var``
    (when allowed) is the degree-1 monomial.
    """

    def __init__(
        self,
        tokens: list[Token],
        field: ValuedField,
        env: Optional[Mapping[str, object]] = None,
        var: str = "x",
        allow_var: bool = True,
    ):
        self.tokens = tokens
        self.i = 0
        self.field = field
        self.env = env or {}
        self.var = var
        self.allow_var = allow_var

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != "OP" or tok.text != text:
            raise ParseError(f"expected {text!r}", tok.pos)
        return self.advance()

    def at_end(self) -> bool:
        return self.peek().kind == "END"

    def expect_end(self) -> None:
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)

    # -- grammar ------------------------------------------------------------

    def expression(self) -> Polynomial:
        value = self.term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.unary()
        while self.peek().kind == "OP" and self.peek().text in "*/":
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs.degree > 0:
                    raise ParseError("division by a non-constant polynomial", op.pos)
                if rhs.is_zero:
                    raise ParseError("division by zero", op.pos)
                inv = self.field.div(self.field.one, rhs.coeffs[0])
                value = value.scalar_mul(inv)
        return value

    def unary(self) -> Polynomial:
        sign = 1
        while self.peek().kind == "OP" and self.peek().text in "+-":
            if self.advance().text == "-":
                sign = -sign
        value = self.power()
        return -value if sign < 0 else value

    def power(self) -> Polynomial:
        value = self.atom()
        if self.peek().kind == "OP" and self.peek().text == "^":
            caret = self.advance()
            tok = self.peek()
            if tok.kind != "INT":
                raise ParseError("exponent must be an integer literal", caret.pos)
            self.advance()
            value = value ** int(tok.text)
        return value

    def atom(self) -> Polynomial:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return Polynomial(self.field, [self.field.from_fraction(Fraction(int(tok.text)))])
        if tok.kind == "NAME":
            self.advance()
            if tok.text == self.var:
                if not self.allow_var:
                    raise ParseError(
                        f"the indeterminate {self.var!r} is not allowed here", tok.pos
                    )
                return Polynomial.x(self.field)
            if tok.text in self.env:
                return Polynomial(self.field, [self.env[tok.text]])
            raise ParseError(f"unbound identifier {tok.text!r}", tok.pos)
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            value = self.expression()
            self.expect_op(")")
            return value
        raise ParseError(
            f"unexpected {tok.text!r}" if tok.text else "unexpected end of input",
            tok.pos,
        )


def parse_polynomial(
    text: str,
    field: ValuedField,
    env: Optional[Mapping[str, object]] = None,
    var: str = "x",
) -> Polynomial:
    """Parse a polynomial in ``var`` over the field; names resolve via env."""
    parser = ExpressionParser(tokenize(text), field, env, var=var)
    value = parser.expression()
    parser.expect_end()
    return value


def parse_element(
    text: str, field: ValuedField, env: Optional[Mapping[str, object]] = None
):
    """Parse a constant expression down to a single field element."""
    parser = ExpressionParser(tokenize(text), field, env, allow_var=False)
    value = parser.expression()
    parser.expect_end()
    if value.degree > 0:
        raise ParseError("expected a constant expression", 0)
    return value.coeffs[0] if value.coeffs else field.zero
