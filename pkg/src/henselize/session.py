"""Stateful command interpreter shared by the HTTP service and the CLI.

A session holds the base prime, the extension tower, and named bindings.
One command per line; ``#`` starts a comment.  Commands:

    field Q <p>                     set the base field (resets the session)
    hensel <name> := (<poly>, <a>)  adjoin the zero coded by (poly, a)
    special <name> := <poly>        adjoin the special zero of a polynomial
    describe <expr>                 immediate description in the base field
    val <expr>                      exact valuation
    eq <expr>, <expr>               equality test
    polygon <poly>                  Newton polygon of a polynomial
    check <name> [N]                verify a binding against the modular oracle
    show tower                      list the extension levels

Expressions use integers, ``+ - * / ^``, parentheses, bound names, and
(in polynomial positions) the indeterminate ``x``.  Generators are bound
automatically as ``b1``, ``b2``, ... when levels appear.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .extension import ExtElement, Tower
from .fields import PAdicRationals
from .hensel import HenselCodeError, SpecialPolyError
from .newton import newton_polygon, polygon_as_text, polygon_as_tree
from .oracle import (
    DEFAULT_PRECISION,
    ModularApprox,
    PrecisionError,
    check_description,
    special_zero_approx,
)
from .parsing import ExpressionParser, ParseError, tokenize
from .polynomials import Polynomial

_GENERATOR_NAME = re.compile(r"^b\d+$")


@dataclass
class CommandResult:
    ok: bool
    text: str = ""
    data: Optional[dict] = None
    error: Optional[str] = None
    error_kind: Optional[str] = None  # "parse" | "command"


@dataclass
class Binding:
    name: str
    element: object
    description: Optional[Fraction]
    kind: str  # "hensel" | "special" | "generator"
    # oracle provenance, available only for data over the bottom field
    base_special: Optional[tuple] = None  # coefficient tuple of T over Q
    base_mobius: Optional[tuple] = None  # (a, b, c, d) over Q
    base_value: Optional[Fraction] = None  # exact rational elements


class Session:
    def __init__(self, precision: int = DEFAULT_PRECISION):
        self.precision = precision
        self.field: Optional[PAdicRationals] = None
        self.tower: Optional[Tower] = None
        self.bindings: dict[str, Binding] = {}

    # -- helpers ---------------------------------------------------------------

    def _require_field(self) -> Tower:
        if self.tower is None:
            raise ValueError("no base field set (use: field Q <p>)")
        return self.tower

    def _env(self) -> dict:
        tower = self._require_field()
        return {name: tower.lift(b.element) for name, b in self.bindings.items()}

    def _parser(self, tokens, allow_var: bool = True) -> ExpressionParser:
        tower = self._require_field()
        return ExpressionParser(tokens, tower.top, self._env(), allow_var=allow_var)

    def _render(self, x) -> str:
        if isinstance(x, ExtElement):
            return x.ext.render(x)
        return str(x)

    def _render_description(self, d: Optional[Fraction]) -> str:
        return "Zero" if d is None else str(d)

    def _as_base_fraction(self, x) -> Optional[Fraction]:
        """Unwrap chains of constant embeddings down to a rational, when
        the element is such a chain; None otherwise.  This is what makes
        the modular oracle applicable to levels whose defining data came
        from rational inputs."""
        while isinstance(x, ExtElement):
            if x.num.degree > 0 or x.den.coeffs != (x.ext.base.one,):
                return None
            x = x.num.coeffs[0] if x.num.coeffs else x.ext.base.zero
        return Fraction(x)

    def _base_poly_coeffs(self, poly: Polynomial) -> Optional[tuple]:
        out = []
        for c in poly.coeffs:
            q = self._as_base_fraction(c)
            if q is None:
                return None
            out.append(q)
        return tuple(out)

    def _base_mobius(self, mobius) -> Optional[tuple]:
        out = []
        for c in (mobius.a, mobius.b, mobius.c, mobius.d):
            q = self._as_base_fraction(c)
            if q is None:
                return None
            out.append(q)
        return tuple(out)

    def _bind(self, binding: Binding) -> None:
        self.bindings[binding.name] = binding

    def _check_name(self, name: str) -> None:
        if name == "x":
            raise ValueError("'x' is reserved for the indeterminate")
        if _GENERATOR_NAME.match(name):
            raise ValueError(f"{name!r} is reserved for tower generators")
        if name in self.bindings:
            raise ValueError(f"{name!r} is already bound")

    def _register_generator(self) -> None:
        tower = self._require_field()
        ext = tower.levels[-1]
        base_special = self._base_poly_coeffs(ext.modulus)
        base_mobius = None
        if base_special is not None:
            base_mobius = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))
        self._bind(
            Binding(
                name=ext.symbol,
                element=ext.beta,
                description=tower.describe(ext.beta),
                kind="generator",
                base_special=base_special,
                base_mobius=base_mobius,
            )
        )

    # -- command entry -----------------------------------------------------------

    def execute(self, line: str) -> CommandResult:
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            return CommandResult(ok=True)
        try:
            return self._dispatch(stripped)
        except ParseError as e:
            return CommandResult(ok=False, error=str(e), error_kind="parse")
        except (
            HenselCodeError,
            SpecialPolyError,
            PrecisionError,
            ZeroDivisionError,
            ValueError,
        ) as e:
            return CommandResult(ok=False, error=str(e), error_kind="command")

    def _dispatch(self, line: str) -> CommandResult:
        parts = line.split(None, 1)
        cmd = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        handler = getattr(self, f"_cmd_{cmd}", None)
        if handler is None:
            raise ParseError(f"unknown command {cmd!r}", 0)
        return handler(rest)

    # -- commands ---------------------------------------------------------------

    def _cmd_field(self, rest: str) -> CommandResult:
        tokens = tokenize(rest)
        if tokens[0].kind != "NAME" or tokens[0].text != "Q":
            raise ParseError("only the rational base field 'Q' is supported", 0)
        if tokens[1].kind != "INT":
            raise ParseError("expected a prime number", tokens[1].pos)
        if tokens[2].kind != "END":
            raise ParseError(f"unexpected {tokens[2].text!r}", tokens[2].pos)
        p = int(tokens[1].text)
        self.field = PAdicRationals(p)
        self.tower = Tower(self.field)
        self.bindings = {}
        note = "" if self.field.primality == "proven" else " (probabilistic primality check)"
        return CommandResult(
            ok=True,
            text=f"base field Q with {p}-adic valuation{note}",
            data={"command": "field", "p": p, "primality": self.field.primality},
        )

    def _cmd_hensel(self, rest: str) -> CommandResult:
        tower = self._require_field()
        parser = self._parser(tokenize(rest))
        name_tok = parser.advance()
        if name_tok.kind != "NAME":
            raise ParseError("expected a binding name", name_tok.pos)
        self._check_name(name_tok.text)
        parser.expect_op(":=")
        paren = parser.expect_op("(")
        poly = parser.expression()
        parser.expect_op(",")
        point_poly = parser.expression()
        parser.expect_op(")")
        parser.expect_end()
        if point_poly.degree > 0:
            raise ParseError("code point must be a constant", paren.pos)
        point = point_poly.coeffs[0] if point_poly.coeffs else tower.top.zero

        depth_before = tower.depth
        result = tower.hensel_zero(poly, point)
        if tower.depth > depth_before:
            self._register_generator()
        description = tower.describe(result.element)

        base_special = None
        base_mobius = None
        base_value = None
        if result.level_index is not None:
            base_special = self._base_poly_coeffs(tower.levels[-1].modulus)
            if base_special is not None:
                base_mobius = self._base_mobius(result.mobius)
            if base_mobius is None:
                base_special = None
        elif result.exact:
            base_value = self._as_base_fraction(result.element)

        self._bind(
            Binding(
                name=name_tok.text,
                element=result.element,
                description=description,
                kind="hensel",
                base_special=base_special,
                base_mobius=base_mobius,
                base_value=base_value,
            )
        )

        lines = [f"shifted: {result.shifted.render()}"]
        data: dict = {
            "command": "hensel",
            "name": name_tok.text,
            "shifted": result.shifted.render(),
        }
        if result.slope_description is not None:
            lines.append(f"slope description: {self._render(result.slope_description)}")
            data["slope_description"] = self._render(result.slope_description)
        if result.unit_factor is not None:
            lines.append(f"unit factor: {result.unit_factor.render('y')}")
            data["unit_factor"] = result.unit_factor.render("y")
        if result.exact:
            lines.append(f"{name_tok.text} = {self._render(result.element)} (exact)")
            data["exact"] = True
            data["element"] = self._render(result.element)
        else:
            ext = tower.levels[result.level_index - 1]
            lines.append(f"special: {result.special.poly.render()}")
            lines.append(
                f"{ext.symbol} := special zero (level {result.level_index})"
            )
            lines.append(f"{name_tok.text} = {result.mobius.render(ext.symbol)}")
            data.update(
                {
                    "exact": False,
                    "special": result.special.poly.render(),
                    "generator": ext.symbol,
                    "level": result.level_index,
                    "mobius": {
                        "numerator": result.mobius.numerator_poly().render(ext.symbol),
                        "denominator": result.mobius.denominator_poly().render(ext.symbol),
                        "determinant": self._render(result.mobius.determinant()),
                    },
                    "element": self._render(result.element),
                }
            )
        lines.append(f"description: {self._render_description(description)}")
        data["description"] = self._render_description(description)
        return CommandResult(ok=True, text="\n".join(lines), data=data)

    def _cmd_special(self, rest: str) -> CommandResult:
        tower = self._require_field()
        parser = self._parser(tokenize(rest))
        name_tok = parser.advance()
        if name_tok.kind != "NAME":
            raise ParseError("expected a binding name", name_tok.pos)
        self._check_name(name_tok.text)
        parser.expect_op(":=")
        poly = parser.expression()
        parser.expect_end()

        depth_before = tower.depth
        beta = tower.push_special(poly)
        created = tower.depth > depth_before
        if created:
            self._register_generator()
        description = tower.describe(beta)
        base_special = None
        base_mobius = None
        base_value = None
        if created:
            base_special = self._base_poly_coeffs(tower.levels[-1].modulus)
            if base_special is not None:
                base_mobius = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))
        else:
            base_value = self._as_base_fraction(beta)
        self._bind(
            Binding(
                name=name_tok.text,
                element=beta,
                description=description,
                kind="special",
                base_special=base_special,
                base_mobius=base_mobius,
                base_value=base_value,
            )
        )
        data: dict = {"command": "special", "name": name_tok.text}
        if created:
            ext = tower.levels[-1]
            lines = [
                f"{ext.symbol} := special zero of {ext.modulus.render()} (level {tower.depth})",
                f"{name_tok.text} = {ext.symbol}",
            ]
            data.update(
                {"generator": ext.symbol, "level": tower.depth, "special": ext.modulus.render()}
            )
        else:
            lines = [f"{name_tok.text} = {self._render(beta)} (trivial: special zero is 1)"]
            data["trivial"] = True
        lines.append(f"description: {self._render_description(description)}")
        data["description"] = self._render_description(description)
        return CommandResult(ok=True, text="\n".join(lines), data=data)

    def _element_arg(self, rest: str):
        parser = self._parser(tokenize(rest), allow_var=False)
        value = parser.expression()
        parser.expect_end()
        top = self._require_field().top
        return value.coeffs[0] if value.coeffs else top.zero

    def _cmd_describe(self, rest: str) -> CommandResult:
        tower = self._require_field()
        element = self._element_arg(rest)
        d = tower.describe(element)
        return CommandResult(
            ok=True,
            text=self._render_description(d),
            data={"command": "describe", "description": self._render_description(d)},
        )

    def _cmd_val(self, rest: str) -> CommandResult:
        tower = self._require_field()
        element = self._element_arg(rest)
        v = tower.element_val(element)
        return CommandResult(
            ok=True, text=str(v), data={"command": "val", "valuation": str(v)}
        )

    def _cmd_eq(self, rest: str) -> CommandResult:
        tower = self._require_field()
        parser = self._parser(tokenize(rest), allow_var=False)
        left = parser.expression()
        parser.expect_op(",")
        right = parser.expression()
        parser.expect_end()
        top = tower.top

        def as_elem(p: Polynomial):
            return p.coeffs[0] if p.coeffs else top.zero

        verdict = tower.element_equals(as_elem(left), as_elem(right))
        return CommandResult(
            ok=True,
            text="true" if verdict else "false",
            data={"command": "eq", "equal": verdict},
        )

    def _cmd_polygon(self, rest: str) -> CommandResult:
        tower = self._require_field()
        parser = self._parser(tokenize(rest))
        poly = parser.expression()
        parser.expect_end()
        np = newton_polygon(poly, tower.top)
        return CommandResult(
            ok=True,
            text=polygon_as_text(np),
            data={"command": "polygon", **polygon_as_tree(np)},
        )

    def _cmd_check(self, rest: str) -> CommandResult:
        tower = self._require_field()
        tokens = tokenize(rest)
        if tokens[0].kind != "NAME":
            raise ParseError("expected a binding name", tokens[0].pos)
        name = tokens[0].text
        precision = self.precision
        idx = 1
        if tokens[idx].kind == "INT":
            precision = int(tokens[idx].text)
            idx += 1
        if tokens[idx].kind != "END":
            raise ParseError(f"unexpected {tokens[idx].text!r}", tokens[idx].pos)
        if name not in self.bindings:
            raise ParseError(f"unbound identifier {name!r}", 0)
        binding = self.bindings[name]
        p = self.field.p

        if binding.base_value is not None:
            value = binding.base_value
            if value.denominator % p == 0:
                raise ValueError("element has p in its denominator")
            approx = ModularApprox(
                residue=value.numerator * pow(value.denominator, -1, p**precision) % p**precision,
                p=p,
                precision=precision,
            )
        elif binding.base_special is not None:
            t_poly = Polynomial.from_fractions(PAdicRationals(p), binding.base_special)
            beta_hat = special_zero_approx(t_poly, p, precision)
            a, b, c, d = binding.base_mobius
            modulus = beta_hat.modulus
            num_r = (Fraction(a).numerator * pow(Fraction(a).denominator, -1, modulus) * beta_hat.residue
                     + Fraction(b).numerator * pow(Fraction(b).denominator, -1, modulus)) % modulus
            den_r = (Fraction(c).numerator * pow(Fraction(c).denominator, -1, modulus) * beta_hat.residue
                     + Fraction(d).numerator * pow(Fraction(d).denominator, -1, modulus)) % modulus
            if den_r % p == 0:
                raise PrecisionError("denominator of the coordinate form is not a unit")
            approx = ModularApprox(
                residue=num_r * pow(den_r, -1, modulus) % modulus, p=p, precision=precision
            )
        else:
            raise ValueError(
                "oracle check supports only zeros coded over the base field"
            )

        if binding.description is None:
            verdict = approx.residue == 0
        else:
            verdict = check_description(approx, binding.description, p, precision)
        return CommandResult(
            ok=True,
            text=f"check {name}: {'true' if verdict else 'false'} (precision {precision})",
            data={
                "command": "check",
                "name": name,
                "verdict": verdict,
                "precision": precision,
            },
        )

    def _cmd_show(self, rest: str) -> CommandResult:
        if rest.strip() != "tower":
            raise ParseError("usage: show tower", 0)
        tower = self._require_field()
        lines = [f"base: Q with {self.field.p}-adic valuation"]
        levels = []
        for i, ext in enumerate(tower.levels, start=1):
            over = "" if i == 1 else f" (over level {i - 1})"
            lines.append(
                f"level {i}: {ext.symbol} special zero of {ext.modulus.render()}{over}"
            )
            levels.append(
                {"index": i, "symbol": ext.symbol, "special": ext.modulus.render()}
            )
        return CommandResult(
            ok=True,
            text="\n".join(lines),
            data={"command": "show", "p": self.field.p, "levels": levels},
        )

    # -- service support -----------------------------------------------------

    def summary(self) -> dict:
        return {
            "p": self.field.p if self.field else None,
            "precision": self.precision,
            "levels": [
                {"index": i + 1, "symbol": ext.symbol, "special": ext.modulus.render()}
                for i, ext in enumerate(self.tower.levels)
            ]
            if self.tower
            else [],
            "bindings": sorted(self.bindings),
        }
