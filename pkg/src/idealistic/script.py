"""Session scripts: ring header, named pairs, ideals, boundary divisors and commands."""

from __future__ import annotations

import re
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from fractions import Fraction
from tokenize import TokenError
from typing import Any

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import PolynomialError

from .chart import BoundaryDivisor
from .exceptions import (
    DuplicateNameError,
    IdealisticError,
    ScriptSyntaxError,
    UndefinedNameError,
    UnknownFieldError,
)
from .field import LAMBDA, Field, FunctionField, PrimeField, Rationals
from .pair import Component, Pair
from .poly import Polynomial, Ring

COMMANDS = (
    "order",
    "sing",
    "tangent",
    "directrix",
    "ridge",
    "reduce",
    "decompose",
    "blowup",
    "coefficient",
    "delta",
    "invariant",
    "chain",
    "gb",
    "resolve-det",
)
IDEAL_COMMANDS = frozenset({"gb"})
TARGETLESS_COMMANDS = frozenset({"resolve-det"})

_TRANSFORMATIONS = (*standard_transformations, convert_xor, implicit_multiplication)
_FIELD = re.compile(r"^(?:Q|Fp\(\s*(\d+)\s*(?:,\s*(lam)\s*)?\))$")
_NAME = r"[A-Za-z_][A-Za-z0-9_]*"


def parse_field(descriptor: str) -> Field:
    """Map ``Q``, ``Fp(p)`` or ``Fp(p, lam)`` to a field.

    Raises:
        UnknownFieldError: If the descriptor is malformed or p is not prime.
    """
    text = descriptor.strip()
    match = _FIELD.match(text)
    if match is None:
        raise UnknownFieldError(text)
    if text == "Q":
        return Rationals()
    p = int(match.group(1))
    if not sympy.isprime(p):
        raise UnknownFieldError(text)
    return FunctionField(p) if match.group(2) else PrimeField(p)


def field_descriptor(field_: Field) -> str:
    if isinstance(field_, FunctionField):
        return f"Fp({field_.characteristic}, {LAMBDA})"
    if isinstance(field_, PrimeField):
        return f"Fp({field_.characteristic})"
    return "Q"


def _raw(field_: Field, coefficient: Any) -> Any:
    rational = sympy.Rational(coefficient)
    return field_.from_fraction(Fraction(int(rational.p), int(rational.q)))


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse polynomial text over ``ring``; ``^`` and ``**`` both mean powers.

    Over F_p(lam) the symbol ``lam`` is the field parameter and may appear in
    denominators.

    Raises:
        ValueError: If the text is not a polynomial in the ring variables.
    """
    symbols = {name: sympy.Symbol(name) for name in ring.variables}
    parameter = sympy.Symbol(LAMBDA)
    local = dict(symbols)
    function_field = isinstance(ring.field, FunctionField)
    if function_field:
        local[LAMBDA] = parameter
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMATIONS)
    except (SyntaxError, TypeError, sympy.SympifyError, TokenError) as exc:
        raise ValueError(f"cannot parse '{text}'") from exc
    allowed = set(symbols.values()) | ({parameter} if function_field else set())
    unknown = sorted(str(s) for s in expr.free_symbols - allowed)
    if unknown:
        raise ValueError(f"unknown symbol(s) {', '.join(unknown)} in '{text}'")
    numerator, denominator = sympy.fraction(sympy.together(expr))
    if denominator.free_symbols & set(symbols.values()):
        raise ValueError(f"'{text}' is not a polynomial")
    gens = [symbols[name] for name in ring.variables]
    field_ = ring.field
    try:
        denominator_value = _lambda_value(field_, denominator, parameter)
        if not gens:
            value = field_.div(_lambda_value(field_, numerator, parameter), denominator_value)
            return ring.constant(field_(value)) if not field_.is_zero(value) else ring.zero()
        poly = sympy.Poly(sympy.expand(numerator), *gens)
    except PolynomialError as exc:
        raise ValueError(f"'{text}' is not a polynomial") from exc
    terms: dict[tuple[int, ...], Any] = {}
    for exponent, coefficient in poly.terms():
        value = field_.div(_lambda_value(field_, coefficient, parameter), denominator_value)
        if not field_.is_zero(value):
            terms[tuple(int(e) for e in exponent)] = value
    return Polynomial(ring, terms)


def _lambda_value(field_: Field, expr: Any, parameter: sympy.Symbol) -> Any:
    """Evaluate a polynomial in lam with rational coefficients in the field."""
    if not isinstance(field_, FunctionField):
        return _raw(field_, expr)
    total = field_.zero
    for (k,), coefficient in sympy.Poly(sympy.expand(expr), parameter).terms():
        term = field_.mul(_raw(field_, coefficient), field_.power(field_.generator, int(k)))
        total = field_.add(total, term)
    return total


@dataclass(frozen=True)
class Command:
    """One command line with its options and optional expectation text."""

    name: str
    target: str | None = None
    at: tuple[str, ...] | None = None
    chart: str | None = None
    split: tuple[str, ...] | None = None
    depth: int | None = None
    size: tuple[int, int, int] | None = None
    field: str | None = None
    expect: str | None = None
    line: int = 0

    def render(self) -> str:
        parts = [self.name]
        if self.target is not None:
            parts.append(self.target)
        if self.size is not None:
            parts.extend(str(v) for v in self.size)
        if self.at is not None:
            parts.append(f"at [{', '.join(self.at)}]")
        if self.chart is not None:
            parts.append(f"chart {self.chart}")
        if self.split is not None:
            parts.append(f"split [{', '.join(self.split)}]")
        if self.depth is not None:
            parts.append(f"depth {self.depth}")
        if self.field is not None:
            parts.append(f"field {self.field}")
        if self.expect is not None:
            parts.append(f"expect {self.expect}")
        return " ".join(parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Command):
            return NotImplemented
        return self.render() == other.render()

    def __hash__(self) -> int:
        return hash(self.render())


@dataclass
class SessionScript:
    ring: Ring | None = None
    pairs: dict[str, Pair] = dataclass_field(default_factory=dict)
    ideals: dict[str, tuple[Polynomial, ...]] = dataclass_field(default_factory=dict)
    boundaries: dict[str, BoundaryDivisor] = dataclass_field(default_factory=dict)
    commands: list[Command] = dataclass_field(default_factory=list)

    def names(self) -> set[str]:
        return set(self.pairs) | set(self.ideals) | set(self.boundaries)


@dataclass(frozen=True)
class _Statement:
    text: str
    line: int
    column: int


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0].ljust(len(line)) for line in text.split("\n"))


def _statements(text: str) -> list[_Statement]:
    """Split on ';' outside brackets, keeping the start position of each statement."""
    statements = []
    depth = 0
    start = 0
    line, column = 1, 1
    start_line, start_column = 1, 1
    for index, char in enumerate(text):
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
            if depth < 0:
                raise ScriptSyntaxError(line, column, f"unbalanced '{char}'")
        elif char == ";" and depth == 0:
            _append(statements, text[start:index], start_line, start_column)
            start = index + 1
            start_line, start_column = line, column + 1
        if char == "\n":
            line, column = line + 1, 1
        else:
            column += 1
    if depth:
        raise ScriptSyntaxError(line, column, "unclosed bracket")
    if text[start:].strip():
        line, column = _position(text[start:], start_line, start_column)
        raise ScriptSyntaxError(line, column, "missing ';' after statement")
    return statements


def _position(chunk: str, line: int, column: int) -> tuple[int, int]:
    """Move a chunk's start position past its leading whitespace."""
    skipped = chunk[: len(chunk) - len(chunk.lstrip())]
    newlines = skipped.count("\n")
    if newlines:
        return line + newlines, len(skipped) - skipped.rfind("\n")
    return line, column + len(skipped)


def _append(statements: list[_Statement], chunk: str, line: int, column: int) -> None:
    stripped = chunk.strip()
    if not stripped:
        return
    line, column = _position(chunk, line, column)
    statements.append(_Statement(" ".join(stripped.split()), line, column))


def split_top(text: str, separator: str) -> list[str]:
    parts, depth, current = [], 0, []
    for char in text:
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        if char == separator and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    parts.append("".join(current))
    return [p.strip() for p in parts]


def _names(text: str) -> tuple[str, ...]:
    names = tuple(n for n in (part.strip() for part in text.split(",")) if n)
    for name in names:
        if not re.fullmatch(_NAME, name):
            raise ValueError(f"invalid name '{name}'")
    return names


class _Parser:
    def __init__(self) -> None:
        self.script = SessionScript()

    def parse(self, text: str) -> SessionScript:
        for statement in _statements(_strip_comments(text)):
            try:
                self._statement(statement)
            except ValueError as exc:
                raise ScriptSyntaxError(statement.line, statement.column, str(exc)) from None
        return self.script

    def _define(self, name: str) -> None:
        if name in self.script.names():
            raise DuplicateNameError(name)

    def _ring(self) -> Ring:
        if self.script.ring is None:
            raise ValueError("a ring header must come first")
        return self.script.ring

    def _statement(self, statement: _Statement) -> None:
        text = statement.text
        keyword = text.split(" ", 1)[0].split("[", 1)[0]
        if keyword == "ring":
            self._ring_header(text)
        elif keyword == "pair":
            self._pair(text)
        elif keyword == "ideal":
            self._ideal(text)
        elif keyword == "boundary":
            self._boundary(text)
        elif keyword in COMMANDS:
            self._command(keyword, text[len(keyword) :].strip(), statement.line)
        else:
            raise ValueError(f"unknown statement '{keyword}'")

    def _ring_header(self, text: str) -> None:
        match = re.fullmatch(r"ring\s+(?P<field>.+?)\s*\[(?P<vars>[^\]]*)\]", text)
        if match is None:
            raise ValueError("expected 'ring FIELD [u-names; y-names]'")
        if self.script.ring is not None:
            raise ValueError("the ring is already declared")
        field_ = parse_field(match.group("field"))
        groups = match.group("vars").split(";")
        if len(groups) > 2:
            raise ValueError("at most one ';' separates the y-variables")
        u_names = _names(groups[0])
        y_names = _names(groups[1]) if len(groups) == 2 else ()
        self.script.ring = Ring(field_, u_names + y_names, y_names)

    def _component(self, text: str) -> Component:
        match = re.fullmatch(r"(?P<sb>sb\s*)?\((?P<inner>.*)\)", text)
        if match is None:
            raise ValueError(f"expected '(polys : weight)', got '{text}'")
        inner = split_top(match.group("inner"), ":")
        if len(inner) != 2:
            raise ValueError(f"component '{text}' needs exactly one ':'")
        try:
            weight = Fraction(inner[1].replace(" ", ""))
        except ValueError:
            raise ValueError(f"weight '{inner[1]}' is not a rational number") from None
        if weight <= 0:
            raise ValueError("weight must be positive")
        ring = self._ring()
        generators = tuple(parse_polynomial(g, ring) for g in split_top(inner[0], ","))
        try:
            return Component(generators, weight, bool(match.group("sb")))
        except IdealisticError as exc:
            raise ValueError(str(exc)) from None

    def _pair(self, text: str) -> None:
        match = re.fullmatch(rf"pair\s+(?P<name>{_NAME})\s*=\s*(?P<body>.+)", text)
        if match is None:
            raise ValueError("expected 'pair NAME = component & ...'")
        name = match.group("name")
        self._define(name)
        ring = self._ring()
        components = tuple(self._component(c) for c in split_top(match.group("body"), "&"))
        self.script.pairs[name] = Pair(ring, components)

    def _ideal(self, text: str) -> None:
        match = re.fullmatch(rf"ideal\s+(?P<name>{_NAME})\s*=\s*\[(?P<body>.*)\]", text)
        if match is None:
            raise ValueError("expected 'ideal NAME = [polys]'")
        name = match.group("name")
        self._define(name)
        ring = self._ring()
        body = match.group("body").strip()
        self.script.ideals[name] = (
            tuple(parse_polynomial(g, ring) for g in split_top(body, ",")) if body else ()
        )

    def _boundary(self, text: str) -> None:
        match = re.fullmatch(
            rf"boundary\s+(?P<name>{_NAME})\s*=\s*(?P<poly>.+?)\s+(?P<flag>old|new)", text
        )
        if match is None:
            raise ValueError("expected 'boundary NAME = poly old|new'")
        name = match.group("name")
        self._define(name)
        equation = parse_polynomial(match.group("poly"), self._ring())
        self.script.boundaries[name] = BoundaryDivisor(equation, match.group("flag") == "new")

    def _command(self, name: str, rest: str, line: int) -> None:
        expect = None
        found = re.search(r"(?:^|\s)expect(?:\s+|$)", rest)
        if found is not None:
            expect = rest[found.end() :].strip()
            rest = rest[: found.start()].strip()
            if not expect:
                raise ValueError("'expect' needs a value")
        tokens = re.findall(r"\[[^\]]*\]|Fp\([^)]*\)|\S+", rest)
        options: dict[str, Any] = {}
        position = 0
        if name in TARGETLESS_COMMANDS:
            numbers = tokens[:3]
            if len(numbers) != 3 or not all(t.isdigit() for t in numbers):
                raise ValueError(f"'{name}' needs three integers m n r")
            options["size"] = tuple(int(t) for t in numbers)
            position = 3
        else:
            if not tokens:
                raise ValueError(f"'{name}' needs a target name")
            target = tokens[0]
            known = self.script.ideals if name in IDEAL_COMMANDS else self.script.pairs
            if target not in known:
                raise UndefinedNameError(target)
            options["target"] = target
            position = 1
        while position < len(tokens):
            option = tokens[position]
            value = tokens[position + 1] if position + 1 < len(tokens) else None
            if value is None:
                raise ValueError(f"option '{option}' needs a value")
            if option in ("at", "split"):
                if not (value.startswith("[") and value.endswith("]")):
                    raise ValueError(f"option '{option}' needs '[names]'")
                names = _names(value[1:-1])
                if self.script.ring is not None:
                    for n in names:
                        if n not in self.script.ring.variables:
                            raise ValueError(f"unknown variable '{n}'")
                options[option] = names
            elif option == "chart":
                options["chart"] = value
            elif option == "depth":
                if not value.isdigit() or int(value) < 1:
                    raise ValueError("depth must be a positive integer")
                options["depth"] = int(value)
            elif option == "field":
                parse_field(value)
                options["field"] = value
            else:
                raise ValueError(f"unknown option '{option}'")
            position += 2
        self.script.commands.append(Command(name, expect=expect, line=line, **options))


def parse(text: str) -> SessionScript:
    """Parse a session script.

    Raises:
        ScriptSyntaxError: On malformed statements, with line and column.
        UnknownFieldError: If the ring header names an unsupported field.
        DuplicateNameError: If a name is defined twice.
        UndefinedNameError: If a command refers to an unknown name.
    """
    return _Parser().parse(text)


def _component_text(component: Component) -> str:
    generators = ", ".join(str(g) for g in component.generators)
    marker = "sb " if component.standard_basis else ""
    return f"{marker}({generators} : {component.weight})"


def pair_text(pair: Pair) -> str:
    if pair.is_empty:
        return "()"
    return " & ".join(_component_text(c) for c in pair.components)


def parse_pair(text: str, ring: Ring) -> Pair:
    """Parse `(polys : weight) & ...` over a given ring; `()` is the empty pair.

    Raises:
        ValueError: If a component is malformed.
    """
    text = " ".join(text.split())
    if text in ("", "()"):
        return Pair(ring)
    parser = _Parser()
    parser.script.ring = ring
    return Pair(ring, tuple(parser._component(c) for c in split_top(text, "&")))


def render(script: SessionScript) -> str:
    """Print a script in canonical form; ``parse(render(s))`` gives back ``s``."""
    lines = []
    ring = script.ring
    if ring is not None:
        names = ", ".join(ring.u_variables)
        if ring.y_variables:
            names += "; " + ", ".join(ring.y_variables)
        lines.append(f"ring {field_descriptor(ring.field)} [{names}];")
    for name, pair in script.pairs.items():
        lines.append(f"pair {name} = {pair_text(pair)};")
    for name, generators in script.ideals.items():
        lines.append(f"ideal {name} = [{', '.join(str(g) for g in generators)}];")
    for name, divisor in script.boundaries.items():
        lines.append(f"boundary {name} = {divisor.equation} {'new' if divisor.new else 'old'};")
    for command in script.commands:
        lines.append(f"{command.render()};")
    return "\n".join(lines) + "\n"
