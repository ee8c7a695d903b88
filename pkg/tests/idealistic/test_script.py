from fractions import Fraction

import pytest

from idealistic.exceptions import (
    DuplicateNameError,
    ScriptSyntaxError,
    UndefinedNameError,
    UnknownFieldError,
)
from idealistic.field import FunctionField, PrimeField, Rationals, lam
from idealistic.pair import Pair
from idealistic.poly import Ring
from idealistic.script import Command, parse, parse_field, parse_pair, parse_polynomial, render

_SCRIPT = """\
# comments run to the end of the line
ring Fp(2) [u1, u2; y];
pair E = sb (y^2 + u1^3 : 2) & (u2 : 1/2);
ideal I = [u1*u2, y];
boundary D = u1 new;
order E at [u1, y] expect 3/2;
blowup E at [u1, y] chart y;
invariant E depth 2 expect (2, 0);
gb I;
resolve-det 2 2 2 field Fp(3);
"""


def test_parse_full_script() -> None:
    script = parse(_SCRIPT)
    ring = script.ring
    assert ring is not None
    assert ring.field == PrimeField(2)
    assert ring.variables == ("u1", "u2", "y")
    assert ring.y_variables == ("y",)
    u1, u2, y = ring.gens()

    pair = script.pairs["E"]
    assert pair.weights == (Fraction(2), Fraction(1, 2))
    assert pair.components[0].standard_basis
    assert pair.components[0].generators == (y**2 + u1**3,)
    assert script.ideals["I"] == (u1 * u2, y)
    assert script.boundaries["D"].new

    order, blowup, invariant, gb, det = script.commands
    assert order == Command("order", "E", at=("u1", "y"), expect="3/2")
    assert order.line == 6
    assert blowup.chart == "y"
    assert invariant.depth == 2
    assert invariant.expect == "(2, 0)"
    assert gb.target == "I"
    assert det.size == (2, 2, 2)
    assert det.field == "Fp(3)"


def test_render_parses_back() -> None:
    script = parse(_SCRIPT)
    assert parse(render(script)) == script


@pytest.mark.parametrize(
    "text, line, column",
    [
        # weight zero
        ("ring Q [x];\npair E = (x : 0);", 2, 1),
        # missing terminator
        ("ring Q [x];\npair E = (x : 1)", 2, 1),
        # pair before the ring header
        ("pair E = (x : 1);", 1, 1),
        # unknown command
        ("ring Q [x]; smooth E;", 1, 13),
        # unbalanced bracket
        ("ring Q [x]);", 1, 11),
    ],
)
def test_syntax_errors_carry_position(text, line, column) -> None:
    with pytest.raises(ScriptSyntaxError) as excinfo:
        parse(text)
    assert (excinfo.value.line, excinfo.value.column) == (line, column)


def test_duplicate_name() -> None:
    with pytest.raises(DuplicateNameError):
        parse("ring Q [x]; pair E = (x : 1); ideal E = [x];")


def test_undefined_name() -> None:
    with pytest.raises(UndefinedNameError):
        parse("ring Q [x]; order F;")


@pytest.mark.parametrize(
    "descriptor, expected",
    [
        ("Q", Rationals()),
        ("Fp(5)", PrimeField(5)),
        ("Fp(2, lam)", FunctionField(2)),
    ],
)
def test_parse_field(descriptor, expected) -> None:
    assert parse_field(descriptor) == expected


@pytest.mark.parametrize(
    "descriptor",
    [
        # not prime
        "Fp(4)",
        # unsupported
        "R",
        # other parameter name
        "Fp(3, t)",
    ],
)
def test_unknown_field(descriptor) -> None:
    with pytest.raises(UnknownFieldError):
        parse_field(descriptor)


def test_parse_polynomial_over_function_field() -> None:
    field = FunctionField(2)
    ring = Ring(field, ("x", "y"))
    x, y = ring.gens()
    assert parse_polynomial("x^2 + lam*y^2", ring) == x**2 + y**2 * lam(field)


@pytest.mark.parametrize(
    "text",
    [
        # rational function
        "1/x",
        # unknown variable
        "x + w",
    ],
)
def test_parse_polynomial_rejects(text) -> None:
    with pytest.raises(ValueError):
        parse_polynomial(text, Ring(Rationals(), ("x", "y")))


def test_parse_pair_of_empty_text() -> None:
    ring = Ring(Rationals(), ("x",))
    assert parse_pair("()", ring) == Pair(ring)
    assert parse_pair("(x^2 : 2) & (x : 1)", ring).weights == (Fraction(2), Fraction(1))
