import itertools
import random
from fractions import Fraction

import pytest
import sympy

from idealistic.field import Field, PrimeField, Rationals
from idealistic.gb import buchberger, ideal_equal, member_of, radical_contains
from idealistic.linalg import in_span
from idealistic.orders import Exponent
from idealistic.poly import Polynomial, Ring


def _to_sympy(f: Polynomial, symbols: dict[str, sympy.Symbol]) -> sympy.Expr:
    total = sympy.Integer(0)
    for exponent, c in f.terms.items():
        if isinstance(c, Fraction):
            coefficient = sympy.Rational(c.numerator, c.denominator)
        else:
            coefficient = sympy.Integer(c)
        term = coefficient
        for name, e in zip(f.ring.variables, exponent):
            term *= symbols[name] ** e
        total += term
    return total


def _random_polynomial(ring: Ring, rng: random.Random) -> Polynomial:
    f = ring.zero()
    while f.is_zero:
        for _ in range(3):
            exponent = tuple(rng.randint(0, 2) for _ in ring.variables)
            f = f + ring.monomial(exponent, rng.randint(-3, 3))
    return f


def test_basis_of_principal_ideal() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x = ring.var("x")
    assert buchberger([x * 3]).basis == (x,)


def test_homogeneous_basis() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, y = ring.gens()
    assert set(buchberger([x * y, x + y]).basis) == {x + y, y**2}


def test_basis_ideal_contains_eliminated_binomial() -> None:
    ring = Ring(Rationals(), ("x", "y", "z"))
    x, y, z = ring.gens()
    basis = buchberger([y**2 - x**3, y**2 - z**5])
    assert basis.contains(x**3 - z**5)


@pytest.mark.parametrize(
    "generators, candidate, expected",
    [
        # 1 is not in <x>
        ("x", "1", False),
        # xy is not in <x^2, y^2>
        ("x^2,y^2", "xy", False),
        # x^2 y is in <x^2, y^2>
        ("x^2,y^2", "x^2y", True),
    ],
)
def test_membership(generators, candidate, expected) -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, y = ring.gens()
    polys = {"x": x, "1": ring.one(), "x^2": x**2, "y^2": y**2, "xy": x * y, "x^2y": x**2 * y}
    basis = buchberger([polys[g] for g in generators.split(",")], ring)
    found, _ = member_of(polys[candidate], basis)
    assert found is expected


def test_unit_ideal() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, y = ring.gens()
    assert buchberger([x, x + 1]).is_unit


def test_ideal_equal_ignores_generator_order() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, y = ring.gens()
    assert ideal_equal([x, y], [y, x])
    assert not ideal_equal([x], [x**2])


def test_radical_membership() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, y = ring.gens()
    assert radical_contains([x**2, y**3], x + y)
    assert not radical_contains([x**2], y)


def test_empty_generators_need_ring() -> None:
    with pytest.raises(ValueError):
        buchberger([])


@pytest.mark.parametrize(
    "field, offset",
    [
        # rationals
        (Rationals(), 0),
        (Rationals(), 1),
        (Rationals(), 2),
        # small prime fields
        (PrimeField(2), 3),
        (PrimeField(5), 4),
        (PrimeField(7), 5),
    ],
)
def test_basis_matches_sympy(field, offset, seed) -> None:
    rng = random.Random(seed + offset)
    ring = Ring(field, ("x", "y", "z"))
    generators = [_random_polynomial(ring, rng) for _ in range(2)]
    symbols = {name: sympy.Symbol(name) for name in ring.variables}
    gens = [symbols[name] for name in ring.variables]
    options = {"modulus": field.characteristic} if field.characteristic else {"domain": sympy.QQ}

    ours = buchberger(generators).basis
    oracle = sympy.groebner(
        [_to_sympy(g, symbols) for g in generators], *gens, order="grevlex", **options
    )

    assert len(ours) == len(oracle.exprs)
    for g in ours:
        difference = [
            sympy.Poly(_to_sympy(g, symbols) - h, *gens, **options) for h in oracle.exprs
        ]
        assert any(d.is_zero for d in difference)


def _monomials(ring: Ring, degree: int) -> list[Exponent]:
    return [e for e in itertools.product(range(degree + 1), repeat=ring.nvars) if sum(e) == degree]


def _random_form(ring: Ring, rng: random.Random, degree: int) -> Polynomial:
    f = ring.zero()
    for exponent in rng.sample(_monomials(ring, degree), 2 if degree else 1):
        f = f + ring.monomial(exponent, ring.field.sample(rng))
    return f


def _in_span_of_multiples(f: Polynomial, generators: list[Polynomial], degree: int) -> bool:
    """Decide membership of a form of ``degree`` by linear algebra on m*g."""
    ring = f.ring
    field = ring.field
    basis = _monomials(ring, degree)

    def coordinates(h: Polynomial) -> list:
        return [h.terms.get(e, field.zero) for e in basis]

    multiples = [
        coordinates(g * ring.monomial(m))
        for g in generators
        if g.total_degree <= degree
        for m in _monomials(ring, degree - g.total_degree)
    ]
    return in_span(multiples, coordinates(f), field)


_MEMBERSHIP_FIELDS: tuple[Field, ...] = (Rationals(), PrimeField(2), PrimeField(3))


@pytest.mark.parametrize("offset", range(100))
def test_membership_agrees_with_linear_algebra(offset, seed) -> None:
    rng = random.Random(seed + offset)
    field = _MEMBERSHIP_FIELDS[offset % len(_MEMBERSHIP_FIELDS)]
    ring = Ring(field, ("x", "y", "z")[: rng.randint(2, 3)])
    generators = [f for f in (_random_form(ring, rng, rng.randint(1, 3)) for _ in range(2)) if f]
    if not generators:
        generators = [ring.var("x")]
    basis = buchberger(generators, ring)

    # homogeneous candidates decide both ways
    for _ in range(4):
        degree = rng.randint(1, 4)
        if rng.random() < 0.5:
            candidate = _random_form(ring, rng, degree)
        else:
            candidate = ring.zero()
            for g in generators:
                if g.total_degree <= degree:
                    candidate = candidate + g * _random_form(ring, rng, degree - g.total_degree)
        found, _ = member_of(candidate, basis)
        assert found is _in_span_of_multiples(candidate, generators, degree), (
            f"seed {seed + offset}: {candidate} in <{generators}>"
        )

    # inhomogeneous combinations are members
    witness = ring.zero()
    for g in generators:
        witness = witness + g * (ring.one() + _random_form(ring, rng, rng.randint(1, 2)))
    found, remainder = member_of(witness, basis)
    assert found
    assert remainder.is_zero
