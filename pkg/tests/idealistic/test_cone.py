import pytest

from idealistic.cone import (
    directrix,
    directrix_coordinates,
    generation_holds,
    reduced_ridge_equals_directrix,
    ridge,
    tangent_cone_pair,
)
from idealistic.exceptions import NotInSingularLocusError
from idealistic.field import FunctionField, PrimeField, Rationals, lam
from idealistic.pair import Pair
from idealistic.poly import Ring


def _chart_forms(cone, forms) -> set:
    return {cone.to_chart(f) for f in forms}


def test_tangent_cone_keeps_initial_form() -> None:
    ring = Ring(Rationals(), ("x", "y", "z"))
    x, y, z = ring.gens()
    cone = tangent_cone_pair(Pair.single([x**3 - y**3 * z**2], 3))
    assert _chart_forms(cone, cone.generators) == {x**3}
    assert cone.best_effort
    assert cone.ring.variables == ("X", "Y", "Z")


def test_tangent_cone_with_standard_basis_is_not_best_effort() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, y = ring.gens()
    cone = tangent_cone_pair(Pair.single([x**2 + y**3], 2, standard_basis=True))
    assert _chart_forms(cone, cone.generators) == {x**2}
    assert not cone.best_effort


def test_tangent_cone_drops_component_above_its_weight() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, _ = ring.gens()
    cone = tangent_cone_pair(Pair.single([x**3], 2))
    assert cone.components == ()
    assert directrix(cone).forms == ()


def test_tangent_cone_outside_singular_locus_raises() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    with pytest.raises(NotInSingularLocusError):
        tangent_cone_pair(Pair.single([ring.var("x")], 2))


def test_directrix_of_quadric_in_characteristic_zero() -> None:
    ring = Ring(Rationals(), ("x", "y", "z"))
    x, y, _ = ring.gens()
    cone = tangent_cone_pair(Pair.single([x**2 + y**2], 2, standard_basis=True))
    assert ridge(cone).degrees == (1, 1)
    assert _chart_forms(cone, directrix(cone).forms) == {x, y}


def test_ridge_of_square_in_characteristic_two() -> None:
    ring = Ring(PrimeField(2), ("x", "y"))
    x, _ = ring.gens()
    cone = tangent_cone_pair(Pair.single([x**2], 2, standard_basis=True))
    presentation = ridge(cone)
    assert presentation.degrees == (2,)
    d = directrix(cone, presentation)
    assert _chart_forms(cone, d.forms) == {x}
    assert reduced_ridge_equals_directrix(presentation, d)


def test_ridge_over_imperfect_field_is_larger_than_reduced() -> None:
    field = FunctionField(2)
    ring = Ring(field, ("x", "y"))
    x, y = ring.gens()
    cone = tangent_cone_pair(Pair.single([x**2 + y**2 * lam(field)], 2, standard_basis=True))
    presentation = ridge(cone)
    assert presentation.degrees == (2,)
    d = directrix(cone, presentation)
    assert _chart_forms(cone, d.forms) == {x, y}
    assert not reduced_ridge_equals_directrix(presentation, d)


def test_directrix_coordinates_turn_forms_into_variables() -> None:
    ring = Ring(Rationals(), ("x", "y", "z"))
    x, y, _ = ring.gens()
    f = (x + y) ** 2
    cone = tangent_cone_pair(Pair.single([f], 2, standard_basis=True))
    change = directrix_coordinates(directrix(cone))
    assert change.new_ring.variables == ("w", "y", "z")
    assert change.forward(f) == change.new_ring.var("w") ** 2
    assert change.backward(change.forward(f)) == f


def test_directrix_coordinates_identity_for_coordinate_forms() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, _ = ring.gens()
    cone = tangent_cone_pair(Pair.single([x**2], 2, standard_basis=True))
    change = directrix_coordinates(directrix(cone))
    assert change.is_identity
    assert str(change) == "identity"


def _running_example(p: int) -> tuple[Pair, tuple]:
    ring = Ring(PrimeField(p), ("x", "y", "z", "t", "u", "v"))
    x, y, z, t, u, v = ring.gens()
    q = p * p
    pair = Pair.single(
        [
            x * y**q - x * t**3 * u**q,
            z ** (q - p + 1) * (t + u) ** p - v ** (p * q),
            t ** (q + 2) - u ** (q + 1) * v,
        ],
        q + 1,
        standard_basis=True,
    )
    return pair, ring.gens()


@pytest.mark.parametrize("p", [2, 3])
def test_running_example_ridge_and_directrix(p) -> None:
    pair, (x, y, z, t, u, _) = _running_example(p)
    cone = tangent_cone_pair(pair)
    presentation = ridge(cone)
    # X, Z, T^p + U^p, Y^(p^2)
    assert presentation.degrees == (1, 1, p, p * p)
    d = directrix(cone, presentation)
    assert _chart_forms(cone, d.forms) == {x, y, z, t + u}
    assert reduced_ridge_equals_directrix(presentation, d)


def _imperfect_example(p: int) -> tuple[Pair, tuple]:
    field = FunctionField(p)
    ring = Ring(field, ("x", "y", "z", "t", "u", "v"))
    x, y, z, t, u, v = ring.gens()
    q = p * p
    s = x**p + y**p * lam(field)
    pair = Pair.single(
        [
            s * z ** (q - p) + t * u * v**q,
            z**q + u**q + s**p * lam(field) + v ** (q + 1),
        ],
        q,
        standard_basis=True,
    )
    return pair, ring.gens()


@pytest.mark.parametrize("p", [2, 3])
def test_running_example_over_imperfect_field(p) -> None:
    pair, (x, y, z, _, u, _) = _imperfect_example(p)
    cone = tangent_cone_pair(pair)
    presentation = ridge(cone)
    # X^p + lam Y^p, Z^p, U^(p^2)
    assert presentation.degrees == (p, p, p * p)
    d = directrix(cone, presentation)
    assert _chart_forms(cone, d.forms) == {x, y, z, u}
    assert not reduced_ridge_equals_directrix(presentation, d)


@pytest.mark.parametrize(
    "example, p",
    [
        (_running_example, 2),
        (_running_example, 3),
        (_imperfect_example, 2),
        (_imperfect_example, 3),
    ],
)
def test_ridge_generators_are_all_needed(example, p) -> None:
    pair, _ = example(p)
    cone = tangent_cone_pair(pair)
    generators = ridge(cone).generators
    assert generation_holds(cone, generators)
    for dropped in range(len(generators)):
        rest = generators[:dropped] + generators[dropped + 1 :]
        assert not generation_holds(cone, rest), f"{generators[dropped]} is redundant"
