from fractions import Fraction

import pytest

from idealistic.exceptions import EmptyComponentError, InvalidWeightError, RingMismatchError
from idealistic.field import FunctionField, PrimeField, Rationals
from idealistic.gb import radical_contains
from idealistic.pair import (
    Component,
    Pair,
    PointSpec,
    flatten,
    intersect,
    ord_at,
    singular_locus_ideal,
)
from idealistic.poly import INFINITY, Ring


def _xyz(field=None) -> Ring:
    return Ring(field or Rationals(), ("x", "y", "z"))


def test_flatten_uses_common_weight() -> None:
    ring = _xyz()
    x, y, _ = ring.gens()
    pair = intersect(Pair.single([x], 2), Pair.single([y], 3))
    flat = flatten(pair)
    assert flat.weights == (Fraction(6),)
    assert set(flat.components[0].generators) == {x**3, y**2}


def test_flatten_of_equal_components_is_the_component() -> None:
    ring = _xyz()
    x = ring.var("x")
    flat = flatten(intersect(Pair.single([x], 2), Pair.single([x], 2)))
    assert flat == Pair.single([x], 2)


@pytest.mark.parametrize(
    "weight, point, expected",
    [
        # at the origin: 3/2
        (2, None, Fraction(3, 2)),
        # V(x, z) is permissible for (J, 2)
        (2, ("x", "z"), Fraction(1)),
        # but not for (J, 3): the ratio 2/3 is below one
        (3, ("x", "z"), Fraction(0)),
        # V(x, y) is permissible for (J, 3)
        (3, ("x", "y"), Fraction(1)),
    ],
)
def test_ord_at(weight, point, expected) -> None:
    ring = _xyz()
    x, y, z = ring.gens()
    pair = Pair.single([x**3 - y**3 * z**2], weight)
    spec = PointSpec.origin(ring) if point is None else PointSpec.coordinate(point)
    assert ord_at(pair, spec) == expected


def test_ord_at_rational_point() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, y = ring.gens()
    pair = Pair.single([(x - 1) ** 2 + y**3], 2)
    assert ord_at(pair, PointSpec.rational((1, 0))) == 1
    assert ord_at(pair, PointSpec.origin(ring)) == 0


def test_ord_at_empty_pair_is_infinite() -> None:
    assert ord_at(Pair(_xyz()), PointSpec.origin(_xyz())) == INFINITY


def test_point_spec_needs_exactly_one_description() -> None:
    with pytest.raises(ValueError):
        PointSpec()


def test_singular_locus_of_hyperplane() -> None:
    ring = _xyz()
    x = ring.var("x")
    assert singular_locus_ideal(Pair.single([x], 1)).generators == (x,)


def test_singular_locus_has_radical_x_y() -> None:
    ring = _xyz()
    x, y, z = ring.gens()
    locus = singular_locus_ideal(Pair.single([x**3 - y**3 * z**2], 3))
    assert all(radical_contains(locus.generators, v) for v in (x, y))
    assert not radical_contains(locus.generators, z)
    assert locus.exact


def test_singular_locus_of_p_power_sum() -> None:
    ring = _xyz(PrimeField(2))
    x, y, z = ring.gens()
    locus = singular_locus_ideal(Pair.single([x**2 + z * y**2], 2))
    assert radical_contains(locus.generators, x)
    assert radical_contains(locus.generators, y)
    assert not radical_contains(locus.generators, z)


def test_singular_locus_over_imperfect_field_is_not_exact() -> None:
    ring = _xyz(FunctionField(2))
    x = ring.var("x")
    assert not singular_locus_ideal(Pair.single([x**2], 2)).exact


@pytest.mark.parametrize(
    "weight",
    [
        # zero
        0,
        # negative
        -1,
    ],
)
def test_component_rejects_non_positive_weight(weight) -> None:
    ring = _xyz()
    with pytest.raises(InvalidWeightError):
        Component((ring.var("x"),), weight)


def test_component_rejects_zero_ideal() -> None:
    with pytest.raises(EmptyComponentError):
        Component((_xyz().zero(),), 1)


def test_intersect_rejects_other_ring() -> None:
    first = Pair.single([_xyz().var("x")], 1)
    second = Pair.single([Ring(Rationals(), ("x", "w")).var("x")], 1)
    with pytest.raises(RingMismatchError):
        intersect(first, second)
