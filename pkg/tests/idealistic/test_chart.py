import pytest

from idealistic.chart import (
    BoundaryDivisor,
    Chart,
    Permissibility,
    b_permissible,
    blowup,
    coordinate_change,
    is_resolved,
    old_new_update,
    strict_transform,
)
from idealistic.exceptions import (
    BoundaryPermissibilityError,
    NonCoordinateCenterError,
    NotPermissibleError,
)
from idealistic.field import Rationals
from idealistic.pair import Pair, PointSpec, ord_at
from idealistic.poly import Ring


def _xyz() -> Ring:
    return Ring(Rationals(), ("x", "y", "z"))


def _cusp_pair(weight: int) -> Pair:
    x, y, z = _xyz().gens()
    return Pair.single([x**3 - y**3 * z**2], weight)


def test_transform_with_weight_two_keeps_one_exceptional_factor() -> None:
    ring = _xyz()
    x, y, z = ring.gens()
    result = blowup(Chart.root(ring), _cusp_pair(2), ("x", "y"), "y")
    assert result.pair == Pair.single([y * (x**3 - z**2)], 2)
    assert result.transforms[0].regenerates_total("y")


def test_transform_with_weight_three_is_resolved() -> None:
    ring = _xyz()
    x, y, z = ring.gens()
    result = blowup(Chart.root(ring), _cusp_pair(3), ("x", "y"), "y")
    assert result.pair == Pair.single([x**3 - z**2], 3)
    assert is_resolved(result.pair)


def test_order_does_not_increase_under_the_blowup() -> None:
    ring = _xyz()
    pair = _cusp_pair(2)
    result = blowup(Chart.root(ring), pair, ("x", "y"), "y")
    origin = PointSpec.origin(ring)
    assert ord_at(result.pair, origin) <= ord_at(pair, origin)


def test_blowup_records_new_exceptional_divisor() -> None:
    ring = _xyz()
    chart = blowup(Chart.root(ring), _cusp_pair(2), ("x", "y"), "y").chart
    assert chart.boundary == (BoundaryDivisor(ring.var("y"), new=True, birth=1),)
    assert chart.boundary_variables(new_only=True) == ("y",)
    assert len(chart.history) == 1


def test_later_blowups_keep_or_replace_earlier_divisors() -> None:
    ring = _xyz()
    x, y, z = ring.gens()
    first = blowup(Chart.root(ring), Pair.single([x * y * z], 1), ("x", "y"), "y")
    second = blowup(first.chart, first.pair, ("y", "z"), "z")
    assert second.chart.boundary == (
        BoundaryDivisor(y, new=True, birth=1),
        BoundaryDivisor(z, new=True, birth=2),
    )
    # same chart variable: V(y) is the new exceptional divisor
    third = blowup(second.chart, second.pair, ("x", "y"), "y")
    assert third.chart.boundary == (
        BoundaryDivisor(z, new=True, birth=2),
        BoundaryDivisor(y, new=True, birth=3),
    )


def test_blowup_of_hyperplane_resolves() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    result = blowup(Chart.root(ring), Pair.single([ring.var("x")], 1), ("x", "y"), "x")
    assert result.pair == Pair.single([ring.one()], 1)
    assert is_resolved(result.pair)


def test_blowup_rejects_center_outside_singular_locus() -> None:
    with pytest.raises(NotPermissibleError):
        blowup(Chart.root(_xyz()), _cusp_pair(3), ("x", "z"), "x")


@pytest.mark.parametrize(
    "center, chart_variable",
    [
        # chart variable outside the center
        (("x", "y"), "z"),
        # unknown coordinate
        (("x", "w"), "x"),
        # empty center
        ((), "x"),
    ],
)
def test_blowup_rejects_non_coordinate_center(center, chart_variable) -> None:
    with pytest.raises(NonCoordinateCenterError):
        blowup(Chart.root(_xyz()), _cusp_pair(2), center, chart_variable)


def test_b_permissible_with_coordinate_boundary() -> None:
    ring = _xyz()
    chart = Chart.root(ring, [BoundaryDivisor(ring.var("z"))])
    assert b_permissible(chart, ("x", "y")) is Permissibility.YES
    assert b_permissible(chart, ("x", "z")) is Permissibility.YES


def test_b_permissible_with_curved_boundary_is_undecidable() -> None:
    ring = _xyz()
    y, z = ring.var("y"), ring.var("z")
    chart = Chart.root(ring, [BoundaryDivisor(y + z**2)])
    assert b_permissible(chart, ("x", "y")) is Permissibility.UNDECIDABLE
    with pytest.raises(BoundaryPermissibilityError):
        blowup(chart, _cusp_pair(2), ("x", "y"), "y")


def test_old_new_update() -> None:
    ring = _xyz()
    chart = Chart.root(ring, [BoundaryDivisor(ring.var("y"), new=True, birth=1)])
    assert old_new_update(chart, invariant_dropped=True).boundary_variables(new_only=True) == ()
    assert old_new_update(chart, invariant_dropped=False) == chart
    fresh = Chart.root(ring)
    assert old_new_update(fresh, invariant_dropped=True) == fresh


def test_strict_transform_divides_full_power() -> None:
    ring = Ring(Rationals(), ("x", "y"))
    x, y = ring.gens()
    assert strict_transform([x**2 - y**3], ("x", "y"), "y") == (x**2 - y,)


def test_coordinate_change_logs_substitution() -> None:
    ring = _xyz()
    x, y, z = ring.gens()
    chart = coordinate_change(Chart.root(ring, [BoundaryDivisor(x)]), {"x": x + y})
    assert chart.boundary[0].equation == x + y
    assert chart.coordinate_changes[-1].kind == "coordinate-change"
