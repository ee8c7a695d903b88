"""Charts, boundary divisors and permissible blowups with coordinate centers."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum

from .exceptions import (
    BoundaryPermissibilityError,
    NonCoordinateCenterError,
    NotPermissibleError,
)
from .gb import buchberger
from .pair import Component, Pair, power_generators, singular_locus_ideal
from .poly import Polynomial, Ring, substitute

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryDivisor:
    """Boundary hypersurface V(equation) with its old/new flag."""

    equation: Polynomial
    new: bool = False
    birth: int = 0

    @property
    def variable(self) -> str | None:
        """The coordinate cutting out the divisor, or ``None`` if not coordinate."""
        if not self.equation.is_monomial:
            return None
        (exponent,) = self.equation.terms
        if sum(exponent) != 1:
            return None
        return self.equation.ring.variables[exponent.index(1)]

    def __str__(self) -> str:
        return f"V({self.equation}) {'new' if self.new else 'old'}"


@dataclass(frozen=True)
class Substitution:
    """One logged coordinate change: old variable -> polynomial in new ones."""

    kind: str
    mapping: tuple[tuple[str, Polynomial], ...]

    def as_dict(self) -> dict[str, Polynomial]:
        return dict(self.mapping)

    def __str__(self) -> str:
        return ", ".join(f"{name} -> {image}" for name, image in self.mapping)


@dataclass(frozen=True)
class BlowupStep:
    center: tuple[str, ...]
    chart_variable: str


@dataclass(frozen=True)
class Chart:
    """Affine chart: coordinates, change log, boundary and blowup history."""

    ring: Ring
    coordinate_changes: tuple[Substitution, ...] = ()
    boundary: tuple[BoundaryDivisor, ...] = ()
    history: tuple[BlowupStep, ...] = ()

    @classmethod
    def root(cls, ring: Ring, boundary: Sequence[BoundaryDivisor] = ()) -> Chart:
        return cls(ring, boundary=tuple(boundary))

    def boundary_variables(self, new_only: bool = False) -> tuple[str, ...]:
        names = []
        for divisor in self.boundary:
            if new_only and not divisor.new:
                continue
            if divisor.variable is not None:
                names.append(divisor.variable)
        return tuple(names)


class Permissibility(StrEnum):
    YES = "true"
    NO = "false"
    UNDECIDABLE = "undecidable"


def b_permissible(chart: Chart, center: Sequence[str]) -> Permissibility:
    """Check simple normal crossings of a coordinate center with the boundary.

    With every divisor a coordinate hyperplane, the center together with any
    subfamily of the boundary is cut out by distinct coordinates, so the check
    only fails on repeated divisors. Non-coordinate divisors are undecidable.
    """
    chart.ring.indices(center)
    variables = []
    for divisor in chart.boundary:
        if divisor.variable is None:
            return Permissibility.UNDECIDABLE
        variables.append(divisor.variable)
    if len(set(variables)) != len(variables):
        return Permissibility.NO
    return Permissibility.YES


def old_new_update(chart: Chart, invariant_dropped: bool) -> Chart:
    """Declare every boundary divisor old once the invariant has dropped."""
    if not invariant_dropped or not chart.boundary:
        return chart
    boundary = tuple(
        BoundaryDivisor(d.equation, new=False, birth=d.birth) for d in chart.boundary
    )
    return Chart(chart.ring, chart.coordinate_changes, boundary, chart.history)


def coordinate_change(chart: Chart, mapping: Mapping[str, Polynomial]) -> Chart:
    """Apply a coordinate change to the chart's boundary and log it."""
    boundary = tuple(
        BoundaryDivisor(substitute(d.equation, mapping), d.new, d.birth)
        for d in chart.boundary
    )
    entry = Substitution("coordinate-change", tuple(mapping.items()))
    return Chart(chart.ring, (*chart.coordinate_changes, entry), boundary, chart.history)


def _check_center(ring: Ring, center: Sequence[str], chart_variable: str) -> None:
    if not center:
        raise NonCoordinateCenterError(tuple(center), "center needs at least one variable")
    if len(set(center)) != len(center):
        raise NonCoordinateCenterError(tuple(center), "repeated variable")
    for name in center:
        if name not in ring.variables:
            raise NonCoordinateCenterError(tuple(center), f"'{name}' is not a chart coordinate")
    if chart_variable not in center:
        raise NonCoordinateCenterError(
            tuple(center), f"chart variable '{chart_variable}' is not in the center"
        )


def blowup_map(ring: Ring, center: Sequence[str], chart_variable: str) -> dict[str, Polynomial]:
    """The chart substitution w -> v*w for w in the center other than v."""
    v = ring.var(chart_variable)
    return {w: v * ring.var(w) for w in center if w != chart_variable}


def divide_by_power(f: Polynomial, variable: str, power: int) -> Polynomial:
    index = f.ring.index(variable)
    terms = {}
    for e, c in f.terms.items():
        if e[index] < power:
            raise ValueError(f"{f} is not divisible by {variable}^{power}")
        shifted = list(e)
        shifted[index] -= power
        terms[tuple(shifted)] = c
    return Polynomial(f.ring, terms)


def exceptional_order(f: Polynomial, variable: str) -> int:
    index = f.ring.index(variable)
    return min((e[index] for e in f.terms), default=0)


def strict_transform(
    generators: Sequence[Polynomial], center: Sequence[str], chart_variable: str
) -> tuple[Polynomial, ...]:
    """Substitute the chart map and divide each generator by its full v-power."""
    if not generators:
        return ()
    ring = generators[0].ring
    mapping = blowup_map(ring, center, chart_variable)
    result = []
    for g in generators:
        total = substitute(g, mapping)
        result.append(divide_by_power(total, chart_variable, exceptional_order(total, chart_variable)))
    return tuple(result)


@dataclass(frozen=True)
class ComponentTransforms:
    """Total, pair and (for standard bases) strict transforms of one component."""

    total: tuple[Polynomial, ...]
    pair: Component
    strict: tuple[Polynomial, ...] | None

    def regenerates_total(self, variable: str) -> bool:
        """Check that v^b times the pair transform gives back the total transform."""
        factor = self.pair.ring.var(variable) ** int(self.pair.weight)
        return all(
            total == pair * factor for total, pair in zip(self.total, self.pair.generators)
        ) and len(self.total) == len(self.pair.generators)


@dataclass(frozen=True)
class BlowupResult:
    chart: Chart
    pair: Pair
    transforms: tuple[ComponentTransforms, ...]


def _integral(component: Component) -> Component:
    if component.is_integral:
        return component
    scale = component.weight.denominator
    return Component(
        power_generators(component.generators, scale), component.weight * scale
    )


def _updated_boundary(chart: Chart, chart_variable: str) -> tuple[BoundaryDivisor, ...]:
    """Coordinate divisors other than V(chart_variable) keep their equation in the new chart."""
    kept = tuple(d for d in chart.boundary if d.variable != chart_variable)
    exceptional = BoundaryDivisor(
        chart.ring.var(chart_variable), new=True, birth=len(chart.history) + 1
    )
    return (*kept, exceptional)


def blowup(
    chart: Chart, pair: Pair, center: Sequence[str], chart_variable: str
) -> BlowupResult:
    """Blow up the coordinate center V(center) and pass to the given chart.

    Components with non-integral weight are first raised to an integral
    weight. The pair transform divides each total transform by v^b.

    Raises:
        NonCoordinateCenterError: If the center is not a set of chart coordinates
            containing the chart variable.
        NotPermissibleError: If some component has order below its weight along
            the center.
        BoundaryPermissibilityError: If the boundary check does not pass.
    """
    center = tuple(center)
    _check_center(chart.ring, center, chart_variable)
    for index, component in enumerate(pair.components):
        if component.order_along(center) < component.weight:
            raise NotPermissibleError(center, index)
    status = b_permissible(chart, center)
    if status is not Permissibility.YES:
        raise BoundaryPermissibilityError(center, status.value)

    mapping = blowup_map(chart.ring, center, chart_variable)
    transforms = []
    for component in pair.components:
        component = _integral(component)
        weight = int(component.weight)
        total = tuple(substitute(g, mapping) for g in component.generators)
        pair_generators = tuple(divide_by_power(g, chart_variable, weight) for g in total)
        strict = None
        if component.standard_basis:
            strict = tuple(
                divide_by_power(g, chart_variable, exceptional_order(g, chart_variable))
                for g in total
            )
        transforms.append(
            ComponentTransforms(
                total=total,
                pair=Component(pair_generators, component.weight, component.standard_basis),
                strict=strict,
            )
        )
    new_chart = Chart(
        chart.ring,
        (*chart.coordinate_changes, Substitution("blowup", tuple(mapping.items()))),
        _updated_boundary(chart, chart_variable),
        (*chart.history, BlowupStep(center, chart_variable)),
    )
    logger.debug("Blew up V(%s) in the %s-chart", ", ".join(center), chart_variable)
    return BlowupResult(
        new_chart, Pair(pair.ring, tuple(t.pair for t in transforms)), tuple(transforms)
    )


def is_resolved(pair: Pair) -> bool:
    """Decide Sing(E) = empty by checking the singular-locus ideal is the unit ideal."""
    if pair.is_empty:
        return False
    locus = singular_locus_ideal(pair)
    return buchberger(locus.generators, pair.ring).is_unit

