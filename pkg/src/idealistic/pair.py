"""Pairs (J, b), their intersections, orders and singular loci."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Any

from .exceptions import EmptyComponentError, InvalidWeightError, RingMismatchError
from .poly import (
    INFINITY,
    Order,
    Polynomial,
    Ring,
    hasse_derivative,
    order_along_subspace,
    translate,
)


def _dedupe(polys: Iterable[Polynomial]) -> tuple[Polynomial, ...]:
    seen: dict[Polynomial, None] = {}
    for f in polys:
        if not f.is_zero:
            seen.setdefault(f, None)
    return tuple(seen)


@dataclass(frozen=True)
class Component:
    """One marked ideal (J, b) given by generators and a positive weight.

    ``standard_basis`` declares that the generators form a standard basis, which
    enables initial forms and strict transforms generator by generator.
    """

    generators: tuple[Polynomial, ...]
    weight: Fraction
    standard_basis: bool = False

    def __post_init__(self) -> None:
        weight = Fraction(self.weight)
        if weight <= 0:
            raise InvalidWeightError(weight)
        object.__setattr__(self, "weight", weight)
        generators = tuple(g for g in self.generators if not g.is_zero)
        if not generators:
            raise EmptyComponentError(weight)
        rings = {g.ring for g in generators}
        if len(rings) > 1:
            first, second = list(rings)[:2]
            raise RingMismatchError(str(first), str(second))
        object.__setattr__(self, "generators", generators)

    @property
    def ring(self) -> Ring:
        return self.generators[0].ring

    @property
    def is_integral(self) -> bool:
        return self.weight.denominator == 1

    def order_along(self, subspace: Sequence[str]) -> Order:
        return min(order_along_subspace(g, subspace) for g in self.generators)

    def order_at_origin(self) -> Order:
        return self.order_along(self.ring.variables)

    def with_generators(self, generators: Iterable[Polynomial]) -> Component:
        return Component(tuple(generators), self.weight, self.standard_basis)

    def __str__(self) -> str:
        marker = "sb " if self.standard_basis else ""
        generators = ", ".join(str(g) for g in self.generators)
        return f"{marker}({generators} : {self.weight})"


@dataclass(frozen=True)
class Pair:
    """Intersection of marked ideals, kept as a list of components.

    The empty pair imposes no condition; its order is infinite everywhere.
    """

    ring: Ring
    components: tuple[Component, ...] = ()

    def __post_init__(self) -> None:
        for component in self.components:
            if component.ring != self.ring:
                raise RingMismatchError(str(component.ring), str(self.ring))

    @classmethod
    def single(
        cls,
        generators: Sequence[Polynomial],
        weight: Fraction | int,
        standard_basis: bool = False,
    ) -> Pair:
        component = Component(tuple(generators), Fraction(weight), standard_basis)
        return cls(component.ring, (component,))

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(c.weight for c in self.components)

    def generators(self) -> tuple[Polynomial, ...]:
        return tuple(g for c in self.components for g in c.generators)

    def replace(self, index: int, component: Component) -> Pair:
        components = list(self.components)
        components[index] = component
        return Pair(self.ring, tuple(components))

    def __str__(self) -> str:
        if not self.components:
            return "()"
        return " & ".join(str(c) for c in self.components)


@dataclass(frozen=True)
class PointSpec:
    """A coordinate-subspace prime <S> or a rational point of affine space."""

    subspace: tuple[str, ...] | None = None
    point: tuple[Any, ...] | None = None

    def __post_init__(self) -> None:
        if (self.subspace is None) == (self.point is None):
            raise ValueError("PointSpec needs exactly one of subspace or point")
        if self.subspace is not None and not self.subspace:
            raise ValueError("Coordinate subspace must be nonempty")

    @classmethod
    def origin(cls, ring: Ring) -> PointSpec:
        return cls(subspace=ring.variables)

    @classmethod
    def coordinate(cls, names: Iterable[str]) -> PointSpec:
        return cls(subspace=tuple(names))

    @classmethod
    def rational(cls, values: Iterable[Any]) -> PointSpec:
        return cls(point=tuple(values))

    def __str__(self) -> str:
        if self.subspace is not None:
            return f"<{', '.join(self.subspace)}>"
        return f"({', '.join(str(v) for v in self.point or ())})"


def intersect(first: Pair, second: Pair) -> Pair:
    """Return the lazy intersection: the two component lists concatenated.

    Raises:
        RingMismatchError: If the pairs live in different rings.
    """
    if first.ring != second.ring:
        raise RingMismatchError(str(first.ring), str(second.ring))
    return Pair(first.ring, first.components + second.components)


def power_generators(generators: Sequence[Polynomial], exponent: int) -> tuple[Polynomial, ...]:
    """Generators of J^a: all products of ``exponent`` generators."""
    if exponent == 1:
        return tuple(generators)
    products = []
    for combination in combinations_with_replacement(range(len(generators)), exponent):
        value = generators[combination[0]]
        for index in combination[1:]:
            value = value * generators[index]
        products.append(value)
    return _dedupe(products)


def common_weight(weights: Iterable[Fraction]) -> Fraction:
    """Smallest positive c with c / b integral for every weight b."""
    weights = [Fraction(w) for w in weights]
    numerator = math.lcm(*(w.numerator for w in weights))
    denominator = math.gcd(*(w.denominator for w in weights))
    return Fraction(numerator, denominator)


def flatten(pair: Pair) -> Pair:
    """Merge all components into one: (sum J_i^(c/b_i), c), c the common weight."""
    if len(pair.components) <= 1:
        return pair
    c = common_weight(pair.weights)
    generators: list[Polynomial] = []
    for component in pair.components:
        exponent = int(c / component.weight)
        generators.extend(power_generators(component.generators, exponent))
    return Pair.single(_dedupe(generators), c)


def _component_ratio(component: Component, point: PointSpec) -> Fraction | float:
    if point.subspace is not None:
        order = component.order_along(point.subspace)
    else:
        shifted = [translate(g, point.point or ()) for g in component.generators]
        order = min(order_along_subspace(g, component.ring.variables) for g in shifted)
    if order == INFINITY:
        return INFINITY
    ratio = Fraction(order) / component.weight
    return ratio if ratio >= 1 else Fraction(0)


def ord_at(pair: Pair, point: PointSpec) -> Fraction | float:
    """Return ord_x(E): per component ord_P(J)/b when at least one, else zero.

    The value of an intersection is the minimum over its components; the empty
    pair has infinite order.
    """
    return min((_component_ratio(c, point) for c in pair.components), default=INFINITY)


def in_singular_locus_at_origin(pair: Pair) -> bool:
    return all(c.order_at_origin() >= c.weight for c in pair.components)


def _derivative_indices(f: Polynomial, bound: int) -> set[tuple[int, ...]]:
    indices: set[tuple[int, ...]] = set()
    for exponent in f.terms:
        for index in product(*(range(e + 1) for e in exponent)):
            if sum(index) <= bound:
                indices.add(index)
    return indices


@dataclass(frozen=True)
class SingularLocus:
    """Generators cutting out Sing(E) by the differential criterion.

    ``exact`` is false over imperfect fields, where the zero set is only an
    upper bound for the singular locus.
    """

    ring: Ring
    generators: tuple[Polynomial, ...]
    exact: bool


def singular_locus_ideal(pair: Pair) -> SingularLocus:
    """Collect D_N(g) for every generator g and |N| <= ceil(b) - 1."""
    generators: list[Polynomial] = []
    for component in pair.components:
        bound = math.ceil(component.weight) - 1
        for g in component.generators:
            for index in sorted(_derivative_indices(g, bound)):
                generators.append(hasse_derivative(g, index))
    return SingularLocus(pair.ring, _dedupe(generators), pair.ring.field.is_perfect)
