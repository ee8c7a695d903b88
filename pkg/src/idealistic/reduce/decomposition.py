"""Ridge decomposition E ~ G & D+ by Hasse derivatives of the generators."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..cone import (
    CoordinateChange,
    RidgePresentation,
    TangentConePair,
    directrix,
    directrix_coordinates,
    ridge,
    sigma_expansion,
    tangent_cone_pair,
)
from ..exceptions import DecompositionError, MoveRefusedError
from ..pair import Component, Pair, in_singular_locus_at_origin
from ..poly import Polynomial, initial_form
from .moves import CertificateBuilder, Diff, Eliminate, MoveCertificate, Normalize, SumSameWeight

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Resolved:
    """Marker for a pair whose singular locus misses the origin."""

    pair: Pair

    def __str__(self) -> str:
        return "resolved"


@dataclass(frozen=True)
class Decomposition:
    """E ~ (g_1, q_1) & ... & (g_s, q_s) & D+ with in(g_i, q_i) = sigma_i.

    ``lifts`` and ``residual`` are in the coordinates of the source pair; the
    certificate and the ridge live in the directrix coordinates of
    ``coordinates``.
    """

    source: Pair
    coordinates: CoordinateChange
    ridge: RidgePresentation
    lifts: tuple[Component, ...]
    residual: Pair
    certificate: MoveCertificate

    @property
    def generators(self) -> Pair:
        return Pair(self.source.ring, self.lifts)

    def grouped(self) -> Pair:
        """Merge lifts of equal weight, as in (<g_1, g_2>, 1) & (g_3, p)."""
        builder = CertificateBuilder(self.generators)
        index = 0
        while index < len(builder.pair.components):
            weight = builder.pair.components[index].weight
            later = next(
                (
                    j
                    for j in range(index + 1, len(builder.pair.components))
                    if builder.pair.components[j].weight == weight
                ),
                None,
            )
            if later is None:
                index += 1
            else:
                builder.apply(SumSameWeight(index, later))
        return builder.pair

    def as_pair(self) -> Pair:
        return Pair(self.source.ring, self.lifts + self.residual.components)


def _cone_form(cone: TangentConePair, f: Polynomial, weight: Fraction) -> Polynomial:
    return cone.to_cone(initial_form(f, weight))


def _choose_term(
    pair: Pair, cone: TangentConePair, presentation: RidgePresentation, i: int, count: int
) -> tuple[int, int, tuple[int, ...], Any]:
    """Pick (component, generator, exponent E, coefficient) with E_i coprime to p and maximal."""
    p = pair.ring.field.characteristic
    best: tuple[int, int, tuple[int, ...], Any] | None = None
    for c, component in enumerate(pair.components[:count]):
        if not component.is_integral or component.order_at_origin() != component.weight:
            continue
        for k, f in enumerate(component.generators):
            expansion = sigma_expansion(
                _cone_form(cone, f, component.weight), presentation.generators
            )
            if expansion is None:
                raise DecompositionError(f"initial form of {f} is not a polynomial in the ridge")
            for exponent in sorted(expansion):
                d = exponent[i]
                if d < 1 or (p and d % p == 0):
                    continue
                if best is None or d > best[2][i]:
                    best = (c, k, exponent, expansion[exponent])
    if best is None:
        raise DecompositionError(f"no generator reaches {presentation.generators[i]}")
    return best


def _eliminate_terms(
    expansion: dict[tuple[int, ...], Any], lifted: dict[int, int]
) -> tuple[tuple[Any, tuple[tuple[int, int], ...]], ...]:
    terms = []
    for exponent, coefficient in sorted(expansion.items()):
        factors = []
        for j, power in enumerate(exponent):
            if not power:
                continue
            if j not in lifted:
                raise DecompositionError(f"ridge generator {j + 1} is not lifted yet")
            factors.append((lifted[j], power))
        terms.append((coefficient, tuple(factors)))
    return tuple(terms)


def _lift(
    builder: CertificateBuilder,
    cone: TangentConePair,
    presentation: RidgePresentation,
    i: int,
    count: int,
    lifted: dict[int, int],
) -> None:
    sigma = presentation.generators[i]
    ring = builder.pair.ring
    field = ring.field
    c, k, exponent, _ = _choose_term(builder.pair, cone, presentation, i, count)
    multi_index = [0] * ring.nvars
    for j, (other, power) in enumerate(zip(presentation.generators, exponent)):
        pivot = ring.index(cone.chart_name(other.pivot))
        multi_index[pivot] += other.degree * (power - 1 if j == i else power)
    try:
        builder.apply(Diff(c, tuple(multi_index), (k,)))
    except MoveRefusedError as exc:
        raise DecompositionError(f"derivative for {sigma} failed: {exc}") from exc
    index = len(builder.pair.components) - 1
    g = builder.pair.components[index].generators[0]
    expansion = sigma_expansion(_cone_form(cone, g, Fraction(sigma.degree)), presentation.generators)
    unit = tuple(1 if j == i else 0 for j in range(len(presentation.generators)))
    if expansion is None or field.is_zero(expansion.get(unit, field.zero)):
        raise DecompositionError(f"derivative of generator {k} does not lift {sigma}")
    scale = field.inv(expansion[unit])
    builder.apply(Normalize(index, (scale,)))
    rest = {e: field.mul(v, scale) for e, v in expansion.items() if e != unit}
    if rest:
        builder.apply(Eliminate(index, 0, _eliminate_terms(rest, lifted)))
    lifted[i] = index
    logger.debug("Lifted %s by D_%s on generator %d of component %d", sigma, multi_index, k, c)


def _clean_residual(
    builder: CertificateBuilder,
    cone: TangentConePair,
    presentation: RidgePresentation,
    count: int,
    lifted: dict[int, int],
) -> None:
    for c in reversed(range(count)):
        component = builder.pair.components[c]
        if not component.is_integral or component.order_at_origin() != component.weight:
            continue
        for k in reversed(range(len(component.generators))):
            f = builder.pair.components[c].generators[k]
            form = _cone_form(cone, f, component.weight)
            if form.is_zero:
                continue
            expansion = sigma_expansion(form, presentation.generators)
            if expansion is None:
                raise DecompositionError(f"initial form of {f} is not a polynomial in the ridge")
            before = len(builder.pair.components)
            builder.apply(Eliminate(c, k, _eliminate_terms(expansion, lifted)))
            if len(builder.pair.components) < before:
                for j, index in lifted.items():
                    if index > c:
                        lifted[j] = index - 1
                break
    field = builder.pair.ring.field
    for c in range(len(builder.pair.components)):
        if c in lifted.values():
            continue
        component = builder.pair.components[c]
        factors = tuple(field.inv(g.leading_term()[1]) for g in component.generators)
        if any(f != field.one for f in factors):
            builder.apply(Normalize(c, factors))


def ridge_decomposition(pair: Pair) -> Decomposition | Resolved:
    """Split off the ridge: E ~ (g_1, q_1) & ... & (g_s, q_s) & D+.

    Each g_i is a Hasse derivative of a generator, scaled and cleaned so that
    in(g_i, q_i) = sigma_i; the residual D+ is what remains of the original
    generators after subtracting products of the g_i, and has order above its
    weight at the origin. Every step is a recorded move.

    Raises:
        DecompositionError: If a ridge generator cannot be lifted or a residual
            check fails.
    """
    if pair.is_empty or not in_singular_locus_at_origin(pair):
        return Resolved(pair)
    change = directrix_coordinates(directrix(tangent_cone_pair(pair)))
    moved = change.forward_pair(pair)
    cone = tangent_cone_pair(moved)
    presentation = ridge(cone)
    builder = CertificateBuilder(moved)
    lifted: dict[int, int] = {}
    for i in range(len(presentation.generators)):
        _lift(builder, cone, presentation, i, len(moved.components), lifted)
    _clean_residual(builder, cone, presentation, len(moved.components), lifted)

    final = builder.pair
    lift_indices = [lifted[i] for i in range(len(presentation.generators))]
    for i, index in enumerate(lift_indices):
        sigma = presentation.generators[i]
        g = final.components[index].generators[0]
        if _cone_form(cone, g, Fraction(sigma.degree)) != sigma.polynomial:
            raise DecompositionError(f"in({g}, {sigma.degree}) differs from {sigma}")
    residual_components = tuple(
        c for index, c in enumerate(final.components) if index not in lift_indices
    )
    for component in residual_components:
        if component.order_at_origin() <= component.weight:
            raise DecompositionError(f"residual {component} has order at most its weight")

    residual = change.backward_pair(Pair(final.ring, residual_components))
    lifts = change.backward_pair(
        Pair(final.ring, tuple(final.components[index] for index in lift_indices))
    ).components
    logger.info("Decomposed %s into %d ridge lifts", pair, len(lifts))
    return Decomposition(pair, change, presentation, lifts, residual, builder.certificate())
