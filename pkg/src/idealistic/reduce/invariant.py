"""Invariant truncations (nu_1, s_1; nu_2, s_2; ...) with companion pairs."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

from ..chart import Chart
from ..pair import Component, Pair, flatten, intersect
from ..poly import INFINITY, Polynomial
from .classify import Case, classify
from .coefficients import coefficient_pair
from .decomposition import Resolved

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonomialFactorization:
    """I = M(I) * N(I) for the flattened pair (I, d).

    ``exponents`` gives the power of each boundary variable in M(I); ``nu`` is
    ord(N)/d, which equals ord(D) minus the orders along the boundary divisors.
    """

    monomial: Polynomial
    rest: tuple[Polynomial, ...]
    weight: Fraction
    exponents: dict[str, int]

    @property
    def order(self) -> int | float:
        return min(_order(g) for g in self.rest)

    @property
    def nu(self) -> Fraction | float:
        order = self.order
        if order == INFINITY:
            return INFINITY
        return Fraction(order) / self.weight

    @property
    def is_monomial(self) -> bool:
        return self.order == 0


def _order(g: Polynomial) -> int | float:
    return min((sum(e) for e in g.terms), default=INFINITY)


def monomial_factorization(pair: Pair, boundary_variables: Sequence[str]) -> MonomialFactorization:
    """Factor the largest monomial in the boundary variables out of the flattened pair.

    Raises:
        ValueError: If the pair is empty.
    """
    if pair.is_empty:
        raise ValueError("The empty pair has no monomial factorization")
    component = flatten(pair).components[0]
    ring = pair.ring
    exponents: dict[str, int] = {}
    for name in boundary_variables:
        if name not in ring.variables:
            continue
        position = ring.index(name)
        power = min(e[position] for g in component.generators for e in g.terms)
        if power:
            exponents[name] = power
    shift = tuple(exponents.get(v, 0) for v in ring.variables)
    rest = tuple(
        Polynomial(ring, {tuple(a - b for a, b in zip(e, shift)): c for e, c in g.terms.items()})
        for g in component.generators
    )
    return MonomialFactorization(ring.monomial(shift), rest, component.weight, exponents)


def companion_pair(pair: Pair, boundary_variables: Sequence[str]) -> Pair:
    """(N, d*nu) when nu >= 1, else (N, d*nu) & (M, d*(1 - nu)).

    A factor of weight zero is left out, and so is a constant M(I).
    """
    factorization = monomial_factorization(pair, boundary_variables)
    nu = factorization.nu
    d = factorization.weight
    components: list[Component] = []
    if not factorization.is_monomial:
        components.append(
            Component(factorization.rest, d * nu, len(factorization.rest) == 1)
        )
    if nu < 1 and not factorization.monomial.is_constant:
        components.append(Component((factorization.monomial,), d * (1 - nu), True))
    return Pair(pair.ring, tuple(components))


class StopReason(StrEnum):
    DEPTH = "depth"
    NO_MAXIMAL_CONTACT = "no-maximal-contact"
    MONOMIAL = "monomial-case"
    RESOLVED = "resolved"


@dataclass(frozen=True)
class InvariantStage:
    pair: Pair
    y_variable: str
    coefficients: Pair
    factorization: MonomialFactorization | None


@dataclass(frozen=True)
class InvariantTruncation:
    """(nu_1, s_1; ...; nu_k, s_k; nu_(k+1)) with the data of every stage.

    ``nu_1`` is the weight vector of the input pair.
    """

    nu_1: tuple[Fraction, ...]
    entries: tuple[tuple[Fraction | float, int], ...]
    tail: Fraction | float | None
    stop: StopReason
    stages: tuple[InvariantStage, ...]

    @property
    def depth(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        parts = []
        for nu, s in self.entries:
            parts.append(f"{_text(nu)}, {s}")
        if self.tail is not None:
            parts.append(_text(self.tail))
        return f"({'; '.join(parts)})"


def _text(value: Fraction | float) -> str:
    if value == INFINITY:
        return "inf"
    return str(value)


def _contact_variable(names: Sequence[str], boundary: Sequence[str]) -> str | None:
    return next((y for y in names if y not in boundary), None)


def _without_contact(pair: Pair, y: str) -> Pair:
    hyperplane = pair.ring.var(y)
    return Pair(
        pair.ring,
        tuple(
            c
            for c in pair.components
            if not (c.weight == 1 and len(c.generators) == 1 and c.generators[0].monic() == hyperplane)
        ),
    )


def invariant_truncation(chart: Chart, pair: Pair, depth: int = 1) -> InvariantTruncation:
    """Compute the invariant up to the half step after ``depth`` stages.

    Stage one intersects the pair with (<old boundary variables>, 1); every
    stage takes one hypersurface of maximal contact, forms the coefficient
    pair D_k, factors its monomial part along the new boundary divisors and
    continues with the companion pair. The construction stops without
    maximal contact, in the monomial case, or when D_k is empty.

    Raises:
        ValueError: If ``depth`` is not positive.
    """
    if depth < 1:
        raise ValueError(f"Depth must be positive, got {depth}")
    if pair.is_empty:
        return InvariantTruncation((), (), INFINITY, StopReason.RESOLVED, ())
    nu: Fraction | float = flatten(pair).weights[0]
    old = tuple(v for v in chart.boundary_variables() if v not in chart.boundary_variables(new_only=True))
    new = chart.boundary_variables(new_only=True)
    entries: list[tuple[Fraction | float, int]] = []
    stages: list[InvariantStage] = []
    tail: Fraction | float | None = None
    stop = StopReason.DEPTH
    current = pair
    for stage in range(depth):
        s = len(old) if stage == 0 else 0
        entries.append((nu, s))
        working = current
        if stage == 0 and old:
            working = intersect(current, Pair.single([current.ring.var(v) for v in old], 1))
        report = classify(working)
        if isinstance(report, Resolved):
            stop = StopReason.RESOLVED
            break
        if report.case not in (Case.MAXIMAL_CONTACT, Case.COMPANION_RECURSION):
            stop = StopReason.NO_MAXIMAL_CONTACT
            break
        y = _contact_variable(report.y_variables, old)
        if y is None:
            stop = StopReason.NO_MAXIMAL_CONTACT
            break
        rest = _without_contact(report.representative, y)
        coefficients = (
            coefficient_pair(rest, (y,))
            if not rest.is_empty
            else Pair(rest.ring.subring(v for v in rest.ring.variables if v != y))
        )
        if coefficients.is_empty:
            stages.append(InvariantStage(working, y, coefficients, None))
            tail = INFINITY
            stop = StopReason.RESOLVED
            break
        factorization = monomial_factorization(coefficients, new)
        stages.append(InvariantStage(working, y, coefficients, factorization))
        tail = factorization.nu
        logger.info("Invariant stage %d: contact %s, next nu %s", stage + 1, y, tail)
        if factorization.is_monomial:
            stop = StopReason.MONOMIAL
            break
        if stage + 1 == depth:
            break
        current = companion_pair(coefficients, new)
        nu = tail
    return InvariantTruncation(pair.weights, tuple(entries), tail, stop, tuple(stages))
