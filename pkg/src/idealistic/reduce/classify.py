"""Classification of the reduction to lower dimension and the maximal-contact chain."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction

from ..chart import Chart
from ..cone import CoordinateChange
from ..exceptions import UnsupportedCoordinateChangeError
from ..pair import Component, Pair, PointSpec, flatten, ord_at
from ..poly import INFINITY, Polynomial, nth_root, substitute
from .coefficients import coefficient_pair
from .decomposition import Decomposition, Resolved, ridge_decomposition
from .moves import (
    CertificateBuilder,
    MaxContactSplit,
    MoveCertificate,
    Normalize,
    Root,
    SumSameWeight,
)

logger = logging.getLogger(__name__)


class Case(StrEnum):
    NO_REDUCTION = "no-reduction"
    MAXIMAL_CONTACT = "maximal-contact"
    COMPANION_RECURSION = "companion-recursion"
    PARTIAL_ONLY = "partial-only"


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of the reduction procedure for one pair.

    ``representative`` is the pair after p-power stripping and straightening,
    in the coordinates of ``decomposition.coordinates``; ``y_variables`` name
    the components (y_i, 1) of maximal contact inside it.
    """

    case: Case
    exponents: tuple[int, ...]
    t: int
    s: int
    decomposition: Decomposition
    representative: Pair
    stripping: MoveCertificate
    y_variables: tuple[str, ...] = ()
    straightening: dict[str, Polynomial] = field(default_factory=dict)
    coefficients: Pair | None = None
    companion: Pair | None = None
    contact_certificate: MoveCertificate | None = None

    @property
    def coordinates(self) -> CoordinateChange:
        return self.decomposition.coordinates


def _p_power_exponent(q: int, p: int) -> int:
    e = 0
    while p and q % p == 0:
        q //= p
        e += 1
    return e


def _strip(builder: CertificateBuilder, start: int, count: int, p: int) -> list[int]:
    """Root every lift (g, p^d) as far as g is a p-power; return the exponents left."""
    exponents = []
    for index in range(start, start + count):
        component = builder.pair.components[index]
        g = component.generators[0]
        d = _p_power_exponent(int(component.weight), p)
        c = d
        for e in range(d, 0, -1):
            if nth_root(g, p**e) is not None:
                builder.apply(Root(index, p**e))
                c = d - e
                break
        exponents.append(c)
    return exponents


def _linear_variable(f: Polynomial, taken: list[str]) -> str | None:
    """A variable y with f = c*y + h, c constant and h free of y."""
    ring = f.ring
    for candidate in f.variables_used():
        if candidate in taken:
            continue
        position = ring.index(candidate)
        touching = [e for e in f.terms if e[position] > 0]
        if len(touching) == 1 and sum(touching[0]) == 1:
            return candidate
    return None


def _straighten(
    pair: Pair, indices: list[int]
) -> tuple[Pair, dict[str, Polynomial], list[str]]:
    """Make each lift f = c*y + h(no y) a coordinate through y -> (y - h)/c.

    Raises:
        UnsupportedCoordinateChangeError: If a lift has no variable occurring
            linearly with a constant coefficient.
    """
    ring = pair.ring
    field_ = ring.field
    mapping: dict[str, Polynomial] = {}
    names: list[str] = []
    for index in indices:
        f = pair.components[index].generators[0]
        variable = _linear_variable(f, names)
        if variable is None:
            raise UnsupportedCoordinateChangeError(
                str(f), "no variable occurs linearly with a constant coefficient"
            )
        names.append(variable)
        y = ring.var(variable)
        c = f.coefficient(next(iter(y.terms)))
        tail = f - y.scale(c)
        if tail.is_zero:
            continue
        image = (y - tail).scale(field_.inv(c))
        mapping[variable] = image
        pair = Pair(
            ring,
            tuple(
                Component(
                    tuple(substitute(g, {variable: image}) for g in comp.generators),
                    comp.weight,
                    comp.standard_basis,
                )
                for comp in pair.components
            ),
        )
    return pair, mapping, names


def has_monomial_factor(pair: Pair, variables: tuple[str, ...]) -> bool:
    """Whether some variable divides every generator of every component."""
    for name in variables:
        if name not in pair.ring.variables:
            continue
        position = pair.ring.index(name)
        if all(
            min(e[position] for e in g.terms) > 0
            for c in pair.components
            for g in c.generators
        ):
            return True
    return False


def classify(pair: Pair, chart: Chart | None = None) -> ReductionReport | Resolved:
    """Run the reduction procedure on ``pair``.

    After the ridge decomposition every lift (g_i, p^d_i) is reduced to
    (f_i, p^c_i) with f_i not a p-power. Some c_1 > 0 means no reduction;
    otherwise the t lifts with c_i = 0 give maximal contact, and the report
    carries the coefficient pair on V(y_1, ..., y_t) when t = s. With a
    chart whose new boundary divisors factor out of that coefficient pair,
    the report asks for the companion recursion instead.

    Raises:
        UnsupportedCoordinateChangeError: If a maximal-contact lift cannot be
            straightened to a coordinate.
    """
    decomposition = ridge_decomposition(pair)
    if isinstance(decomposition, Resolved):
        return decomposition
    target = decomposition.certificate.target
    p = target.ring.field.characteristic
    s = len(decomposition.lifts)
    start = len(decomposition.residual.components)
    builder = CertificateBuilder(target)
    exponents = _strip(builder, start, s, p)
    ordered = tuple(sorted(exponents))
    common = dict(
        exponents=ordered,
        s=s,
        decomposition=decomposition,
        stripping=builder.certificate(),
    )
    if s == 0 or ordered[0] > 0:
        logger.info("No reduction: exponents %s", ordered)
        return ReductionReport(Case.NO_REDUCTION, t=0, representative=builder.pair, **common)

    contact = [start + i for i, c in enumerate(exponents) if c == 0]
    t = len(contact)
    representative, straightening, names = _straighten(builder.pair, contact)
    if t < s:
        logger.info("Partial reduction: %d of %d lifts are hypersurfaces", t, s)
        return ReductionReport(
            Case.PARTIAL_ONLY,
            t=t,
            representative=representative,
            y_variables=tuple(names),
            straightening=straightening,
            **common,
        )

    ring = representative.ring
    contact_builder = CertificateBuilder(representative)
    for name, index in zip(names, contact):
        g = representative.components[index].generators[0]
        if g != ring.var(name):
            contact_builder.apply(Normalize(index, (ring.field.inv(g.leading_term()[1]),)))
    for _ in range(t - 1):
        contact_builder.apply(SumSameWeight(contact[0], contact[0] + 1))
    split = contact_builder.apply(MaxContactSplit(tuple(names)))
    u_ring = ring.subring(v for v in ring.variables if v not in names)
    coefficients = coefficient_pair(Pair(ring, split.components[1:]), tuple(names))
    if coefficients.is_empty:
        coefficients = Pair(u_ring)

    case = Case.MAXIMAL_CONTACT
    companion = None
    if chart is not None and not coefficients.is_empty:
        from .invariant import companion_pair

        boundary = tuple(v for v in chart.boundary_variables(new_only=True) if v not in names)
        if has_monomial_factor(coefficients, boundary):
            case = Case.COMPANION_RECURSION
            companion = companion_pair(coefficients, boundary)
    logger.info("%s with y = %s", case, ", ".join(names))
    return ReductionReport(
        case,
        t=t,
        representative=representative,
        y_variables=tuple(names),
        straightening=straightening,
        coefficients=coefficients,
        companion=companion,
        contact_certificate=contact_builder.certificate(),
        **common,
    )


@dataclass(frozen=True)
class ChainStep:
    """One stage: the pair, its maximal contact and the next coefficient pair."""

    pair: Pair
    coordinates: CoordinateChange | None
    y_variables: tuple[str, ...]
    coefficients: Pair
    delta: Fraction | float
    normalized: Pair | None


@dataclass(frozen=True)
class MaximalContactChain:
    steps: tuple[ChainStep, ...]
    final: Pair

    @property
    def deltas(self) -> tuple[Fraction | float, ...]:
        return tuple(step.delta for step in self.steps)


def pair_order(pair: Pair) -> Fraction | float:
    """Order at the origin; infinite for the empty pair."""
    if pair.is_empty:
        return INFINITY
    if not pair.ring.variables:
        return Fraction(0)
    return ord_at(pair, PointSpec.origin(pair.ring))


def normalized_pair(pair: Pair) -> Pair | None:
    """D* = (I, ord I) for the flattened pair (I, d); ``None`` when I is a unit."""
    component = flatten(pair).components[0]
    order = component.order_at_origin()
    if order == 0:
        return None
    return Pair.single(component.generators, order)


def maximal_contact_chain(
    pair: Pair, y_variables: tuple[str, ...] | None = None, limit: int = 16
) -> MaximalContactChain:
    """Iterate maximal contact: D_k, delta_k = ord D_k, then D_k* = (I_k, ord I_k).

    The first stage uses the given (or declared) split when there is one;
    every other stage finds maximal contact by classification, moving to
    directrix coordinates on the way. The chain stops once a coefficient pair
    is empty or maximal contact fails.
    """
    steps: list[ChainStep] = []
    current = pair
    final = pair
    first_split = tuple(y_variables or pair.ring.y_variables)
    for stage in range(limit):
        if stage == 0 and first_split:
            names = first_split
            coordinates = None
            coefficients = coefficient_pair(current, names)
            working = current
        else:
            report = classify(current)
            if isinstance(report, Resolved) or report.coefficients is None:
                break
            names = report.y_variables
            coordinates = report.coordinates
            coefficients = report.coefficients
            working = report.representative
        final = Pair.single([working.ring.var(y) for y in names], 1)
        if coefficients.is_empty:
            break
        value = pair_order(coefficients)
        normalized = normalized_pair(coefficients)
        steps.append(ChainStep(current, coordinates, names, coefficients, value, normalized))
        logger.info("Chain stage %d: delta = %s", stage + 1, value)
        if normalized is None:
            break
        current = normalized
    return MaximalContactChain(tuple(steps), final)
