"""Tangent cone, translation stabilizer, ridge and directrix at the origin."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

from .exceptions import NotInSingularLocusError, RidgeComputationError
from .gb import GroebnerBasis, buchberger
from .linalg import in_span, kernel, rref
from .orders import permuted_lex
from .pair import Component, Pair, _dedupe
from .poly import Polynomial, Ring, initial_form, substitute

logger = logging.getLogger(__name__)


def cone_names(ring: Ring) -> dict[str, str]:
    """Map chart variables to fresh uppercase names for the graded ring."""
    names: dict[str, str] = {}
    taken: set[str] = set()
    for variable in ring.variables:
        candidate = variable.upper()
        while candidate in taken:
            candidate += "_"
        taken.add(candidate)
        names[variable] = candidate
    return names


@dataclass(frozen=True)
class ConeComponent:
    generators: tuple[Polynomial, ...]
    weight: int


@dataclass(frozen=True)
class TangentConePair:
    """Idealistic tangent cone: homogeneous initial forms with their weights.

    ``best_effort`` marks cones computed without a standard-basis declaration.
    """

    ring: Ring
    source_ring: Ring
    names: tuple[tuple[str, str], ...]
    components: tuple[ConeComponent, ...]
    best_effort: bool = False

    @property
    def generators(self) -> tuple[Polynomial, ...]:
        return tuple(g for c in self.components for g in c.generators)

    @property
    def max_weight(self) -> int:
        return max((c.weight for c in self.components), default=0)

    def to_cone(self, f: Polynomial) -> Polynomial:
        """Rename a chart polynomial into the graded ring."""
        return Polynomial(self.ring, f.to_ring(self.source_ring).terms)

    def to_chart(self, f: Polynomial) -> Polynomial:
        return Polynomial(self.source_ring, f.terms)

    def chart_name(self, cone_name: str) -> str:
        return next(chart for chart, cone in self.names if cone == cone_name)

    def as_pair(self) -> Pair:
        components = [
            Component(c.generators, c.weight, standard_basis=True) for c in self.components
        ]
        return Pair(self.ring, tuple(components))


def tangent_cone_pair(pair: Pair) -> TangentConePair:
    """Compute In_M(J_i, b_i) for every component of ``pair``.

    Standard-basis components contribute the initial forms of their
    generators; other components also add initial forms of a grevlex Gröbner
    basis of J, and the result is marked best effort.

    Raises:
        NotInSingularLocusError: If some component has order below its weight.
    """
    ring = pair.ring
    names = cone_names(ring)
    cone_ring = ring.renamed(names)
    best_effort = False
    components = []
    for index, component in enumerate(pair.components):
        order = component.order_at_origin()
        if order < component.weight:
            raise NotInSingularLocusError(index, order, component.weight)
        if component.weight.denominator != 1 or order > component.weight:
            continue
        candidates = list(component.generators)
        if not component.standard_basis:
            best_effort = True
            candidates.extend(buchberger(component.generators, ring).basis)
        forms = _dedupe(initial_form(g, component.weight) for g in candidates)
        forms = tuple(Polynomial(cone_ring, f.terms) for f in forms)
        if forms:
            components.append(ConeComponent(forms, int(component.weight)))
    return TangentConePair(
        cone_ring, ring, tuple(names.items()), tuple(components), best_effort
    )


@dataclass(frozen=True)
class StabilizerIdeal:
    """Ideal in translation variables cutting out the stabilizer of the cone."""

    ring: Ring
    translations: tuple[tuple[str, str], ...]
    generators: tuple[Polynomial, ...]

    def translation_variable(self, cone_name: str) -> str:
        return next(t for c, t in self.translations if c == cone_name)


def _translation_names(ring: Ring) -> dict[str, str]:
    names = {}
    for variable in ring.variables:
        candidate = f"d{variable}"
        while candidate in ring.variables or candidate in names.values():
            candidate = f"d{candidate}"
        names[variable] = candidate
    return names


def stabilizer_ideal(cone: TangentConePair) -> StabilizerIdeal:
    """Expand F(W + T) and reduce W-monomials modulo each cone ideal.

    The T-coefficients of the reduced expansions generate the ideal of the
    translations t with In(W + t) = In(W).
    """
    ring = cone.ring
    t_names = _translation_names(ring)
    joint = Ring(ring.field, (*ring.variables, *t_names.values()))
    t_ring = Ring(ring.field, tuple(t_names.values()))
    shift = {w: joint.var(w) + joint.var(t) for w, t in t_names.items()}
    n = ring.nvars
    generators: list[Polynomial] = []
    for component in cone.components:
        basis = buchberger(component.generators, ring)
        normal_forms: dict[tuple[int, ...], Polynomial] = {}
        for f in component.generators:
            expanded = substitute(f, shift, joint)
            by_w: dict[tuple[int, ...], dict[tuple[int, ...], Any]] = {}
            for e, c in expanded.terms.items():
                by_w.setdefault(e[:n], {})[e[n:]] = c
            total: dict[tuple[int, ...], Polynomial] = {}
            for w_exponent, t_terms in by_w.items():
                if w_exponent not in normal_forms:
                    normal_forms[w_exponent] = basis.normal_form(ring.monomial(w_exponent))
                t_coefficient = Polynomial(t_ring, t_terms)
                for reduced_exponent, c in normal_forms[w_exponent].terms.items():
                    contribution = t_coefficient.scale(c)
                    previous = total.get(reduced_exponent)
                    total[reduced_exponent] = (
                        contribution if previous is None else previous + contribution
                    )
            generators.extend(g for g in total.values() if not g.is_zero)
    logger.debug("Stabilizer ideal with %d generators", len(generators))
    return StabilizerIdeal(t_ring, tuple(t_names.items()), _dedupe(generators))


@dataclass(frozen=True)
class RidgeGenerator:
    """Additive form sum(c_j * Y_j^q) with pivot coefficient one."""

    polynomial: Polynomial
    degree: int
    pivot: str

    def coefficients(self) -> dict[str, Any]:
        ring = self.polynomial.ring
        return {
            ring.variables[e.index(self.degree)]: c
            for e, c in self.polynomial.terms.items()
        }

    def __str__(self) -> str:
        return str(self.polynomial)


@dataclass(frozen=True)
class RidgePresentation:
    """Triangular additive generators of the ridge and their expansion certificate."""

    cone: TangentConePair
    generators: tuple[RidgeGenerator, ...]
    expansions: tuple[dict[tuple[int, ...], Any], ...]
    triangular: bool = True

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(s.degree for s in self.generators)

    def as_pair(self) -> Pair:
        """The idealistic ridge: the intersection of (sigma_i, q_i)."""
        components = [
            Component((s.polynomial,), s.degree) for s in self.generators
        ]
        return Pair(self.cone.ring, tuple(components))

    def describe(self) -> list[str]:
        """Each cone generator written as a polynomial in s1, ..., ss."""
        if not self.generators:
            return []
        names = tuple(f"s{i + 1}" for i in range(len(self.generators)))
        s_ring = Ring(self.cone.ring.field, names)
        return [
            f"{self.cone.to_chart(f)} = {s_ring.from_terms(expansion)}"
            for f, expansion in zip(self.cone.generators, self.expansions)
        ]


@dataclass(frozen=True)
class DirectrixPresentation:
    """Linear forms in reduced echelon form cutting out the directrix."""

    cone: TangentConePair
    forms: tuple[Polynomial, ...]
    pivots: tuple[str, ...]

    def as_pair(self) -> Pair:
        """The idealistic directrix (<Y_1, ..., Y_r>, 1)."""
        if not self.forms:
            return Pair(self.cone.ring)
        return Pair.single(self.forms, 1)


def _additive(ring: Ring, vector: Sequence[Any], q: int) -> Polynomial:
    terms = {}
    for j, c in enumerate(vector):
        if not ring.field.is_zero(c):
            exponent = [0] * ring.nvars
            exponent[j] = q
            terms[tuple(exponent)] = c
    return Polynomial(ring, terms)


def _twist(vector: Sequence[Any], power: int, ring: Ring) -> list[Any]:
    return [ring.field.power(c, power) for c in vector]


def sigma_expansion(
    f: Polynomial, generators: Sequence[RidgeGenerator]
) -> dict[tuple[int, ...], Any] | None:
    """Write ``f`` as a polynomial in the ridge generators, or return ``None``.

    Subduction under the lexicographic order with pivots first in generator
    order: each leading monomial must be a product of pivot powers Y_i^(q_i).
    """
    ring = f.ring
    pivots = [ring.index(s.pivot) for s in generators]
    rest = [i for i in range(ring.nvars) if i not in pivots]
    key = permuted_lex(pivots + rest)
    field = ring.field
    expansion: dict[tuple[int, ...], Any] = {}
    remainder = f
    while not remainder.is_zero:
        exponent, c = remainder.leading_term(key)
        if any(exponent[i] for i in rest):
            return None
        powers = []
        for s, index in zip(generators, pivots):
            if exponent[index] % s.degree:
                return None
            powers.append(exponent[index] // s.degree)
        product = ring.one()
        for s, power in zip(generators, powers):
            if power:
                product = product * s.polynomial**power
        remainder = remainder - product.scale(c)
        key_powers = tuple(powers)
        expansion[key_powers] = field.add(expansion.get(key_powers, field.zero), c)
    return expansion


def generation_holds(cone: TangentConePair, generators: Sequence[RidgeGenerator]) -> bool:
    """Check that every cone generator is a polynomial in ``generators``."""
    return all(sigma_expansion(f, generators) is not None for f in cone.generators)


def _triangularize(
    ring: Ring, found: list[tuple[int, list[Any]]]
) -> list[RidgeGenerator]:
    field = ring.field
    result: list[RidgeGenerator] = []
    for q, vector in found:
        vector = list(vector)
        for earlier in result:
            pivot = ring.index(earlier.pivot)
            c = vector[pivot]
            if field.is_zero(c):
                continue
            twisted = _twist(
                [earlier.polynomial.coefficient(_unit(ring, j, earlier.degree)) for j in range(ring.nvars)],
                q // earlier.degree,
                ring,
            )
            vector = [field.sub(a, field.mul(c, b)) for a, b in zip(vector, twisted)]
        pivot = next(j for j, c in enumerate(vector) if not field.is_zero(c))
        inverse = field.inv(vector[pivot])
        vector = [field.mul(c, inverse) for c in vector]
        result.append(RidgeGenerator(_additive(ring, vector, q), q, ring.variables[pivot]))
    return result


def _unit(ring: Ring, j: int, q: int) -> tuple[int, ...]:
    exponent = [0] * ring.nvars
    exponent[j] = q
    return tuple(exponent)


def _additive_kernel(
    basis: GroebnerBasis, t_ring: Ring, q: int
) -> list[list[Any]]:
    field = t_ring.field
    reduced = [basis.normal_form(t_ring.monomial(_unit(t_ring, j, q))) for j in range(t_ring.nvars)]
    monomials = sorted({e for r in reduced for e in r.terms})
    columns = [[r.coefficient(m) for m in monomials] for r in reduced]
    vectors = kernel(columns, field)
    if not vectors:
        return []
    rows, _ = rref(vectors, field)
    return rows


def ridge(cone: TangentConePair) -> RidgePresentation:
    """Extract the additive generators of the stabilizer degree by degree.

    In degree q the kernel of T_j^q modulo the stabilizer ideal gives the
    additive forms of the ideal; forms not already spanned by Frobenius twists
    of earlier generators become new generators, which are then brought to
    triangular form.

    Raises:
        RidgeComputationError: If the cone generators are not polynomials in the
            extracted generators.
    """
    ring = cone.ring
    field = ring.field
    p = field.characteristic
    if not cone.components:
        return RidgePresentation(cone, (), ())
    stabilizer = stabilizer_ideal(cone)
    basis = buchberger(stabilizer.generators, stabilizer.ring)
    found: list[tuple[int, list[Any]]] = []
    q = 1
    while q <= cone.max_weight:
        spanned = [_twist(vector, q // degree, ring) for degree, vector in found]
        for vector in _additive_kernel(basis, stabilizer.ring, q):
            if in_span(spanned, vector, field):
                continue
            found.append((q, vector))
            spanned.append(vector)
        if p == 0:
            break
        q *= p
    generators = _triangularize(ring, found)
    expansions = []
    for f in cone.generators:
        expansion = sigma_expansion(f, generators)
        if expansion is None:
            raise RidgeComputationError(f"{f} is not a polynomial in the ridge generators")
        expansions.append(expansion)
    logger.debug("Ridge degrees %s", [s.degree for s in generators])
    return RidgePresentation(cone, tuple(generators), tuple(expansions))


def directrix(cone: TangentConePair, presentation: RidgePresentation | None = None) -> DirectrixPresentation:
    """Linear forms cutting out the largest translation-stable subspace.

    Each ridge generator sum(c_j * Y_j^q) contributes the linear forms
    sum(a_ji * Y_j) from the p-basis split c_j = sum(a_ji^q * lam^i).

    Raises:
        RidgeComputationError: If the cone is not generated in the directrix
            variables.
    """
    presentation = presentation or ridge(cone)
    ring = cone.ring
    field = ring.field
    rows: list[list[Any]] = []
    for s in presentation.generators:
        coefficients = [
            s.polynomial.coefficient(_unit(ring, j, s.degree)) for j in range(ring.nvars)
        ]
        if s.degree == 1:
            rows.append(coefficients)
            continue
        parts = [field.p_basis(c, s.degree) for c in coefficients]
        for i in range(s.degree):
            row = [part[i] for part in parts]
            if any(not field.is_zero(c) for c in row):
                rows.append(row)
    reduced, pivots = rref(rows, field) if rows else ([], [])
    forms = tuple(_additive(ring, row, 1) for row in reduced)
    result = DirectrixPresentation(cone, forms, tuple(ring.variables[j] for j in pivots))
    if not _directrix_generates(result):
        raise RidgeComputationError("cone is not generated in the directrix variables")
    return result


def _directrix_generates(d: DirectrixPresentation) -> bool:
    ring = d.cone.ring
    mapping = {}
    for form, pivot in zip(d.forms, d.pivots):
        mapping[pivot] = ring.var(pivot) - (form - ring.var(pivot))
    pivots = set(d.pivots)
    for f in d.cone.generators:
        moved = substitute(f, mapping)
        if any(name not in pivots for name in moved.variables_used()):
            return False
    return True


def reduced_ridge_equals_directrix(r: RidgePresentation, d: DirectrixPresentation) -> bool:
    """True iff every ridge generator is a q-th power of a linear form and s = r."""
    field = r.cone.ring.field
    if field.characteristic == 0:
        return True
    if len(r.generators) != len(d.forms):
        return False
    for s in r.generators:
        for c in s.coefficients().values():
            if s.degree > 1 and field.nth_root(c, s.degree) is None:
                return False
    return True


@dataclass(frozen=True)
class CoordinateChange:
    """Invertible linear change making the directrix forms coordinates.

    ``to_new`` maps old chart variables to polynomials in ``new_ring``;
    ``to_old`` maps the new variables back.
    """

    old_ring: Ring
    new_ring: Ring
    to_new: dict[str, Polynomial]
    to_old: dict[str, Polynomial]
    renamed: dict[str, str]

    @property
    def is_identity(self) -> bool:
        return not self.to_new

    def forward(self, f: Polynomial) -> Polynomial:
        if self.is_identity:
            return f
        return substitute(f, self.to_new, self.new_ring)

    def backward(self, f: Polynomial) -> Polynomial:
        if self.is_identity:
            return f
        return substitute(f, self.to_old, self.old_ring)

    def forward_pair(self, pair: Pair) -> Pair:
        return _map_pair(pair, self.forward, self.new_ring)

    def backward_pair(self, pair: Pair) -> Pair:
        return _map_pair(pair, self.backward, self.old_ring)

    def __str__(self) -> str:
        if self.is_identity:
            return "identity"
        return ", ".join(f"{name} = {form}" for name, form in self.to_old.items())


def _map_pair(pair: Pair, fn: Callable[[Polynomial], Polynomial], ring: Ring) -> Pair:
    components = tuple(
        Component(tuple(fn(g) for g in c.generators), c.weight, c.standard_basis)
        for c in pair.components
    )
    return Pair(ring, components)


def _fresh_names(taken: set[str], count: int) -> list[str]:
    names = []
    index = 0
    while len(names) < count:
        candidate = "w" if index == 0 else f"w{index}"
        index += 1
        if candidate not in taken:
            names.append(candidate)
            taken.add(candidate)
    return names


def directrix_coordinates(d: DirectrixPresentation) -> CoordinateChange:
    """Build chart coordinates in which every directrix form is a variable.

    A pivot variable whose form is not the bare variable is replaced by a
    fresh name ``w``, ``w1``, ...; the remaining variables keep their names.
    """
    cone = d.cone
    old = cone.source_ring
    changed = [
        (form, pivot) for form, pivot in zip(d.forms, d.pivots) if len(form.terms) > 1
    ]
    if not changed:
        return CoordinateChange(old, old, {}, {}, {})
    fresh = _fresh_names(set(old.variables), len(changed))
    renamed = {cone.chart_name(pivot): name for (_, pivot), name in zip(changed, fresh)}
    new = old.renamed(renamed)
    to_new: dict[str, Polynomial] = {}
    to_old: dict[str, Polynomial] = {}
    for (form, pivot), name in zip(changed, fresh):
        old_pivot = cone.chart_name(pivot)
        chart_form = cone.to_chart(form)
        to_old[name] = chart_form
        tail = chart_form - old.var(old_pivot)
        to_new[old_pivot] = new.var(name) - tail.to_ring(new)
    logger.debug("Directrix coordinates: %s", ", ".join(f"{n} = {f}" for n, f in to_old.items()))
    return CoordinateChange(old, new, to_new, to_old, renamed)
