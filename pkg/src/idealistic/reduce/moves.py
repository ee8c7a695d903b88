"""Equivalence moves on pairs and replayable certificates."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, ClassVar

from typing_extensions import override

from ..exceptions import CertificateReplayError, IdealisticError, MoveRefusedError
from ..gb import buchberger, ideal_contains
from ..pair import Component, Pair, flatten, power_generators, singular_locus_ideal
from ..poly import Polynomial, hasse_derivative, nth_root
from .coefficients import coefficient_pair, split_of

logger = logging.getLogger(__name__)


def _component(generators: Sequence[Polynomial], weight: Fraction | int) -> Component:
    # A single generator is always a standard basis of its principal ideal.
    generators = tuple(generators)
    return Component(generators, Fraction(weight), len(generators) == 1)


class Move(ABC):
    """One equivalence-preserving rewrite of a pair."""

    name: ClassVar[str]

    @abstractmethod
    def apply(self, pair: Pair) -> Pair:
        """Rewrite ``pair``.

        Args:
            pair: The pair to rewrite.

        Returns:
            An equivalent pair.

        Raises:
            MoveRefusedError: If a side condition of the move fails.
        """
        pass

    def _refuse(self, condition: str) -> MoveRefusedError:
        return MoveRefusedError(str(self), condition)

    def _component_at(self, pair: Pair, index: int) -> Component:
        if not 0 <= index < len(pair.components):
            raise self._refuse(f"no component {index}")
        return pair.components[index]


@dataclass(frozen=True)
class Power(Move):
    """(J, b) -> (J^a, a*b)."""

    component: int
    exponent: int
    name: ClassVar[str] = "Power"

    @override
    def apply(self, pair: Pair) -> Pair:
        c = self._component_at(pair, self.component)
        if self.exponent < 1:
            raise self._refuse("exponent must be positive")
        generators = power_generators(c.generators, self.exponent)
        return pair.replace(self.component, _component(generators, c.weight * self.exponent))

    def __str__(self) -> str:
        return f"Power({self.component}, {self.exponent})"


@dataclass(frozen=True)
class Root(Move):
    """(f^a, a*b) -> (f, b) for a single generator that is an a-th power."""

    component: int
    exponent: int
    name: ClassVar[str] = "Root"

    @override
    def apply(self, pair: Pair) -> Pair:
        c = self._component_at(pair, self.component)
        if self.exponent < 1:
            raise self._refuse("exponent must be positive")
        if len(c.generators) != 1:
            raise self._refuse("component must have a single generator")
        root = nth_root(c.generators[0], self.exponent)
        if root is None:
            raise self._refuse(f"{c.generators[0]} is not a {self.exponent}-th power")
        return pair.replace(self.component, _component((root,), c.weight / self.exponent))

    def __str__(self) -> str:
        return f"Root({self.component}, {self.exponent})"


@dataclass(frozen=True)
class SumSameWeight(Move):
    """(J1, b) & (J2, b) -> (J1 + J2, b) at the position of the first component."""

    first: int
    second: int
    name: ClassVar[str] = "SumSameWeight"

    @override
    def apply(self, pair: Pair) -> Pair:
        a = self._component_at(pair, self.first)
        b = self._component_at(pair, self.second)
        if self.first == self.second:
            raise self._refuse("components must differ")
        if a.weight != b.weight:
            raise self._refuse(f"weights {a.weight} and {b.weight} differ")
        merged = Component(
            tuple(dict.fromkeys(a.generators + b.generators)), a.weight, False
        )
        components = list(pair.components)
        components[self.first] = merged
        del components[self.second]
        return Pair(pair.ring, tuple(components))

    def __str__(self) -> str:
        return f"SumSameWeight({self.first}, {self.second})"


@dataclass(frozen=True)
class Split(Move):
    """(J1 + J2, b) -> (J1, b) & (J2, b), moving the chosen generators to a new component."""

    component: int
    generators: tuple[int, ...]
    name: ClassVar[str] = "Split"

    @override
    def apply(self, pair: Pair) -> Pair:
        c = self._component_at(pair, self.component)
        chosen = set(self.generators)
        if not chosen or not chosen < set(range(len(c.generators))):
            raise self._refuse("split must leave both parts nonempty")
        kept = [g for i, g in enumerate(c.generators) if i not in chosen]
        moved = [g for i, g in enumerate(c.generators) if i in chosen]
        pair = pair.replace(self.component, _component(kept, c.weight))
        return Pair(pair.ring, (*pair.components, _component(moved, c.weight)))

    def __str__(self) -> str:
        return f"Split({self.component}, {list(self.generators)})"


@dataclass(frozen=True)
class Product(Move):
    """(J1, b1) & (J2, b2) -> (J1*J2, b1 + b2) when Sing(J_i, b_i + 1) is empty.

    The emptiness witnesses are the unit Gröbner bases of both singular-locus
    ideals, recomputed on every replay.
    """

    first: int
    second: int
    name: ClassVar[str] = "Product"

    @override
    def apply(self, pair: Pair) -> Pair:
        a = self._component_at(pair, self.first)
        b = self._component_at(pair, self.second)
        if self.first == self.second:
            raise self._refuse("components must differ")
        for index, c in ((self.first, a), (self.second, b)):
            locus = singular_locus_ideal(Pair(pair.ring, (Component(c.generators, c.weight + 1),)))
            if not buchberger(locus.generators, pair.ring).is_unit:
                raise self._refuse(f"Sing(J_{index}, b_{index} + 1) is not empty")
        products = tuple(dict.fromkeys(f * g for f in a.generators for g in b.generators))
        components = list(pair.components)
        components[self.first] = _component(products, a.weight + b.weight)
        del components[self.second]
        return Pair(pair.ring, tuple(components))

    def __str__(self) -> str:
        return f"Product({self.first}, {self.second})"


@dataclass(frozen=True)
class Diff(Move):
    """Append (D_N J', b - |N|) for a subset J' of the generators of one component.

    ``generators`` empty means every generator. Vanishing derivatives are
    dropped; a move where all of them vanish is refused.
    """

    component: int
    multi_index: tuple[int, ...]
    generators: tuple[int, ...] = ()
    name: ClassVar[str] = "Diff"

    @override
    def apply(self, pair: Pair) -> Pair:
        c = self._component_at(pair, self.component)
        order = sum(self.multi_index)
        if len(self.multi_index) != pair.ring.nvars:
            raise self._refuse("multi-index does not match the ring")
        if order >= c.weight:
            raise self._refuse(f"|N| = {order} is not below b = {c.weight}")
        indices = self.generators or tuple(range(len(c.generators)))
        if any(not 0 <= i < len(c.generators) for i in indices):
            raise self._refuse("generator index out of range")
        derivatives = [hasse_derivative(c.generators[i], self.multi_index) for i in indices]
        derivatives = [d for d in dict.fromkeys(derivatives) if not d.is_zero]
        if not derivatives:
            raise self._refuse("every derivative vanishes")
        return Pair(pair.ring, (*pair.components, _component(derivatives, c.weight - order)))

    def __str__(self) -> str:
        selection = f", {list(self.generators)}" if self.generators else ""
        return f"Diff({self.component}, {list(self.multi_index)}{selection})"


@dataclass(frozen=True)
class Duplicate(Move):
    component: int
    name: ClassVar[str] = "Duplicate"

    @override
    def apply(self, pair: Pair) -> Pair:
        c = self._component_at(pair, self.component)
        return Pair(pair.ring, (*pair.components, c))

    def __str__(self) -> str:
        return f"Duplicate({self.component})"


@dataclass(frozen=True)
class Drop(Move):
    """Remove component i when component j implies it: J_i inside J_j and b_i <= b_j."""

    component: int
    dominated_by: int
    name: ClassVar[str] = "Drop"

    @override
    def apply(self, pair: Pair) -> Pair:
        dropped = self._component_at(pair, self.component)
        witness = self._component_at(pair, self.dominated_by)
        if self.component == self.dominated_by:
            raise self._refuse("components must differ")
        if dropped.weight > witness.weight:
            raise self._refuse(f"weight {dropped.weight} exceeds {witness.weight}")
        if not ideal_contains(witness.generators, dropped.generators, pair.ring):
            raise self._refuse("ideal containment fails")
        components = list(pair.components)
        del components[self.component]
        return Pair(pair.ring, tuple(components))

    def __str__(self) -> str:
        return f"Drop({self.component}, {self.dominated_by})"


@dataclass(frozen=True)
class Normalize(Move):
    """Multiply each generator of a component by a nonzero constant."""

    component: int
    factors: tuple[Any, ...]
    name: ClassVar[str] = "Normalize"

    @override
    def apply(self, pair: Pair) -> Pair:
        c = self._component_at(pair, self.component)
        field = pair.ring.field
        if len(self.factors) != len(c.generators):
            raise self._refuse("one factor per generator is required")
        if any(field.is_zero(f) for f in self.factors):
            raise self._refuse("factors must be units")
        scaled = tuple(g.scale(f) for g, f in zip(c.generators, self.factors))
        return pair.replace(self.component, Component(scaled, c.weight, c.standard_basis))

    def __str__(self) -> str:
        return f"Normalize({self.component})"


@dataclass(frozen=True)
class Eliminate(Move):
    """Replace a generator f of component i by f - sum(c_A * prod(g_j^A_j)).

    Every g_j is the single generator of another component (g_j, q_j) and every
    product has weight sum(A_j * q_j) equal to the weight of component i. A
    generator that becomes zero is dropped, and so is an emptied component.
    """

    component: int
    generator: int
    terms: tuple[tuple[Any, tuple[tuple[int, int], ...]], ...]
    name: ClassVar[str] = "Eliminate"

    @override
    def apply(self, pair: Pair) -> Pair:
        c = self._component_at(pair, self.component)
        if not 0 <= self.generator < len(c.generators):
            raise self._refuse("generator index out of range")
        ring = pair.ring
        correction = ring.zero()
        for coefficient, factors in self.terms:
            product = ring.one()
            weight = Fraction(0)
            for index, exponent in factors:
                factor = self._component_at(pair, index)
                if index == self.component or len(factor.generators) != 1:
                    raise self._refuse(f"component {index} is not a single-generator factor")
                product = product * factor.generators[0] ** exponent
                weight += exponent * factor.weight
            if weight != c.weight:
                raise self._refuse(f"product weight {weight} differs from {c.weight}")
            correction = correction + product.scale(coefficient)
        generators = list(c.generators)
        generators[self.generator] = generators[self.generator] - correction
        remaining = [g for g in generators if not g.is_zero]
        components = list(pair.components)
        if remaining:
            components[self.component] = _component(remaining, c.weight)
        else:
            del components[self.component]
        return Pair(ring, tuple(components))

    def __str__(self) -> str:
        return f"Eliminate({self.component}, {self.generator}, {len(self.terms)} terms)"


@dataclass(frozen=True)
class MaxContactSplit(Move):
    """(y, 1) & E -> (y, 1) & D(E; u; y), with (y, 1) a component of the pair."""

    y_variables: tuple[str, ...]
    name: ClassVar[str] = "MaxContactSplit"

    @override
    def apply(self, pair: Pair) -> Pair:
        ring = pair.ring
        names = split_of(ring, self.y_variables)
        hyperplane = Component(tuple(ring.var(y) for y in names), 1)
        index = next(
            (
                i
                for i, c in enumerate(pair.components)
                if c.weight == 1 and set(c.generators) == set(hyperplane.generators)
            ),
            None,
        )
        if index is None:
            raise self._refuse(f"no component ({', '.join(names)} : 1)")
        rest = Pair(ring, pair.components[:index] + pair.components[index + 1 :])
        coefficients = coefficient_pair(rest, names) if rest.components else Pair(ring)
        lifted = tuple(
            Component(tuple(g.to_ring(ring) for g in c.generators), c.weight, c.standard_basis)
            for c in coefficients.components
        )
        return Pair(ring, (pair.components[index], *lifted))

    def __str__(self) -> str:
        return f"MaxContactSplit({', '.join(self.y_variables)})"


@dataclass(frozen=True)
class Flatten(Move):
    """Merge all components into (sum J_i^(c/b_i), c)."""

    name: ClassVar[str] = "Flatten"

    @override
    def apply(self, pair: Pair) -> Pair:
        if pair.is_empty:
            raise self._refuse("nothing to flatten")
        return flatten(pair)

    def __str__(self) -> str:
        return "Flatten"


@dataclass(frozen=True)
class CoeffFunctor(Move):
    """Carry a witnessed equivalence E1 ~ E2 to D(E1; u; y) ~ D(E2; u; y).

    Applies to D(E1) only and yields D(E2) after replaying the witness.
    """

    y_variables: tuple[str, ...]
    witness: MoveCertificate
    name: ClassVar[str] = "CoeffFunctor"

    @override
    def apply(self, pair: Pair) -> Pair:
        if coefficient_pair(self.witness.source, self.y_variables) != pair:
            raise self._refuse("pair is not the coefficient pair of the witness source")
        try:
            target = self.witness.replay()
        except CertificateReplayError as exc:
            raise self._refuse(f"witness does not replay: {exc}") from exc
        return coefficient_pair(target, self.y_variables)

    def __str__(self) -> str:
        return f"CoeffFunctor({', '.join(self.y_variables)}; {len(self.witness.moves)} moves)"


@dataclass(frozen=True)
class MoveCertificate:
    """Source pair, ordered moves and the target they produce."""

    source: Pair
    moves: tuple[Move, ...]
    target: Pair

    def replay(self) -> Pair:
        """Re-apply every move from the source and compare with the target.

        Raises:
            CertificateReplayError: If a move is refused or the result differs.
        """
        pair = self.source
        for step, move in enumerate(self.moves, start=1):
            try:
                pair = move.apply(pair)
            except IdealisticError as exc:
                raise CertificateReplayError(step, str(exc)) from exc
        if pair != self.target:
            raise CertificateReplayError(len(self.moves), f"replay gives {pair}, expected {self.target}")
        return pair

    def then(self, other: MoveCertificate) -> MoveCertificate:
        """Concatenate with a certificate starting where this one ends."""
        if other.source != self.target:
            raise ValueError("certificates do not chain")
        return MoveCertificate(self.source, self.moves + other.moves, other.target)

    def describe(self) -> list[str]:
        return [f"{step}. {move}" for step, move in enumerate(self.moves, start=1)]


def apply_move(pair: Pair, move: Move) -> tuple[Pair, MoveCertificate]:
    """Apply one move and return the result with its one-step certificate."""
    result = move.apply(pair)
    logger.debug("%s: %s -> %s", move, pair, result)
    return result, MoveCertificate(pair, (move,), result)


class CertificateBuilder:
    """Apply moves one after another while recording them."""

    def __init__(self, source: Pair) -> None:
        self.source = source
        self.pair = source
        self.moves: list[Move] = []

    def apply(self, move: Move) -> Pair:
        self.pair = move.apply(self.pair)
        self.moves.append(move)
        return self.pair

    def certificate(self) -> MoveCertificate:
        return MoveCertificate(self.source, tuple(self.moves), self.pair)


def transport_certificate(
    certificate: MoveCertificate, y_variables: Sequence[str] | None = None
) -> MoveCertificate:
    """Turn a certificate for E1 ~ E2 into one for D(E1; u; y) ~ D(E2; u; y)."""
    names = split_of(certificate.source.ring, y_variables)
    source = coefficient_pair(certificate.source, names)
    move = CoeffFunctor(names, certificate)
    return MoveCertificate(source, (move,), move.apply(source))
