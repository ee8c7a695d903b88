"""Buchberger's algorithm, normal forms and ideal membership."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

from .exceptions import RingMismatchError
from .field import Field
from .orders import Exponent, OrderKey, divides, lcm, order_key
from .poly import Polynomial, Ring

logger = logging.getLogger(__name__)

_Terms = dict[Exponent, Any]


@dataclass(frozen=True)
class _Entry:
    lead: Exponent
    terms: _Terms


def _leading(terms: _Terms, key: OrderKey) -> Exponent:
    return max(terms, key=key)


def _monic(terms: _Terms, field: Field, key: OrderKey) -> _Terms:
    inverse = field.inv(terms[_leading(terms, key)])
    return {e: field.mul(c, inverse) for e, c in terms.items()}


def _subtract_multiple(
    target: _Terms, terms: _Terms, shift: Exponent, factor: Any, field: Field
) -> None:
    for e, c in terms.items():
        exponent = tuple(a + b for a, b in zip(e, shift))
        value = field.sub(target.get(exponent, field.zero), field.mul(factor, c))
        if field.is_zero(value):
            target.pop(exponent, None)
        else:
            target[exponent] = value


def _reduce(terms: _Terms, basis: Sequence[_Entry], field: Field, key: OrderKey) -> _Terms:
    """Fully reduce ``terms`` by a list of monic entries."""
    pending = dict(terms)
    remainder: _Terms = {}
    while pending:
        exponent = _leading(pending, key)
        c = pending[exponent]
        for entry in basis:
            if divides(entry.lead, exponent):
                shift = tuple(a - b for a, b in zip(exponent, entry.lead))
                _subtract_multiple(pending, entry.terms, shift, c, field)
                break
        else:
            remainder[exponent] = c
            del pending[exponent]
    return remainder


def _spolynomial(f: _Entry, g: _Entry, field: Field) -> _Terms:
    common = lcm(f.lead, g.lead)
    result: _Terms = {}
    _subtract_multiple(
        result, f.terms, tuple(a - b for a, b in zip(common, f.lead)), field.neg(field.one), field
    )
    _subtract_multiple(result, g.terms, tuple(a - b for a, b in zip(common, g.lead)), field.one, field)
    return result


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Gröbner basis of an ideal under a monomial order."""

    ring: Ring
    order: str
    basis: tuple[Polynomial, ...]

    @property
    def is_unit(self) -> bool:
        return any(g.is_constant for g in self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    def _entries(self) -> list[_Entry]:
        key = order_key(self.order)
        return [_Entry(_leading(g.terms, key), g.terms) for g in self.basis]

    def normal_form(self, f: Polynomial) -> Polynomial:
        """Return the unique normal form of ``f`` modulo the ideal.

        Raises:
            RingMismatchError: If ``f`` lives in another ring.
        """
        if f.ring != self.ring:
            raise RingMismatchError(str(f.ring), str(self.ring))
        key = order_key(self.order)
        return Polynomial(self.ring, _reduce(f.terms, self._entries(), self.ring.field, key))

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero

    def contains_all(self, gens: Iterable[Polynomial]) -> bool:
        return all(self.contains(g) for g in gens)

    def leading_monomials(self) -> list[Exponent]:
        key = order_key(self.order)
        return [_leading(g.terms, key) for g in self.basis]


def buchberger(
    gens: Sequence[Polynomial], ring: Ring | None = None, order: str = "grevlex"
) -> GroebnerBasis:
    """Compute the reduced Gröbner basis of the ideal generated by ``gens``.

    Pairs are selected by the normal strategy (smallest lcm degree) with ties
    broken lexicographically on the lcm exponent, so the run is reproducible.

    Args:
        gens: Generators, all in one ring.
        ring: Ring of the ideal; required when ``gens`` is empty.
        order: Monomial order name.

    Returns:
        Reduced monic basis sorted by descending leading monomial.

    Raises:
        RingMismatchError: If the generators live in different rings.
        ValueError: If neither generators nor a ring are given.
    """
    if ring is None:
        if not gens:
            raise ValueError("An empty generator list needs an explicit ring")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError(str(g.ring), str(ring))
    field = ring.field
    key = order_key(order)

    basis: list[_Entry] = []
    for g in gens:
        if g.is_zero:
            continue
        terms = _monic(g.terms, field, key)
        basis.append(_Entry(_leading(terms, key), terms))

    pairs: set[tuple[int, int]] = {
        (i, j) for j in range(len(basis)) for i in range(j)
    }

    def pair_key(pair: tuple[int, int]) -> tuple:
        common = lcm(basis[pair[0]].lead, basis[pair[1]].lead)
        return (sum(common), common, pair)

    reductions = 0
    while pairs:
        pair = min(pairs, key=pair_key)
        pairs.remove(pair)
        i, j = pair
        f, g = basis[i], basis[j]
        common = lcm(f.lead, g.lead)
        if all(a == 0 or b == 0 for a, b in zip(f.lead, g.lead)):
            continue
        if any(
            k not in pair
            and divides(basis[k].lead, common)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        remainder = _reduce(_spolynomial(f, g, field), basis, field, key)
        reductions += 1
        if not remainder:
            continue
        remainder = _monic(remainder, field, key)
        basis.append(_Entry(_leading(remainder, key), remainder))
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
        if not any(basis[new].lead):
            break

    logger.debug("Buchberger: %d reductions, %d raw elements", reductions, len(basis))
    return GroebnerBasis(ring, order, _reduced(basis, ring, field, key))


def _reduced(
    basis: list[_Entry], ring: Ring, field: Field, key: OrderKey
) -> tuple[Polynomial, ...]:
    if any(not any(entry.lead) for entry in basis):
        return (ring.one(),)
    minimal: list[_Entry] = []
    for index, entry in enumerate(basis):
        if any(
            divides(other.lead, entry.lead) and (other.lead != entry.lead or other_index < index)
            for other_index, other in enumerate(basis)
            if other_index != index
        ):
            continue
        minimal.append(entry)
    result: list[_Entry] = []
    for entry in minimal:
        others = [other for other in minimal if other is not entry]
        tail = {e: c for e, c in entry.terms.items() if e != entry.lead}
        reduced_tail = _reduce(tail, others, field, key)
        reduced_tail[entry.lead] = entry.terms[entry.lead]
        result.append(_Entry(entry.lead, reduced_tail))
    result.sort(key=lambda entry: key(entry.lead), reverse=True)
    return tuple(Polynomial(ring, entry.terms) for entry in result)


def normal_form(f: Polynomial, basis: GroebnerBasis) -> Polynomial:
    return basis.normal_form(f)


def member_of(f: Polynomial, basis: GroebnerBasis) -> tuple[bool, Polynomial]:
    """Decide ideal membership, returning the normal form as witness."""
    remainder = basis.normal_form(f)
    return remainder.is_zero, remainder


def ideal_contains(big: Sequence[Polynomial], small: Sequence[Polynomial], ring: Ring | None = None) -> bool:
    """Decide whether the ideal of ``small`` lies inside the ideal of ``big``."""
    ring = ring or (big[0].ring if big else small[0].ring if small else None)
    if ring is None:
        return True
    return buchberger(big, ring).contains_all(small)


def ideal_equal(a: Sequence[Polynomial], b: Sequence[Polynomial], ring: Ring | None = None) -> bool:
    """Decide equality of two ideals by double inclusion."""
    return ideal_contains(a, b, ring) and ideal_contains(b, a, ring)


def radical_contains(gens: Sequence[Polynomial], f: Polynomial) -> bool:
    """Decide f in rad(I) by testing 1 in I + <1 - t*f> for a fresh variable t."""
    ring = f.ring
    fresh = _fresh_variable(ring)
    extended = Ring(ring.field, (*ring.variables, fresh))
    t = extended.var(fresh)
    lifted = [g.to_ring(extended) for g in gens]
    lifted.append(extended.one() - t * f.to_ring(extended))
    return buchberger(lifted, extended).is_unit


def _fresh_variable(ring: Ring) -> str:
    fresh = "_t"
    while fresh in ring.variables:
        fresh = f"_{fresh}"
    return fresh


def localized_contains(
    gens: Sequence[Polynomial], unit: Polynomial, members: Iterable[Polynomial]
) -> bool:
    """Decide whether every member lies in I : unit^inf, that is in I once ``unit`` is inverted.

    Tests membership in I + <1 - t*unit> for a fresh variable t.
    """
    ring = unit.ring
    extended = Ring(ring.field, (*ring.variables, _fresh_variable(ring)))
    t = extended.var(extended.variables[-1])
    lifted = [g.to_ring(extended) for g in gens]
    lifted.append(extended.one() - t * unit.to_ring(extended))
    basis = buchberger(lifted, extended)
    return all(basis.contains(f.to_ring(extended)) for f in members)
