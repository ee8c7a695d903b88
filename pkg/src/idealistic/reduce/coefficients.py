"""Coefficient pairs D(E; u; y) and the delta invariant."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from ..pair import Component, Pair, PointSpec, ord_at
from ..poly import INFINITY, Ring, coefficient_expansion


def split_of(ring: Ring, y_variables: Sequence[str] | None) -> tuple[str, ...]:
    """Resolve the y-part of a split, falling back to the ring's declaration.

    Raises:
        ValueError: If neither an explicit nor a declared split exists.
    """
    names = tuple(y_variables) if y_variables is not None else ring.y_variables
    if not names:
        raise ValueError("A (u; y) split is required")
    ring.indices(names)
    return names


def coefficient_pair(pair: Pair, y_variables: Sequence[str] | None = None) -> Pair:
    """Intersect (f_B(u), b - |B|) over every generator f and every |B| < b.

    Zero coefficients are dropped and repeated components kept once. The
    result lives on the subring in the u-variables; an empty pair marks a
    component already contained in <y>^b.
    """
    names = split_of(pair.ring, y_variables)
    u_ring = pair.ring.subring(v for v in pair.ring.variables if v not in names)
    components: dict[Component, None] = {}
    for component in pair.components:
        for f in component.generators:
            expansion = coefficient_expansion(f, component.weight, names)
            for b, coefficient in sorted(expansion.coefficients.items(), key=lambda kv: (sum(kv[0]), kv[0])):
                if coefficient.is_zero:
                    continue
                weight = component.weight - sum(b)
                components.setdefault(Component((coefficient,), weight, True), None)
    return Pair(u_ring, tuple(components))


def delta(pair: Pair, y_variables: Sequence[str] | None = None) -> Fraction | float:
    """Order at the origin of the coefficient pair; infinite when it is empty."""
    coefficients = coefficient_pair(pair, y_variables)
    if coefficients.is_empty:
        return INFINITY
    if not coefficients.ring.variables:
        # Only nonzero constants remain: nothing is singular.
        return Fraction(0)
    return ord_at(coefficients, PointSpec.origin(coefficients.ring))
