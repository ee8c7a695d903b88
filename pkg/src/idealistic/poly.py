"""Sparse multivariate polynomials over an exact coefficient field."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from fractions import Fraction
from math import comb
from typing import Any

from .exceptions import RingMismatchError, UnknownVariableError
from .field import Field, FieldElement
from .orders import Exponent, OrderKey, grevlex_key, order_key

INFINITY = math.inf
"""Order of the zero polynomial."""

Order = int | float


@dataclass(frozen=True)
class Ring:
    """Polynomial ring k[variables] with an optional (u; y) split.

    The split and the monomial order tag do not take part in equality, so
    polynomials of the same ring with different splits stay comparable.
    """

    field: Field
    variables: tuple[str, ...]
    y_variables: tuple[str, ...] = dataclass_field(default=(), compare=False)
    order: str = dataclass_field(default="grevlex", compare=False)

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"Duplicate variable names in {self.variables}")
        for name in self.y_variables:
            if name not in self.variables:
                raise UnknownVariableError(name, self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def u_variables(self) -> tuple[str, ...]:
        return tuple(v for v in self.variables if v not in self.y_variables)

    def index(self, name: str) -> int:
        """Return the position of a variable.

        Raises:
            UnknownVariableError: If ``name`` is not a ring variable.
        """
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(name, self.variables) from None

    def indices(self, names: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.index(name) for name in names)

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, value: Any) -> Polynomial:
        raw = self.field.coerce(value)
        if self.field.is_zero(raw):
            return self.zero()
        return Polynomial(self, {(0,) * self.nvars: raw})

    def var(self, name: str) -> Polynomial:
        exponent = [0] * self.nvars
        exponent[self.index(name)] = 1
        return Polynomial(self, {tuple(exponent): self.field.one})

    def gens(self) -> tuple[Polynomial, ...]:
        return tuple(self.var(name) for name in self.variables)

    def monomial(self, exponent: Exponent, coefficient: Any = 1) -> Polynomial:
        raw = self.field.coerce(coefficient)
        if self.field.is_zero(raw):
            return self.zero()
        return Polynomial(self, {tuple(exponent): raw})

    def from_terms(self, terms: Mapping[Exponent, Any]) -> Polynomial:
        """Build a polynomial from raw coefficients, dropping zeros."""
        return Polynomial(
            self,
            {
                tuple(e): c
                for e, c in ((e, self.field.coerce(c)) for e, c in terms.items())
                if not self.field.is_zero(c)
            },
        )

    def with_split(self, y_variables: Iterable[str]) -> Ring:
        return Ring(self.field, self.variables, tuple(y_variables), self.order)

    def subring(self, names: Iterable[str]) -> Ring:
        """Ring over the same field in the given variables, ring order kept."""
        wanted = set(names)
        for name in wanted:
            self.index(name)
        return Ring(self.field, tuple(v for v in self.variables if v in wanted))

    def renamed(self, mapping: Mapping[str, str]) -> Ring:
        return Ring(
            self.field,
            tuple(mapping.get(v, v) for v in self.variables),
            tuple(mapping.get(v, v) for v in self.y_variables),
            self.order,
        )

    def __str__(self) -> str:
        if self.y_variables:
            u = ", ".join(self.u_variables)
            return f"{self.field.name} [{u}; {', '.join(self.y_variables)}]"
        return f"{self.field.name} [{', '.join(self.variables)}]"


class Polynomial:
    """Immutable sparse polynomial: a map from exponent vectors to coefficients.

    Coefficients are raw values of ``ring.field``; zero coefficients are never
    stored.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict[Exponent, Any]) -> None:
        self.ring = ring
        self.terms = terms
        self._hash: int | None = None

    @property
    def field(self) -> Field:
        return self.ring.field

    def _coerce(self, other: Any) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(str(self.ring), str(other.ring))
            return other
        return self.ring.constant(other)

    def __add__(self, other: Any) -> Polynomial:
        other = self._coerce(other)
        f = self.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            if e in terms:
                value = f.add(terms[e], c)
                if f.is_zero(value):
                    del terms[e]
                else:
                    terms[e] = value
            else:
                terms[e] = c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        f = self.field
        return Polynomial(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> Polynomial:
        if not isinstance(other, Polynomial):
            return self.scale(self.field.coerce(other))
        other = self._coerce(other)
        f = self.field
        terms: dict[Exponent, Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                product = f.mul(c1, c2)
                if e in terms:
                    terms[e] = f.add(terms[e], product)
                else:
                    terms[e] = product
        return Polynomial(self.ring, {e: c for e, c in terms.items() if not f.is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise ValueError("Negative polynomial powers are not supported")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Exponent, Any]]:
        return iter(sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True))

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        return format_polynomial(self)

    def scale(self, raw: Any) -> Polynomial:
        f = self.field
        if f.is_zero(raw):
            return self.ring.zero()
        return Polynomial(self.ring, {e: f.mul(c, raw) for e, c in self.terms.items()})

    def mul_term(self, exponent: Exponent, raw: Any) -> Polynomial:
        f = self.field
        return Polynomial(
            self.ring,
            {
                tuple(a + b for a, b in zip(e, exponent)): f.mul(c, raw)
                for e, c in self.terms.items()
            },
        )

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_term(self) -> Any:
        return self.terms.get((0,) * self.ring.nvars, self.field.zero)

    def coefficient(self, exponent: Exponent) -> Any:
        return self.terms.get(tuple(exponent), self.field.zero)

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * self.ring.nvars
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(v for v, flag in zip(self.ring.variables, used) if flag)

    def homogeneous_part(self, degree: int) -> Polynomial:
        return Polynomial(
            self.ring, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def leading_term(self, order: str | OrderKey = "grevlex") -> tuple[Exponent, Any]:
        """Return the leading exponent and coefficient under ``order``.

        Raises:
            ValueError: If the polynomial is zero.
        """
        if not self.terms:
            raise ValueError("The zero polynomial has no leading term")
        key = order_key(order)
        exponent = max(self.terms, key=key)
        return exponent, self.terms[exponent]

    def monic(self, order: str | OrderKey = "grevlex") -> Polynomial:
        """Scale so that the leading coefficient under ``order`` is one."""
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        return self.scale(self.field.inv(c))

    def to_ring(self, target: Ring) -> Polynomial:
        """Re-embed into a ring that contains every variable this one uses.

        Raises:
            UnknownVariableError: If a used variable is missing from ``target``.
        """
        if target == self.ring:
            return Polynomial(target, self.terms)
        positions = []
        used = set(self.variables_used())
        for i, name in enumerate(self.ring.variables):
            if name in target.variables:
                positions.append((i, target.index(name)))
            elif name in used:
                raise UnknownVariableError(name, target.variables)
        terms = {}
        for e, c in self.terms.items():
            exponent = [0] * target.nvars
            for source, dest in positions:
                exponent[dest] = e[source]
            terms[tuple(exponent)] = c
        return Polynomial(target, terms)


def format_polynomial(f: Polynomial) -> str:
    """Render in the script syntax with terms in descending grevlex order."""
    if f.is_zero:
        return "0"
    field_ = f.field
    parts: list[str] = []
    for exponent, c in f:
        monomial = "*".join(
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(f.ring.variables, exponent)
            if e
        )
        negative = isinstance(c, Fraction) and c < 0
        magnitude = -c if negative else c
        if not monomial:
            body = field_.to_text(magnitude)
        elif magnitude == field_.one:
            body = monomial
        else:
            body = f"{field_.to_text(magnitude)}*{monomial}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


def order_at_origin(f: Polynomial) -> Order:
    """Return the minimal total degree of a term, or infinity for zero."""
    if f.is_zero:
        return INFINITY
    return min(sum(e) for e in f.terms)


def order_along_subspace(f: Polynomial, subspace: Iterable[str]) -> Order:
    """Return the order of ``f`` along the prime generated by ``subspace``.

    Raises:
        ValueError: If ``subspace`` is empty.
        UnknownVariableError: If a name is not a ring variable.
    """
    indices = f.ring.indices(subspace)
    if not indices:
        raise ValueError("The coordinate subspace needs at least one variable")
    if f.is_zero:
        return INFINITY
    return min(sum(e[i] for i in indices) for e in f.terms)


def hasse_derivative(f: Polynomial, n: Sequence[int]) -> Polynomial:
    """Apply the Hasse-Schmidt derivative D_N term by term.

    D_N(c * W^B) = c * binom(B, N) * W^(B - N), the binomials taken in the
    integers and then mapped into the coefficient field.
    """
    n = tuple(n)
    if len(n) != f.ring.nvars:
        raise ValueError(f"Multi-index {n} does not match {f.ring.nvars} variables")
    field_ = f.field
    terms: dict[Exponent, Any] = {}
    for e, c in f.terms.items():
        if any(a < b for a, b in zip(e, n)):
            continue
        binomial = 1
        for a, b in zip(e, n):
            binomial *= comb(a, b)
        value = field_.mul(c, field_.from_int(binomial))
        if field_.is_zero(value):
            continue
        exponent = tuple(a - b for a, b in zip(e, n))
        terms[exponent] = value
    return Polynomial(f.ring, terms)


def multi_index(ring: Ring, powers: Mapping[str, int]) -> Exponent:
    """Build an exponent vector from variable names."""
    exponent = [0] * ring.nvars
    for name, power in powers.items():
        exponent[ring.index(name)] = power
    return tuple(exponent)


def substitute(
    f: Polynomial,
    mapping: Mapping[str, Polynomial],
    target: Ring | None = None,
) -> Polynomial:
    """Compose ``f`` with a variable map into the ``target`` ring.

    Variables missing from ``mapping`` map to the same-named variable of
    ``target``.

    Raises:
        UnknownVariableError: If a mapped name is not a variable of ``f``'s ring
            or an unmapped variable is missing from ``target``.
    """
    target = target or f.ring
    for name in mapping:
        f.ring.index(name)
    images: list[Polynomial | None] = []
    used = set(f.variables_used())
    for name in f.ring.variables:
        if name in mapping:
            images.append(mapping[name].to_ring(target))
        elif name in used:
            images.append(target.var(name))
        else:
            images.append(None)
    powers: list[dict[int, Polynomial]] = [{} for _ in images]

    def power(i: int, e: int) -> Polynomial:
        cached = powers[i].get(e)
        if cached is None:
            image = images[i]
            assert image is not None
            cached = image**e
            powers[i][e] = cached
        return cached

    result = target.zero()
    for e, c in f.terms.items():
        term = target.constant(FieldElement(target.field, c))
        for i, x in enumerate(e):
            if x:
                term = term * power(i, x)
        result = result + term
    return result


def translate(f: Polynomial, point: Sequence[Any]) -> Polynomial:
    """Return f(x + point), moving ``point`` to the origin."""
    ring = f.ring
    if len(point) != ring.nvars:
        raise ValueError(f"Point {point} does not match {ring.nvars} variables")
    mapping = {
        name: ring.var(name) + ring.constant(value)
        for name, value in zip(ring.variables, point)
    }
    return substitute(f, mapping)


def is_integral(b: Fraction | int) -> bool:
    return Fraction(b).denominator == 1


def initial_form(f: Polynomial, b: Fraction | int) -> Polynomial:
    """Return in(f, b): the degree-b part when b is integral and ord(f) >= b.

    The result is zero when b is not an integer or when ord(f) > b.
    """
    if not is_integral(b):
        return f.ring.zero()
    degree = int(b)
    if order_at_origin(f) < degree:
        return f.ring.zero()
    return f.homogeneous_part(degree)


@dataclass(frozen=True)
class CoefficientExpansion:
    """f = sum(f_B(u) * y^B for |B| < b) + h with h in <y>^ceil(b)."""

    ring: Ring
    u_ring: Ring
    y_variables: tuple[str, ...]
    weight: Fraction
    coefficients: dict[Exponent, Polynomial]
    remainder: Polynomial

    def coefficient(self, b: Exponent) -> Polynomial:
        return self.coefficients.get(tuple(b), self.u_ring.zero())

    def reassemble(self) -> Polynomial:
        y_indices = self.ring.indices(self.y_variables)
        total = self.remainder
        for b, coefficient in self.coefficients.items():
            powers = {self.ring.variables[i]: e for i, e in zip(y_indices, b)}
            total = total + coefficient.to_ring(self.ring) * self.ring.monomial(
                multi_index(self.ring, powers)
            )
        return total


def coefficient_expansion(
    f: Polynomial,
    b: Fraction | int,
    y_variables: Sequence[str] | None = None,
) -> CoefficientExpansion:
    """Expand ``f`` in the y-variables up to (but excluding) degree b.

    Args:
        f: Polynomial to expand.
        b: Positive rational weight.
        y_variables: The y-part of the split; defaults to the ring's split.

    Returns:
        The expansion with u-coefficients keyed by y-exponent vectors.

    Raises:
        ValueError: If no y-variables are given or declared.
    """
    ring = f.ring
    y_names = tuple(y_variables) if y_variables is not None else ring.y_variables
    if not y_names:
        raise ValueError("Coefficient expansion needs a (u; y) split")
    y_indices = ring.indices(y_names)
    u_names = tuple(v for v in ring.variables if v not in y_names)
    u_indices = ring.indices(u_names)
    u_ring = ring.subring(u_names)
    threshold = math.ceil(Fraction(b))
    grouped: dict[Exponent, dict[Exponent, Any]] = {}
    remainder: dict[Exponent, Any] = {}
    for e, c in f.terms.items():
        y_exponent = tuple(e[i] for i in y_indices)
        if sum(y_exponent) >= threshold:
            remainder[e] = c
            continue
        u_exponent = tuple(e[i] for i in u_indices)
        grouped.setdefault(y_exponent, {})[u_exponent] = c
    return CoefficientExpansion(
        ring=ring,
        u_ring=u_ring,
        y_variables=y_names,
        weight=Fraction(b),
        coefficients={key: Polynomial(u_ring, terms) for key, terms in grouped.items()},
        remainder=Polynomial(ring, remainder),
    )


def _frobenius_root(f: Polynomial, q: int) -> Polynomial | None:
    field_ = f.field
    terms = {}
    for e, c in f.terms.items():
        if any(x % q for x in e):
            return None
        root = field_.nth_root(c, q)
        if root is None:
            return None
        terms[tuple(x // q for x in e)] = root
    return Polynomial(f.ring, terms)


def _separable_root(f: Polynomial, n: int) -> Polynomial | None:
    field_ = f.field
    lead, c = f.leading_term()
    if any(x % n for x in lead):
        return None
    c_root = field_.nth_root(c, n)
    if c_root is None:
        return None
    root_lead = tuple(x // n for x in lead)
    root = f.ring.monomial(root_lead, FieldElement(field_, c_root))
    denominator_lead = tuple(x * (n - 1) for x in root_lead)
    denominator_coeff = field_.mul(field_.from_int(n), field_.power(c_root, n - 1))
    previous = root_lead
    while True:
        difference = f - root**n
        if difference.is_zero:
            return root
        e, d = difference.leading_term()
        if any(a < b for a, b in zip(e, denominator_lead)):
            return None
        exponent = tuple(a - b for a, b in zip(e, denominator_lead))
        if grevlex_key(exponent) >= grevlex_key(previous):
            return None
        root = root + f.ring.monomial(
            exponent, FieldElement(field_, field_.div(d, denominator_coeff))
        )
        previous = exponent


def nth_root(f: Polynomial, n: int) -> Polynomial | None:
    """Return g with g^n = f, or ``None`` when f is not an n-th power.

    Frobenius roots handle the p-power part of n in characteristic p; the
    remaining part is found term by term from the leading monomial.
    """
    if n < 1:
        raise ValueError(f"Root index must be positive, got {n}")
    if f.is_zero or n == 1:
        return f
    p = f.field.characteristic
    while p and n % p == 0:
        root = _frobenius_root(f, p)
        if root is None:
            return None
        f, n = root, n // p
    if n == 1:
        return f
    return _separable_root(f, n)
