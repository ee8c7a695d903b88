"""Exact coefficient fields: the rationals, prime fields and F_p(lam)."""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from typing_extensions import override

from .exceptions import (
    CharacteristicError,
    FieldDivisionByZeroError,
    FieldMismatchError,
)

UPoly = tuple[int, ...]
"""Univariate polynomial over F_p, coefficients from degree 0 upwards."""

LAMBDA = "lam"


def _utrim(coeffs: list[int] | tuple[int, ...], p: int) -> UPoly:
    values = [c % p for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


def _uadd(a: UPoly, b: UPoly, p: int) -> UPoly:
    size = max(len(a), len(b))
    return _utrim(
        [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)],
        p,
    )


def _uscale(a: UPoly, c: int, p: int) -> UPoly:
    return _utrim([x * c for x in a], p)


def _umul(a: UPoly, b: UPoly, p: int) -> UPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _utrim(out, p)


def _udivmod(a: UPoly, b: UPoly, p: int) -> tuple[UPoly, UPoly]:
    if not b:
        raise FieldDivisionByZeroError(f"F_{p}[{LAMBDA}]")
    remainder = list(a)
    inverse = pow(b[-1], -1, p)
    quotient = [0] * max(len(a) - len(b) + 1, 0)
    for shift in range(len(a) - len(b), -1, -1):
        c = remainder[shift + len(b) - 1] * inverse % p
        quotient[shift] = c
        if c:
            for j, y in enumerate(b):
                remainder[shift + j] = (remainder[shift + j] - c * y) % p
    return _utrim(quotient, p), _utrim(remainder, p)


def _umonic(a: UPoly, p: int) -> UPoly:
    if not a:
        return a
    return _uscale(a, pow(a[-1], -1, p), p)


def _ugcd(a: UPoly, b: UPoly, p: int) -> UPoly:
    while b:
        a, b = b, _udivmod(a, b, p)[1]
    return _umonic(a, p)


def _upow(a: UPoly, n: int, p: int) -> UPoly:
    result: UPoly = (1,)
    base = a
    while n:
        if n & 1:
            result = _umul(result, base, p)
        base = _umul(base, base, p)
        n >>= 1
    return result


def _utext(a: UPoly) -> str:
    terms = []
    for degree in range(len(a) - 1, -1, -1):
        c = a[degree]
        if not c:
            continue
        if degree == 0:
            terms.append(str(c))
            continue
        power = LAMBDA if degree == 1 else f"{LAMBDA}^{degree}"
        terms.append(power if c == 1 else f"{c}*{power}")
    return " + ".join(terms) if terms else "0"


def _int_nth_root(value: int, n: int) -> int | None:
    """Return the exact non-negative integer n-th root of ``value`` if it exists."""
    if value < 0:
        return None
    low, high = 0, 1
    while high**n <= value:
        high *= 2
    while low < high:
        middle = (low + high + 1) // 2
        if middle**n <= value:
            low = middle
        else:
            high = middle - 1
    return low if low**n == value else None


class Field(ABC):
    """Descriptor of a coefficient field operating on raw coefficient values.

    Polynomials store raw values (``Fraction``, ``int`` or a pair of univariate
    polynomials) and delegate every arithmetic step to their field descriptor.
    ``FieldElement`` wraps a raw value for user-facing arithmetic.
    """

    characteristic: int

    @property
    @abstractmethod
    def name(self) -> str:
        """Human-readable field name used in headers and error messages."""

    @property
    @abstractmethod
    def zero(self) -> Any: ...

    @property
    @abstractmethod
    def one(self) -> Any: ...

    @property
    def is_perfect(self) -> bool:
        return True

    @abstractmethod
    def from_int(self, value: int) -> Any: ...

    @abstractmethod
    def from_fraction(self, value: Fraction) -> Any: ...

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def neg(self, a: Any) -> Any: ...

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def inv(self, a: Any) -> Any: ...

    @abstractmethod
    def to_text(self, a: Any) -> str:
        """Render a raw value in the script literal syntax."""

    @abstractmethod
    def nth_root(self, a: Any, n: int) -> Any | None:
        """Return r with r^n = a when such r exists in the field."""

    @abstractmethod
    def sample(self, rng: random.Random) -> Any:
        """Draw a small random raw value."""

    def is_zero(self, a: Any) -> bool:
        return a == self.zero

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def div(self, a: Any, b: Any) -> Any:
        return self.mul(a, self.inv(b))

    def power(self, a: Any, n: int) -> Any:
        if n < 0:
            return self.power(self.inv(a), -n)
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def coerce(self, value: Any) -> Any:
        """Convert an int, Fraction or FieldElement into a raw value of this field.

        Raises:
            FieldMismatchError: If ``value`` is an element of another field.
        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(value.field.name, self.name)
            return value.value
        if isinstance(value, bool):
            raise TypeError("bool is not a field value")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        return value

    def pth_root(self, a: Any) -> Any | None:
        """Return r with r^p = a, or ``None`` when a is not a p-th power.

        Raises:
            CharacteristicError: If the field has characteristic zero.
        """
        if self.characteristic == 0:
            raise CharacteristicError("pthRoot", 0)
        coefficients = self.p_basis(a, self.characteristic)
        if any(not self.is_zero(c) for c in coefficients[1:]):
            return None
        return coefficients[0]

    def p_basis(self, a: Any, q: int) -> list[Any]:
        """Decompose a = sum(c_i^q * lam^i for i < q) and return the c_i.

        Over a perfect field the decomposition is ``[a^(1/q), 0, ..., 0]``.

        Raises:
            CharacteristicError: If the field has characteristic zero.
        """
        if self.characteristic == 0:
            raise CharacteristicError("pBasisCoefficients", 0)
        root = self.nth_root(a, q)
        return [root] + [self.zero] * (q - 1)

    def __call__(self, value: Any) -> FieldElement:
        return FieldElement(self, self.coerce(value))


@dataclass(frozen=True)
class Rationals(Field):
    """The field of rational numbers."""

    characteristic: int = 0

    @property
    @override
    def name(self) -> str:
        return "Q"

    @property
    @override
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    @override
    def one(self) -> Fraction:
        return Fraction(1)

    @override
    def from_int(self, value: int) -> Fraction:
        return Fraction(value)

    @override
    def from_fraction(self, value: Fraction) -> Fraction:
        return value

    @override
    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    @override
    def neg(self, a: Fraction) -> Fraction:
        return -a

    @override
    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    @override
    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise FieldDivisionByZeroError(self.name)
        return 1 / a

    @override
    def to_text(self, a: Fraction) -> str:
        return str(a)

    @override
    def nth_root(self, a: Fraction, n: int) -> Fraction | None:
        if a < 0:
            if n % 2 == 0:
                return None
            root = self.nth_root(-a, n)
            return None if root is None else -root
        numerator = _int_nth_root(a.numerator, n)
        denominator = _int_nth_root(a.denominator, n)
        if numerator is None or denominator is None:
            return None
        return Fraction(numerator, denominator)

    @override
    def sample(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(-5, 5), rng.randint(1, 4))


@dataclass(frozen=True)
class PrimeField(Field):
    """The prime field F_p with elements stored as integers in [0, p)."""

    characteristic: int

    def __post_init__(self) -> None:
        if self.characteristic < 2:
            raise ValueError(f"Prime field needs p >= 2, got {self.characteristic}")

    @property
    @override
    def name(self) -> str:
        return f"Fp({self.characteristic})"

    @property
    @override
    def zero(self) -> int:
        return 0

    @property
    @override
    def one(self) -> int:
        return 1

    @override
    def from_int(self, value: int) -> int:
        return value % self.characteristic

    @override
    def from_fraction(self, value: Fraction) -> int:
        p = self.characteristic
        if value.denominator % p == 0:
            raise FieldDivisionByZeroError(self.name)
        return value.numerator * pow(value.denominator, -1, p) % p

    @override
    def add(self, a: int, b: int) -> int:
        return (a + b) % self.characteristic

    @override
    def neg(self, a: int) -> int:
        return -a % self.characteristic

    @override
    def mul(self, a: int, b: int) -> int:
        return a * b % self.characteristic

    @override
    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionByZeroError(self.name)
        return pow(a, -1, self.characteristic)

    @override
    def to_text(self, a: int) -> str:
        return str(a)

    @override
    def nth_root(self, a: int, n: int) -> int | None:
        p = self.characteristic
        for candidate in range(p):
            if pow(candidate, n, p) == a:
                return candidate
        return None

    @override
    def sample(self, rng: random.Random) -> int:
        return rng.randrange(self.characteristic)


FunctionValue = tuple[UPoly, UPoly]


@dataclass(frozen=True)
class FunctionField(Field):
    """The imperfect field F_p(lam) of rational functions in one parameter.

    Values are reduced fractions ``(numerator, denominator)`` of univariate
    polynomials over F_p with a monic denominator.
    """

    characteristic: int

    def __post_init__(self) -> None:
        if self.characteristic < 2:
            raise ValueError(f"Function field needs p >= 2, got {self.characteristic}")

    @property
    @override
    def name(self) -> str:
        return f"Fp({self.characteristic}, {LAMBDA})"

    @property
    @override
    def zero(self) -> FunctionValue:
        return ((), (1,))

    @property
    @override
    def one(self) -> FunctionValue:
        return ((1,), (1,))

    @property
    @override
    def is_perfect(self) -> bool:
        return False

    @property
    def generator(self) -> FunctionValue:
        """The transcendental parameter lam."""
        return ((0, 1), (1,))

    def normalize(self, numerator: UPoly, denominator: UPoly) -> FunctionValue:
        """Reduce a fraction and make its denominator monic."""
        p = self.characteristic
        numerator = _utrim(numerator, p)
        denominator = _utrim(denominator, p)
        if not denominator:
            raise FieldDivisionByZeroError(self.name)
        if not numerator:
            return self.zero
        common = _ugcd(numerator, denominator, p)
        numerator = _udivmod(numerator, common, p)[0]
        denominator = _udivmod(denominator, common, p)[0]
        scale = pow(denominator[-1], -1, p)
        return _uscale(numerator, scale, p), _uscale(denominator, scale, p)

    def from_polynomials(
        self, numerator: list[int], denominator: list[int]
    ) -> FunctionValue:
        """Build a value from integer coefficient lists (degree 0 first)."""
        return self.normalize(tuple(numerator), tuple(denominator))

    @override
    def from_int(self, value: int) -> FunctionValue:
        return self.normalize((value,), (1,))

    @override
    def from_fraction(self, value: Fraction) -> FunctionValue:
        return self.normalize((value.numerator,), (value.denominator,))

    @override
    def add(self, a: FunctionValue, b: FunctionValue) -> FunctionValue:
        p = self.characteristic
        if a[1] == b[1]:
            return self.normalize(_uadd(a[0], b[0], p), a[1])
        return self.normalize(
            _uadd(_umul(a[0], b[1], p), _umul(b[0], a[1], p), p),
            _umul(a[1], b[1], p),
        )

    @override
    def neg(self, a: FunctionValue) -> FunctionValue:
        return _uscale(a[0], -1, self.characteristic), a[1]

    @override
    def mul(self, a: FunctionValue, b: FunctionValue) -> FunctionValue:
        p = self.characteristic
        return self.normalize(_umul(a[0], b[0], p), _umul(a[1], b[1], p))

    @override
    def inv(self, a: FunctionValue) -> FunctionValue:
        if not a[0]:
            raise FieldDivisionByZeroError(self.name)
        return self.normalize(a[1], a[0])

    @override
    def to_text(self, a: FunctionValue) -> str:
        numerator, denominator = a
        text = _utext(numerator)
        if denominator == (1,):
            return text if sum(1 for c in numerator if c) <= 1 else f"({text})"
        return f"({text})/({_utext(denominator)})"

    @override
    def p_basis(self, a: FunctionValue, q: int) -> list[FunctionValue]:
        p = self.characteristic
        if q == 1:
            return [a]
        if q % p:
            raise ValueError(f"p-basis exponent must be a power of {p}, got {q}")
        numerator, denominator = a
        # a = N D^(p-1) / D^p, then split N D^(p-1) by exponent residue mod p
        shifted = _umul(numerator, _upow(denominator, p - 1, p), p)
        first: list[FunctionValue] = []
        for residue in range(p):
            part = tuple(shifted[residue::p])
            first.append(self.normalize(part, denominator))
        if q == p:
            return first
        coefficients: list[FunctionValue] = [self.zero] * q
        for residue, c in enumerate(first):
            for j, d in enumerate(self.p_basis(c, q // p)):
                coefficients[residue + j * p] = d
        return coefficients

    @override
    def nth_root(self, a: FunctionValue, n: int) -> FunctionValue | None:
        p = self.characteristic
        while n % p == 0:
            root = self.pth_root(a)
            if root is None:
                return None
            a, n = root, n // p
        if n == 1:
            return a
        numerator, denominator = a
        if len(numerator) <= 1 and denominator == (1,):
            constant = numerator[0] if numerator else 0
            base = PrimeField(p).nth_root(constant, n)
            return None if base is None else self.from_int(base)
        return None

    @override
    def sample(self, rng: random.Random) -> FunctionValue:
        p = self.characteristic
        numerator = tuple(rng.randrange(p) for _ in range(rng.randint(0, 3)))
        denominator = tuple(rng.randrange(p) for _ in range(rng.randint(0, 2))) + (1,)
        return self.normalize(numerator, denominator)


@dataclass(frozen=True, slots=True)
class FieldElement:
    """Immutable field element bound to its field descriptor."""

    field: Field
    value: Any

    def _other(self, other: Any) -> Any:
        return self.field.coerce(other)

    def __add__(self, other: Any) -> FieldElement:
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other: Any) -> FieldElement:
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other: Any) -> FieldElement:
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other: Any) -> FieldElement:
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> FieldElement:
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other: Any) -> FieldElement:
        return FieldElement(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, exponent: int) -> FieldElement:
        return FieldElement(self.field, self.field.power(self.value, exponent))

    def __bool__(self) -> bool:
        return not self.field.is_zero(self.value)

    def __str__(self) -> str:
        return self.field.to_text(self.value)

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    def pth_root(self) -> FieldElement | None:
        """Return the p-th root of this element, or ``None`` outside k^p."""
        root = self.field.pth_root(self.value)
        return None if root is None else FieldElement(self.field, root)

    def p_basis(self, q: int) -> list[FieldElement]:
        """Return the coefficients c_i of self = sum(c_i^q * lam^i)."""
        return [FieldElement(self.field, c) for c in self.field.p_basis(self.value, q)]


def lam(field: FunctionField) -> FieldElement:
    """Return the transcendental parameter of F_p(lam) as an element."""
    return FieldElement(field, field.generator)
