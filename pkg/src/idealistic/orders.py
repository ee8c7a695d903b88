"""Monomial orders as sort keys on exponent vectors.

A larger key means a larger monomial, so ``max(terms, key=...)`` picks the
leading monomial.
"""

from collections.abc import Callable, Sequence

Exponent = tuple[int, ...]
OrderKey = Callable[[Exponent], tuple]


def grevlex_key(exponent: Exponent) -> tuple:
    return (sum(exponent), tuple(-e for e in reversed(exponent)))


def deglex_key(exponent: Exponent) -> tuple:
    return (sum(exponent), exponent)


def lex_key(exponent: Exponent) -> tuple:
    return exponent


def permuted_lex(permutation: Sequence[int]) -> OrderKey:
    """Lexicographic order comparing variables in the given index order."""
    indices = tuple(permutation)

    def key(exponent: Exponent) -> tuple:
        return tuple(exponent[i] for i in indices)

    return key


ORDERS: dict[str, OrderKey] = {
    "grevlex": grevlex_key,
    "deglex": deglex_key,
    "lex": lex_key,
}


def order_key(order: str | OrderKey) -> OrderKey:
    """Resolve an order name or pass a key function through.

    Raises:
        ValueError: If ``order`` names an unknown order.
    """
    if callable(order):
        return order
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(
            f"Unknown monomial order '{order}'. Choose from {', '.join(ORDERS)}"
        ) from None


def divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))
