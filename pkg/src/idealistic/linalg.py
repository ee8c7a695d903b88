"""Exact row reduction over a coefficient field."""

from collections.abc import Sequence
from typing import Any

from .field import Field


def rref(rows: Sequence[Sequence[Any]], field: Field) -> tuple[list[list[Any]], list[int]]:
    """Bring a matrix of raw values to reduced row echelon form.

    Returns:
        The nonzero reduced rows and the pivot column of each row.
    """
    matrix = [list(row) for row in rows]
    pivots: list[int] = []
    if not matrix:
        return [], pivots
    width = len(matrix[0])
    current = 0
    for column in range(width):
        pivot_row = next(
            (i for i in range(current, len(matrix)) if not field.is_zero(matrix[i][column])),
            None,
        )
        if pivot_row is None:
            continue
        matrix[current], matrix[pivot_row] = matrix[pivot_row], matrix[current]
        inverse = field.inv(matrix[current][column])
        matrix[current] = [field.mul(x, inverse) for x in matrix[current]]
        for i in range(len(matrix)):
            if i == current or field.is_zero(matrix[i][column]):
                continue
            factor = matrix[i][column]
            matrix[i] = [
                field.sub(x, field.mul(factor, y))
                for x, y in zip(matrix[i], matrix[current])
            ]
        pivots.append(column)
        current += 1
        if current == len(matrix):
            break
    return matrix[:current], pivots


def kernel(columns: Sequence[Sequence[Any]], field: Field) -> list[list[Any]]:
    """Return a basis of {c : sum(c_j * columns[j]) = 0}.

    Each basis vector has a one in a free column and zeros in the other free
    columns; vectors come ordered by their free column.
    """
    n = len(columns)
    if n == 0:
        return []
    height = len(columns[0])
    if height == 0:
        return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    rows = [[columns[j][i] for j in range(n)] for i in range(height)]
    reduced, pivots = rref(rows, field)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        vector = [field.zero] * n
        vector[f] = field.one
        for row, pivot in zip(reduced, pivots):
            vector[pivot] = field.neg(row[f])
        basis.append(vector)
    return basis


def rank(rows: Sequence[Sequence[Any]], field: Field) -> int:
    return len(rref(rows, field)[1])


def in_span(vectors: Sequence[Sequence[Any]], candidate: Sequence[Any], field: Field) -> bool:
    """Decide whether ``candidate`` is a linear combination of ``vectors``."""
    if all(field.is_zero(x) for x in candidate):
        return True
    if not vectors:
        return False
    return rank([*vectors, candidate], field) == rank(vectors, field)
