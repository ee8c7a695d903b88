"""Idealistic exponents: pairs, blowups, ridges and the reduction to lower dimension."""

from .chart import BoundaryDivisor, Chart, blowup
from .detres import GenericMatrixSpec, resolve_determinantal
from .field import FunctionField, PrimeField, Rationals
from .pair import Component, Pair, PointSpec, ord_at
from .poly import Polynomial, Ring
from .script import parse
from .session import Session

__all__ = [
    "BoundaryDivisor",
    "Chart",
    "Component",
    "FunctionField",
    "GenericMatrixSpec",
    "Pair",
    "PointSpec",
    "Polynomial",
    "PrimeField",
    "Rationals",
    "Ring",
    "Session",
    "blowup",
    "ord_at",
    "parse",
    "resolve_determinantal",
]
