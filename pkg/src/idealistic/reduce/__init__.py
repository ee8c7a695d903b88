"""Equivalence moves, ridge decomposition and the reduction to lower dimension."""

from .classify import Case, MaximalContactChain, ReductionReport, classify, maximal_contact_chain
from .coefficients import coefficient_pair, delta
from .decomposition import Decomposition, Resolved, ridge_decomposition
from .invariant import (
    InvariantTruncation,
    MonomialFactorization,
    companion_pair,
    invariant_truncation,
    monomial_factorization,
)
from .moves import (
    CertificateBuilder,
    CoeffFunctor,
    Diff,
    Drop,
    Duplicate,
    Eliminate,
    Flatten,
    MaxContactSplit,
    Move,
    MoveCertificate,
    Normalize,
    Power,
    Product,
    Root,
    Split,
    SumSameWeight,
    apply_move,
    transport_certificate,
)

__all__ = [
    "Case",
    "CertificateBuilder",
    "CoeffFunctor",
    "Decomposition",
    "Diff",
    "Drop",
    "Duplicate",
    "Eliminate",
    "Flatten",
    "InvariantTruncation",
    "MaxContactSplit",
    "MaximalContactChain",
    "MonomialFactorization",
    "Move",
    "MoveCertificate",
    "Normalize",
    "Power",
    "Product",
    "ReductionReport",
    "Resolved",
    "Root",
    "Split",
    "SumSameWeight",
    "apply_move",
    "classify",
    "coefficient_pair",
    "companion_pair",
    "delta",
    "invariant_truncation",
    "maximal_contact_chain",
    "monomial_factorization",
    "ridge_decomposition",
    "transport_certificate",
]
