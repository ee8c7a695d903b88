from fractions import Fraction

import pytest

from idealistic.chart import Chart
from idealistic.exceptions import CertificateReplayError, MoveRefusedError
from idealistic.field import FunctionField, PrimeField, Rationals, lam
from idealistic.pair import Component, Pair
from idealistic.poly import INFINITY, Ring
from idealistic.reduce import (
    Case,
    CertificateBuilder,
    Diff,
    Drop,
    MoveCertificate,
    Power,
    Resolved,
    Root,
    apply_move,
    classify,
    coefficient_pair,
    companion_pair,
    delta,
    invariant_truncation,
    maximal_contact_chain,
    monomial_factorization,
    ridge_decomposition,
    transport_certificate,
)
from idealistic.script import parse_polynomial


def _contact_example() -> Pair:
    ring = Ring(Rationals(), ("y", "z", "x"), ("x",))
    y, z, x = ring.gens()
    return Pair.single([x**2 + (y + z) ** 3 + z**5], 2)


def _xy() -> Ring:
    return Ring(Rationals(), ("x", "y"))


def test_coefficient_pair_keeps_nonzero_coefficients() -> None:
    pair = _contact_example()
    coefficients = coefficient_pair(pair)
    u_ring = coefficients.ring
    y, z = u_ring.gens()
    assert u_ring.variables == ("y", "z")
    assert coefficients.weights == (Fraction(2),)
    assert coefficients.generators() == ((y + z) ** 3 + z**5,)


def test_coefficient_pair_of_pure_y_power_is_empty() -> None:
    ring = Ring(Rationals(), ("u", "y"), ("y",))
    assert coefficient_pair(Pair.single([ring.var("y") ** 2], 2)).is_empty
    assert delta(Pair.single([ring.var("y") ** 2], 2)) == INFINITY


def test_coefficient_pair_needs_split() -> None:
    with pytest.raises(ValueError):
        coefficient_pair(Pair.single([_xy().var("x") ** 2], 2))


@pytest.mark.parametrize(
    "split, expected",
    [
        # declared split
        (None, Fraction(3, 2)),
        # explicit split on the same variable
        (("x",), Fraction(3, 2)),
    ],
)
def test_delta(split, expected) -> None:
    assert delta(_contact_example(), split) == expected


def test_maximal_contact_chain() -> None:
    chain = maximal_contact_chain(_contact_example())
    assert chain.deltas == (Fraction(3, 2), Fraction(5, 3))
    assert [str(g) for g in chain.final.generators()] == ["z"]
    assert chain.final.weights == (Fraction(1),)


def test_power_then_root_replays() -> None:
    ring = _xy()
    x, y = ring.gens()
    source = Pair.single([x + y], 1)
    builder = CertificateBuilder(source)
    squared = builder.apply(Power(0, 2))
    assert squared.generators() == ((x + y) ** 2,)
    assert squared.weights == (Fraction(2),)
    back = builder.apply(Root(0, 2))
    assert back.generators() == (x + y,)
    certificate = builder.certificate()
    assert certificate.replay() == back
    assert certificate.describe() == ["1. Power(0, 2)", "2. Root(0, 2)"]


def test_root_of_non_power_is_refused() -> None:
    ring = _xy()
    x, y = ring.gens()
    with pytest.raises(MoveRefusedError):
        Root(0, 2).apply(Pair.single([x**2 + y**3], 2))


def test_tampered_certificate_fails_replay() -> None:
    ring = _xy()
    x, y = ring.gens()
    source = Pair.single([x + y], 1)
    with pytest.raises(CertificateReplayError):
        MoveCertificate(source, (Root(0, 2),), source).replay()
    _, certificate = apply_move(source, Power(0, 3))
    with pytest.raises(CertificateReplayError):
        MoveCertificate(source, certificate.moves, source).replay()


def test_drop_dominated_component() -> None:
    ring = _xy()
    x, _ = ring.gens()
    # ord(x) >= 1 forces ord(x^2) >= 1, never the other way round
    pair = Pair(ring, (Component((x**2,), 1), Component((x,), 1)))
    assert Drop(0, 1).apply(pair) == Pair(ring, (Component((x,), 1),))
    with pytest.raises(MoveRefusedError):
        Drop(1, 0).apply(pair)
    # (x^3, 2) is not implied by (x, 1)
    with pytest.raises(MoveRefusedError):
        Drop(0, 1).apply(Pair(ring, (Component((x**3,), 2), Component((x,), 1))))


def test_diff_appends_derivative_component() -> None:
    ring = _xy()
    x, _ = ring.gens()
    pair = Diff(0, (1, 0)).apply(Pair.single([x**2], 2))
    assert pair.weights == (Fraction(2), Fraction(1))
    assert pair.components[1].generators == (2 * x,)
    with pytest.raises(MoveRefusedError):
        Diff(0, (2, 0)).apply(Pair.single([x**2], 2))


def test_transport_certificate_to_coefficient_pairs() -> None:
    ring = Ring(Rationals(), ("u", "y"), ("y",))
    u, y = ring.gens()
    _, certificate = apply_move(Pair.single([y + u**2], 1), Power(0, 2))
    transported = transport_certificate(certificate)
    assert transported.source.generators() == (transported.source.ring.var("u") ** 2,)
    assert sorted(transported.target.weights) == [Fraction(1), Fraction(2)]
    assert transported.replay() == transported.target


def test_ridge_decomposition_splits_off_hyperplane() -> None:
    ring = _xy()
    x, y = ring.gens()
    decomposition = ridge_decomposition(Pair.single([x**2 + y**3], 2))
    assert not isinstance(decomposition, Resolved)
    assert decomposition.coordinates.is_identity
    assert decomposition.lifts[0].generators == (x,)
    assert decomposition.lifts[0].weight == 1
    assert decomposition.residual.generators() == (y**3,)
    assert decomposition.certificate.replay() == decomposition.certificate.target


@pytest.mark.parametrize("p", [2, 3])
def test_ridge_decomposition_of_running_example(p) -> None:
    ring = Ring(PrimeField(p), ("x", "y", "z", "t", "u", "v"))
    x, y, z, t, u, v = ring.gens()
    q = p * p
    f3 = t ** (q + 2) - u ** (q + 1) * v
    pair = Pair.single(
        [x * y**q - x * t**3 * u**q, z ** (q - p + 1) * (t + u) ** p - v ** (p * q), f3],
        q + 1,
        standard_basis=True,
    )
    decomposition = ridge_decomposition(pair)
    assert not isinstance(decomposition, Resolved)
    assert decomposition.coordinates.new_ring.variables == ("x", "y", "z", "w", "u", "v")
    lifts = {(c.generators, c.weight) for c in decomposition.lifts}
    assert lifts == {
        ((x,), 1),
        ((z,), 1),
        (((t + u) ** p,), p),
        ((y**q - t**3 * u**q,), q),
    }
    # what is left has order above the weight
    assert len(decomposition.residual.components) == 1
    assert set(decomposition.residual.generators()) == {v ** (p * q), f3}
    assert decomposition.residual.weights == (Fraction(q + 1),)


@pytest.mark.parametrize("p", [2, 3])
def test_ridge_decomposition_over_imperfect_field(p) -> None:
    field = FunctionField(p)
    ring = Ring(field, ("x", "y", "z", "t", "u", "v"))
    x, y, z, t, u, v = ring.gens()
    q = p * p
    s = x**p + y**p * lam(field)
    pair = Pair.single(
        [s * z ** (q - p) + t * u * v**q, z**q + u**q + s**p * lam(field) + v ** (q + 1)],
        q,
        standard_basis=True,
    )
    decomposition = ridge_decomposition(pair)
    assert not isinstance(decomposition, Resolved)
    assert decomposition.coordinates.is_identity
    lifts = {(c.generators, c.weight) for c in decomposition.lifts}
    assert lifts == {((s,), p), ((z**p,), p), ((u**q + v ** (q + 1),), q)}
    # lam is no p-th power, so s stays a single lift of weight p
    assert decomposition.residual.generators() == (t * u * v**q,)
    assert decomposition.residual.weights == (Fraction(q),)
    assert decomposition.certificate.replay() == decomposition.certificate.target


def test_ridge_decomposition_outside_singular_locus() -> None:
    ring = _xy()
    pair = Pair.single([ring.var("x")], 2)
    assert isinstance(ridge_decomposition(pair), Resolved)
    assert isinstance(classify(pair), Resolved)


def test_classify_maximal_contact_in_characteristic_three() -> None:
    ring = Ring(PrimeField(3), ("u1", "u2", "u3", "y"), ("y",))
    u1, u2, u3, y = ring.gens()
    report = classify(Pair.single([y**2 + u1**3 + u2**4 + u3**5], 2))
    assert not isinstance(report, Resolved)
    assert report.case is Case.MAXIMAL_CONTACT
    assert report.t == report.s == 1
    assert report.y_variables == ("y",)
    assert report.coefficients is not None
    assert report.coefficients.weights == (Fraction(2),)
    assert report.contact_certificate is not None
    assert report.contact_certificate.replay() == report.contact_certificate.target


def test_classify_no_reduction_in_characteristic_two() -> None:
    ring = Ring(PrimeField(2), ("u1", "u2", "y"), ("y",))
    u1, u2, y = ring.gens()
    report = classify(Pair.single([y**4 + u1**5 + u2**7], 4))
    assert not isinstance(report, Resolved)
    assert report.case is Case.NO_REDUCTION
    assert report.t == 0
    assert report.exponents[0] > 0


def test_classify_product_of_squares_gives_two_contact_variables() -> None:
    ring = Ring(PrimeField(2), ("u1", "u2", "u3", "y1", "y2"))
    u1, u2, u3, y1, y2 = ring.gens()
    report = classify(Pair.single([y1**2 * y2**2 + u1**5 + u2**2 * u3**3], 4))
    assert not isinstance(report, Resolved)
    assert report.case is Case.MAXIMAL_CONTACT
    assert report.t == report.s == 2
    assert set(report.y_variables) == {"y1", "y2"}


def test_classify_generic_determinant_has_full_contact() -> None:
    ring = Ring(Rationals(), ("x11", "x12", "x21", "x22"))
    x11, x12, x21, x22 = ring.gens()
    report = classify(Pair.single([x11 * x22 - x12 * x21], 2, standard_basis=True))
    assert not isinstance(report, Resolved)
    assert report.case is Case.MAXIMAL_CONTACT
    assert report.t == 4


@pytest.mark.parametrize(
    "characteristic, generator, weight, expected",
    [
        # one stage of maximal contact
        (3, "y^2 + u1^3 + u2^4 + u3^5", 2, "(2, 0; 3/2)"),
        # the only lift is y^4 + ..., not a square
        (2, "y^4 + u1^5 + u2^7", 4, "(4, 0)"),
    ],
)
def test_invariant_truncation(characteristic, generator, weight, expected) -> None:
    ring = Ring(PrimeField(characteristic), ("u1", "u2", "u3", "y"), ("y",))
    f = parse_polynomial(generator, ring)
    truncation = invariant_truncation(Chart.root(ring), Pair.single([f], weight))
    assert str(truncation) == expected


def test_invariant_truncation_rejects_zero_depth() -> None:
    ring = _xy()
    with pytest.raises(ValueError):
        invariant_truncation(Chart.root(ring), Pair.single([ring.var("x") ** 2], 2), depth=0)


def test_monomial_factorization() -> None:
    ring = Ring(Rationals(), ("u", "v"))
    u, v = ring.gens()
    factorization = monomial_factorization(Pair.single([u * v**2], 2), ("v",))
    assert factorization.monomial == v**2
    assert factorization.rest == (u,)
    assert factorization.exponents == {"v": 2}
    assert factorization.nu == Fraction(1, 2)
    assert not factorization.is_monomial


@pytest.mark.parametrize(
    "exponents, expected",
    [
        # nu = 1: only the non-monomial part survives
        ((2, 1), [((2, 0), 2)]),
        # nu = 1/2: N and M share the weight
        ((1, 2), [((1, 0), 1), ((0, 2), 1)]),
        # monomial case: M alone
        ((0, 3), [((0, 3), 2)]),
    ],
)
def test_companion_pair(exponents, expected) -> None:
    ring = Ring(Rationals(), ("u", "v"))
    companion = companion_pair(Pair.single([ring.monomial(exponents)], 2), ("v",))
    assert [
        (next(iter(c.generators[0].terms)), c.weight) for c in companion.components
    ] == [(e, Fraction(w)) for e, w in expected]
