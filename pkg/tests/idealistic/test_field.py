from fractions import Fraction

import pytest

from idealistic.exceptions import CharacteristicError, FieldDivisionByZeroError, FieldMismatchError
from idealistic.field import FunctionField, PrimeField, Rationals, lam


def test_rationals_add() -> None:
    q = Rationals()
    assert q(Fraction(1, 3)) + Fraction(1, 6) == q(Fraction(1, 2))


def test_prime_field_multiplies_mod_p() -> None:
    f5 = PrimeField(5)
    assert f5(3) * 4 == f5(2)


def test_function_field_divides_parameter_by_itself() -> None:
    field = FunctionField(2)
    t = lam(field)
    assert t / t == field(1)


@pytest.mark.parametrize(
    "field",
    [
        Rationals(),
        PrimeField(7),
        FunctionField(3),
    ],
)
def test_division_by_zero_raises(field) -> None:
    with pytest.raises(FieldDivisionByZeroError):
        _ = field(1) / field(0)


def test_mixing_fields_raises() -> None:
    with pytest.raises(FieldMismatchError):
        _ = PrimeField(5)(1) + PrimeField(7)(1)


def test_pth_root_of_parameter_does_not_exist() -> None:
    assert lam(FunctionField(2)).pth_root() is None


def test_pth_root_of_cube_in_characteristic_three() -> None:
    field = FunctionField(3)
    t = lam(field)
    root = (t**3 + 1).pth_root()
    assert root == t + 1


def test_pth_root_over_prime_field_is_frobenius_inverse() -> None:
    f7 = PrimeField(7)
    root = f7(3).pth_root()
    assert root is not None
    assert root**7 == f7(3)


def test_pth_root_in_characteristic_zero_raises() -> None:
    with pytest.raises(CharacteristicError):
        Rationals()(2).pth_root()


def test_p_basis_reassembles_element() -> None:
    field = FunctionField(2)
    t = lam(field)
    a = t**3 + t + 1
    c = a.p_basis(2)
    assert c[0] ** 2 + c[1] ** 2 * t == a


def test_p_basis_over_perfect_field_is_root_then_zeros() -> None:
    f3 = PrimeField(3)
    assert f3(2).p_basis(3) == [f3(2), f3(0), f3(0)]


@pytest.mark.parametrize(
    "field, value, text",
    [
        # Rational literal
        (Rationals(), Fraction(3, 7), "3/7"),
        # Residues print in [0, p)
        (PrimeField(5), -1, "4"),
    ],
)
def test_to_text(field, value, text) -> None:
    assert str(field(value)) == text
