"""Custom exceptions for idealistic-exponent computations."""

from fractions import Fraction


class IdealisticError(Exception):
    """Base exception for all idealistic-exponent errors."""

    pass


class FieldMismatchError(IdealisticError):
    """Raised when values from two different coefficient fields are combined."""

    def __init__(self, left: str, right: str) -> None:
        self.left = left
        self.right = right
        super().__init__(f"Cannot combine elements of {left} and {right}")


class FieldDivisionByZeroError(IdealisticError, ZeroDivisionError):
    """Raised when dividing by zero in a coefficient field."""

    def __init__(self, field: str) -> None:
        self.field = field
        super().__init__(f"Division by zero in {field}")


class CharacteristicError(IdealisticError):
    """Raised when an operation is undefined in the field characteristic."""

    def __init__(self, operation: str, characteristic: int) -> None:
        self.operation = operation
        self.characteristic = characteristic
        super().__init__(
            f"'{operation}' is not defined in characteristic {characteristic}"
        )


class UnknownVariableError(IdealisticError):
    """Raised when a variable name is not part of a ring."""

    def __init__(self, name: str, variables: tuple[str, ...]) -> None:
        self.name = name
        self.variables = variables
        super().__init__(
            f"Unknown variable '{name}'. Ring variables: {', '.join(variables)}"
        )


class RingMismatchError(IdealisticError):
    """Raised when polynomials from different rings are combined."""

    def __init__(self, left: str, right: str) -> None:
        self.left = left
        self.right = right
        super().__init__(f"Ring mismatch: {left} vs {right}")


class InvalidWeightError(IdealisticError):
    """Raised when a pair component weight is not a positive rational."""

    def __init__(self, weight: Fraction | int) -> None:
        self.weight = weight
        super().__init__(f"Weight must be a positive rational, got {weight}")


class EmptyComponentError(IdealisticError):
    """Raised when a pair component would carry the zero ideal."""

    def __init__(self, weight: Fraction | int) -> None:
        self.weight = weight
        super().__init__(f"Component of weight {weight} has no nonzero generator")


class NotPermissibleError(IdealisticError):
    """Raised when a blowup center is not contained in the singular locus."""

    def __init__(self, center: tuple[str, ...], component: int) -> None:
        self.center = center
        self.component = component
        super().__init__(
            f"Center V({', '.join(center)}) is not permissible: "
            f"component {component} has order below its weight"
        )


class NonCoordinateCenterError(IdealisticError):
    """Raised when a blowup center is not a coordinate subspace of the chart."""

    def __init__(self, center: tuple[str, ...], reason: str) -> None:
        self.center = center
        self.reason = reason
        super().__init__(f"Center V({', '.join(center)}) is not coordinate: {reason}")


class BoundaryPermissibilityError(IdealisticError):
    """Raised when a center fails the normal crossings check with the boundary."""

    def __init__(self, center: tuple[str, ...], status: str) -> None:
        self.center = center
        self.status = status
        super().__init__(
            f"Center V({', '.join(center)}) is not boundary permissible: {status}"
        )


class NotInSingularLocusError(IdealisticError):
    """Raised when the origin does not lie in the singular locus of a pair."""

    def __init__(self, component: int, order: int | float, weight: Fraction) -> None:
        self.component = component
        self.order = order
        self.weight = weight
        super().__init__(
            f"Origin is not in the singular locus: component {component} "
            f"has order {order} below weight {weight}"
        )


class RidgeComputationError(IdealisticError):
    """Raised when the ridge or directrix generation check fails."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Ridge computation failed: {reason}")


class MoveRefusedError(IdealisticError):
    """Raised when a move's side condition does not hold."""

    def __init__(self, move: str, condition: str) -> None:
        self.move = move
        self.condition = condition
        super().__init__(f"Move {move} refused: {condition}")


class CertificateReplayError(IdealisticError):
    """Raised when replaying a certificate does not reproduce its target."""

    def __init__(self, step: int, reason: str) -> None:
        self.step = step
        self.reason = reason
        super().__init__(f"Certificate replay failed at step {step}: {reason}")


class DecompositionError(IdealisticError):
    """Raised when a ridge decomposition fails one of its checks."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Ridge decomposition failed: {reason}")


class UnsupportedCoordinateChangeError(IdealisticError):
    """Raised when a coordinate change is not a polynomial automorphism."""

    def __init__(self, form: str, reason: str) -> None:
        self.form = form
        self.reason = reason
        super().__init__(f"Cannot straighten '{form}' into a coordinate: {reason}")


class ScriptSyntaxError(IdealisticError):
    """Raised when a session script cannot be parsed."""

    def __init__(self, line: int, column: int, message: str) -> None:
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownFieldError(IdealisticError):
    """Raised when a ring header names an unsupported coefficient field."""

    def __init__(self, descriptor: str) -> None:
        self.descriptor = descriptor
        super().__init__(f"Unknown field descriptor '{descriptor}'")


class DuplicateNameError(IdealisticError):
    """Raised when a script defines the same name twice."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"Name '{name}' is already defined")


class UndefinedNameError(IdealisticError):
    """Raised when a script references a name before defining it."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"Name '{name}' is not defined")


class SizeCapError(IdealisticError):
    """Raised when a determinantal specification exceeds the desk-scale cap."""

    def __init__(self, m: int, n: int, r: int) -> None:
        self.m = m
        self.n = n
        self.r = r
        super().__init__(
            f"Matrix size ({m}, {n}, {r}) exceeds the cap m*n <= 16, r <= 4"
        )
