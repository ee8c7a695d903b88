"""Generic determinantal varieties X_{m,n,r} and their resolution by blowing up minors."""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from enum import StrEnum
from itertools import combinations, permutations

from .chart import Chart, blowup, coordinate_change, strict_transform
from .exceptions import SizeCapError
from .field import Field, Rationals
from .gb import buchberger, ideal_equal, localized_contains, radical_contains
from .pair import Component, Pair, singular_locus_ideal
from .poly import Polynomial, Ring, substitute
from .reduce.decomposition import Resolved, ridge_decomposition
from .reduce.moves import MoveCertificate

logger = logging.getLogger(__name__)

MAX_ENTRIES = 16
MAX_RANK = 4

Matrix = tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class GenericMatrixSpec:
    """An m x n matrix of independent variables x_ij and the rank bound r."""

    m: int
    n: int
    r: int
    field: Field = dataclass_field(default_factory=Rationals)

    def __post_init__(self) -> None:
        if not 1 <= self.r <= self.m <= self.n:
            raise ValueError(f"Need 1 <= r <= m <= n, got ({self.m}, {self.n}, {self.r})")

    def name(self, i: int, j: int) -> str:
        if self.n < 10:
            return f"x{i + 1}{j + 1}"
        return f"x{i + 1}_{j + 1}"

    @property
    def matrix(self) -> Matrix:
        return tuple(tuple(self.name(i, j) for j in range(self.n)) for i in range(self.m))

    @property
    def ring(self) -> Ring:
        return Ring(self.field, tuple(name for row in self.matrix for name in row))

    def check_cap(self) -> None:
        """Reject sizes beyond the desk-scale limits.

        Raises:
            SizeCapError: If m*n exceeds 16 or r exceeds 4.
        """
        if self.m * self.n > MAX_ENTRIES or self.r > MAX_RANK:
            raise SizeCapError(self.m, self.n, self.r)

    def __str__(self) -> str:
        return f"({self.m}, {self.n}, {self.r})"


def _sign(permutation: Sequence[int]) -> int:
    inversions = sum(
        1
        for a in range(len(permutation))
        for b in range(a + 1, len(permutation))
        if permutation[a] > permutation[b]
    )
    return -1 if inversions % 2 else 1


def determinant(ring: Ring, entries: Sequence[Sequence[str]]) -> Polynomial:
    size = len(entries)
    total = ring.zero()
    for permutation in permutations(range(size)):
        term = ring.constant(_sign(permutation))
        for row, column in enumerate(permutation):
            term = term * ring.var(entries[row][column])
        total = total + term
    return total


def minors(ring: Ring, matrix: Matrix, size: int) -> tuple[Polynomial, ...]:
    """All size x size minors of a matrix of variable names."""
    rows = len(matrix)
    columns = len(matrix[0]) if matrix else 0
    return tuple(
        determinant(ring, [[matrix[i][j] for j in J] for i in I])
        for I in combinations(range(rows), size)
        for J in combinations(range(columns), size)
    )


def minors_pair(spec: GenericMatrixSpec) -> Pair:
    """E_{m,n,r}: the intersection of (f_IJ, r) over all r x r minors."""
    ring = spec.ring
    return Pair(
        ring,
        tuple(Component((f,), spec.r, True) for f in minors(ring, spec.matrix, spec.r)),
    )


@dataclass(frozen=True)
class LemmaEquivalence:
    """E_{m,n,r} ~ intersection of (x_ij, 1), with the singular locus check."""

    spec: GenericMatrixSpec
    certificate: MoveCertificate
    singular_locus: tuple[Polynomial, ...]
    locus_is_origin: bool


def lemma_equivalence(spec: GenericMatrixSpec) -> LemmaEquivalence:
    """Certify E_{m,n,r} ~ (x_11, 1) & ... & (x_mn, 1) through the ridge decomposition.

    The singular locus ideal is compared up to radical with the ideal of all
    the variables.
    """
    pair = minors_pair(spec)
    decomposition = ridge_decomposition(pair)
    if isinstance(decomposition, Resolved):
        raise ValueError(f"E{spec} is not singular at the origin")
    locus = singular_locus_ideal(pair).generators
    ring = pair.ring
    variables = ring.gens()
    inside = buchberger(variables, ring).contains_all(locus)
    origin = inside and all(radical_contains(locus, x) for x in variables)
    return LemmaEquivalence(spec, decomposition.certificate, locus, origin)


class NodeStatus(StrEnum):
    VERIFIED = "verified"
    REGULAR = "regular"
    FAILED = "failed"


@dataclass(frozen=True)
class LevelCheck:
    """Strict transform of the level-k minors against the (k-1)-minors of the new matrix."""

    level: int
    strict: tuple[Polynomial, ...]
    expected: tuple[Polynomial, ...]
    equal: bool


@dataclass
class ChartNode:
    chart: Chart
    matrix: Matrix
    rows: tuple[int, ...]
    columns: tuple[int, ...]
    rank: int
    pivot: tuple[int, int] | None = None
    substitution: dict[str, Polynomial] = dataclass_field(default_factory=dict)
    checks: tuple[LevelCheck, ...] = ()
    status: NodeStatus = NodeStatus.VERIFIED
    children: list[ChartNode] = dataclass_field(default_factory=list)

    @property
    def size(self) -> tuple[int, int, int]:
        return len(self.matrix), len(self.matrix[0]) if self.matrix else 0, self.rank

    @property
    def depth(self) -> int:
        return len(self.chart.history)

    def center(self) -> tuple[str, ...]:
        return tuple(name for row in self.matrix for name in row)

    def walk(self) -> Iterator[ChartNode]:
        yield self
        for child in self.children:
            yield from child.walk()

    def branches(self, prefix: tuple[ChartNode, ...] = ()) -> Iterator[tuple[ChartNode, ...]]:
        path = (*prefix, self)
        if not self.children:
            yield path
        for child in self.children:
            yield from child.branches(path)

    def local_pivot(self, child: ChartNode) -> tuple[int, int]:
        """Row and column of the child's pivot inside this node's matrix."""
        assert child.pivot is not None
        return self.rows.index(child.pivot[0]), self.columns.index(child.pivot[1])

    def label(self) -> str:
        if self.pivot is None:
            return "root"
        return " / ".join(f"{step.chart_variable}" for step in self.chart.history)


@dataclass(frozen=True)
class ResolutionTrace:
    spec: GenericMatrixSpec
    root: ChartNode

    def nodes(self) -> list[ChartNode]:
        return list(self.root.walk())

    def leaves(self) -> list[ChartNode]:
        return [node for node in self.root.walk() if not node.children]

    def paths(self) -> list[tuple[ChartNode, ...]]:
        return list(self.root.branches())

    @property
    def depth(self) -> int:
        return max(node.depth for node in self.leaves())

    @property
    def verified(self) -> bool:
        return all(node.status is not NodeStatus.FAILED for node in self.root.walk())

    def sizes_decrease(self) -> bool:
        return all(
            child.size == (node.size[0] - 1, node.size[1] - 1, node.size[2] - 1)
            for node in self.root.walk()
            for child in node.children
        )


def _is_snc(chart: Chart) -> bool:
    names = [divisor.variable for divisor in chart.boundary]
    return None not in names and len(set(names)) == len(names)


def into_chart(
    generators: Sequence[Polynomial], parent: ChartNode, child: ChartNode
) -> tuple[Polynomial, ...]:
    """Strict transforms in the child chart, read in its straightened coordinates."""
    variable = child.chart.history[-1].chart_variable
    return tuple(
        substitute(g, child.substitution)
        for g in strict_transform(generators, parent.center(), variable)
    )


def carried_minors(path: Sequence[ChartNode]) -> tuple[Polynomial, ...]:
    """The root's top minors carried through every blowup and straightening of a path."""
    root = path[0]
    generators = minors(root.chart.ring, root.matrix, root.rank)
    for parent, child in zip(path, path[1:]):
        generators = into_chart(generators, parent, child)
    return generators


def is_regular(path: Sequence[ChartNode]) -> bool:
    """Check the end of a root-to-leaf path for a coordinate strict transform.

    The original r x r minors, after the recorded substitutions, must generate
    the ideal of the leaf's matrix entries, and the exceptional divisors must
    be distinct coordinate hyperplanes.
    """
    leaf = path[-1]
    ring = leaf.chart.ring
    coordinates = [ring.var(name) for name in leaf.center()]
    return ideal_equal(carried_minors(path), coordinates, ring) and _is_snc(leaf.chart)


def _straightening(matrix: Matrix, a: int, b: int, ring: Ring) -> dict[str, Polynomial]:
    """x_ij -> x_ij + x_ib * x_aj, so that the new x_ij are the y_ij of the chart."""
    return {
        matrix[i][j]: ring.var(matrix[i][j]) + ring.var(matrix[i][b]) * ring.var(matrix[a][j])
        for i in range(len(matrix))
        for j in range(len(matrix[0]))
        if i != a and j != b
    }


def _chart(node: ChartNode, a: int, b: int) -> ChartNode:
    ring = node.chart.ring
    matrix = node.matrix
    center = node.center()
    variable = matrix[a][b]
    top = Pair(
        ring,
        tuple(Component((f,), node.rank, True) for f in minors(ring, matrix, node.rank)),
    )
    blown = blowup(node.chart, top, center, variable)
    mapping = _straightening(matrix, a, b, ring)
    chart = coordinate_change(blown.chart, mapping)
    reduced: Matrix = tuple(
        tuple(matrix[i][j] for j in range(len(matrix[0])) if j != b)
        for i in range(len(matrix))
        if i != a
    )
    checks = []
    for level in range(2, node.rank + 1):
        strict = tuple(
            substitute(g, mapping)
            for g in strict_transform(minors(ring, matrix, level), center, variable)
        )
        expected = minors(ring, reduced, level - 1)
        equal = ideal_equal(strict, expected, ring)
        checks.append(LevelCheck(level, strict, expected, equal))
        if not equal:
            logger.warning("Level %d fails in the %s-chart", level, variable)
    child = ChartNode(
        chart=chart,
        matrix=reduced,
        rows=tuple(r for k, r in enumerate(node.rows) if k != a),
        columns=tuple(c for k, c in enumerate(node.columns) if k != b),
        rank=node.rank - 1,
        pivot=(node.rows[a], node.columns[b]),
        substitution=mapping,
        checks=tuple(checks),
    )
    if not all(check.equal for check in checks):
        child.status = NodeStatus.FAILED
    logger.debug("Chart %s: size %s, %s", child.label(), child.size, child.status)
    return child


def _expand(path: tuple[ChartNode, ...]) -> None:
    node = path[-1]
    if node.rank == 1:
        if is_regular(path):
            node.status = NodeStatus.REGULAR
        else:
            node.status = NodeStatus.FAILED
            logger.warning("Leaf chart %s is not coordinate-regular", node.label())
        return
    for a in range(len(node.matrix)):
        for b in range(len(node.matrix[0])):
            child = _chart(node, a, b)
            node.children.append(child)
            if child.status is not NodeStatus.FAILED:
                _expand((*path, child))


def resolve_determinantal(spec: GenericMatrixSpec, cap: bool = True) -> ResolutionTrace:
    """Resolve X_{m,n,r} by r - 1 blowups of the strict transforms of X_{m,n,l}.

    Every chart applies the blowup with the current matrix entries as center,
    then the coordinate change making the entries off the pivot row and column
    into the reduced generic matrix. Each minors level is checked against the
    smaller minors by ideal equality.

    Raises:
        SizeCapError: If ``cap`` is set and the specification exceeds the cap.
    """
    if cap:
        spec.check_cap()
    root = ChartNode(
        chart=Chart.root(spec.ring),
        matrix=spec.matrix,
        rows=tuple(range(spec.m)),
        columns=tuple(range(spec.n)),
        rank=spec.r,
    )
    _expand((root,))
    trace = ResolutionTrace(spec, root)
    logger.info(
        "Resolved X%s with %d leaf charts, verified=%s", spec, len(trace.leaves()), trace.verified
    )
    return trace


@dataclass(frozen=True)
class GluingCheck:
    """Center of a sibling chart read in another chart, on their overlap.

    ``inside`` records that the sibling's center generators lie in this chart's
    center ideal; ``overlap`` that this chart's center lies in theirs once the
    sibling's chart variable is inverted.
    """

    parent: str
    chart: str
    other: str
    inside: bool
    overlap: bool

    @property
    def holds(self) -> bool:
        return self.inside and self.overlap


def pivot_minors(ring: Ring, matrix: Matrix, a: int, b: int) -> tuple[Polynomial, ...]:
    """The 2 x 2 minors through entry (a, b), whose strict transforms cut out its chart's center."""
    return tuple(
        ring.var(matrix[a][b]) * ring.var(matrix[i][j])
        - ring.var(matrix[i][b]) * ring.var(matrix[a][j])
        for i in range(len(matrix))
        for j in range(len(matrix[0]))
        if i != a and j != b
    )


def _sibling_checks(node: ChartNode) -> Iterator[GluingCheck]:
    ring = node.chart.ring
    for chart in node.children:
        center = [ring.var(name) for name in chart.center()]
        basis = buchberger(center, ring)
        for other in node.children:
            if other is chart:
                continue
            a, b = node.local_pivot(other)
            theirs = into_chart(pivot_minors(ring, node.matrix, a, b), node, chart)
            (unit,) = into_chart((ring.var(node.matrix[a][b]),), node, chart)
            yield GluingCheck(
                parent=node.label(),
                chart=chart.label(),
                other=other.label(),
                inside=basis.contains_all(theirs),
                overlap=localized_contains(theirs, unit, center),
            )


def gluing_checks(trace: ResolutionTrace) -> list[GluingCheck]:
    """Compare the next centers of every ordered pair of sibling charts, round by round."""
    checks = [
        check
        for node in trace.root.walk()
        if node.children and node.status is not NodeStatus.FAILED
        for check in _sibling_checks(node)
    ]
    for check in checks:
        if not check.holds:
            logger.warning(
                "Centers of %s and %s do not glue over %s", check.chart, check.other, check.parent
            )
    logger.debug("Ran %d gluing checks", len(checks))
    return checks


def verify_gluing(trace: ResolutionTrace) -> bool:
    """Check that the chart centers of every round glue to one global center.

    In each chart the pivot 2 x 2 minors of a sibling, x'_ab*y_ij - y_ib*x'_aj
    after straightening, must lie in the chart's center ideal, and generate it
    where the sibling's chart variable is a unit.
    """
    return all(check.holds for check in gluing_checks(trace))
