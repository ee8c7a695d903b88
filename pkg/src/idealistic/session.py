"""Execute session-script commands and check their expectations."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .chart import Chart, blowup
from .cone import directrix, reduced_ridge_equals_directrix, ridge, tangent_cone_pair
from .detres import GenericMatrixSpec, gluing_checks, resolve_determinantal
from .exceptions import IdealisticError
from .gb import buchberger, radical_contains
from .pair import Pair, PointSpec, ord_at, singular_locus_ideal
from .poly import INFINITY, Polynomial, Ring
from .reduce import (
    Resolved,
    classify,
    coefficient_pair,
    delta,
    invariant_truncation,
    maximal_contact_chain,
    ridge_decomposition,
)
from .script import (
    Command,
    SessionScript,
    pair_text,
    parse_field,
    parse_pair,
    parse_polynomial,
    split_top,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Outcome:
    """A command's JSON payload plus the value its expectation is compared with."""

    payload: dict[str, Any]
    value: Any
    ring: Ring | None = None
    verified: bool = True


@dataclass(frozen=True)
class CommandResult:
    command: Command
    success: bool
    result: dict[str, Any] | None
    message: str = ""


def number_text(value: Fraction | float | int) -> str:
    if value == INFINITY:
        return "inf"
    return str(Fraction(value))


def parse_number(text: str) -> Fraction | float:
    """Raises:
    ValueError: If the text is neither ``inf`` nor a rational number.
    """
    text = text.strip()
    if text == "inf":
        return INFINITY
    return Fraction(text.replace(" ", ""))


def _bracketed(text: str) -> list[str]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"expected a bracketed list, got '{text}'")
    inner = text[1:-1].strip()
    return split_top(inner, ",") if inner else []


def _same_numbers(expected: str, outcome: Outcome) -> bool:
    return tuple(parse_number(t) for t in _bracketed(expected)) == tuple(outcome.value)


def _same_number(expected: str, outcome: Outcome) -> bool:
    return parse_number(expected) == outcome.value


def _expected_polys(expected: str, ring: Ring) -> list[Polynomial]:
    return [parse_polynomial(t, ring) for t in _bracketed(expected)]


def _same_polys(expected: str, outcome: Outcome) -> bool:
    assert outcome.ring is not None
    return set(_expected_polys(expected, outcome.ring)) == set(outcome.value)


def _same_radical(expected: str, outcome: Outcome) -> bool:
    assert outcome.ring is not None
    wanted = _expected_polys(expected, outcome.ring)
    found = list(outcome.value)
    return all(radical_contains(found, f) for f in wanted) and all(
        radical_contains(wanted, f) for f in found
    )


def _same_word(expected: str, outcome: Outcome) -> bool:
    return expected.strip() == outcome.value


def _same_text(expected: str, outcome: Outcome) -> bool:
    return "".join(expected.split()) == "".join(str(outcome.value).split())


def _same_pair(expected: str, outcome: Outcome) -> bool:
    pair: Pair = outcome.value
    wanted = parse_pair(expected, pair.ring)

    def key(p: Pair) -> list[tuple[frozenset[Polynomial], Fraction]]:
        return sorted(
            ((frozenset(c.generators), c.weight) for c in p.components),
            key=lambda item: (item[1], sorted(str(g) for g in item[0])),
        )

    return key(wanted) == key(pair)


def _same_summary(expected: str, outcome: Outcome) -> bool:
    summary: dict[str, str] = outcome.value
    for item in expected.split():
        name, _, value = item.partition("=")
        if summary.get(name) != value.lower():
            return False
    return True


Comparator = Callable[[str, Outcome], bool]

COMPARATORS: dict[str, Comparator] = {
    "order": _same_number,
    "delta": _same_number,
    "sing": _same_radical,
    "tangent": _same_polys,
    "directrix": _same_polys,
    "ridge": _same_polys,
    "gb": _same_polys,
    "reduce": _same_word,
    "invariant": _same_text,
    "chain": _same_numbers,
    "blowup": _same_pair,
    "coefficient": _same_pair,
    "decompose": _same_pair,
    "resolve-det": _same_summary,
}


class Session:
    """Evaluation context of a parsed script: its ring, pairs, ideals and chart."""

    def __init__(self, script: SessionScript, cap: bool = True) -> None:
        self.script = script
        self.cap = cap
        self._handlers: dict[str, Callable[[Command], Outcome]] = {
            "order": self._order,
            "sing": self._sing,
            "tangent": self._tangent,
            "directrix": self._directrix,
            "ridge": self._ridge,
            "reduce": self._reduce,
            "decompose": self._decompose,
            "blowup": self._blowup,
            "coefficient": self._coefficient,
            "delta": self._delta,
            "invariant": self._invariant,
            "chain": self._chain,
            "gb": self._gb,
            "resolve-det": self._resolve_det,
        }

    @property
    def chart(self) -> Chart:
        if self.script.ring is None:
            raise ValueError("the script declares no ring")
        return Chart.root(self.script.ring, tuple(self.script.boundaries.values()))

    def _pair(self, command: Command) -> Pair:
        assert command.target is not None
        return self.script.pairs[command.target]

    def evaluate(self, command: Command) -> Outcome:
        """Run one command without checking its expectation."""
        logger.debug("Running %s", command.render())
        return self._handlers[command.name](command)

    def execute(self, command: Command) -> CommandResult:
        """Run one command and compare with its expectation, if any."""
        try:
            outcome = self.evaluate(command)
        except (IdealisticError, ValueError) as exc:
            return CommandResult(command, False, None, str(exc))
        if not outcome.verified:
            return CommandResult(command, False, outcome.payload, "verification failed")
        if command.expect is None:
            return CommandResult(command, True, outcome.payload)
        try:
            matched = COMPARATORS[command.name](command.expect, outcome)
        except (IdealisticError, ValueError) as exc:
            return CommandResult(command, False, outcome.payload, f"bad expectation: {exc}")
        if not matched:
            return CommandResult(
                command, False, outcome.payload, f"expected {command.expect}, got {_shown(outcome)}"
            )
        return CommandResult(command, True, outcome.payload)

    def run(self) -> list[CommandResult]:
        return [self.execute(command) for command in self.script.commands]

    def _order(self, command: Command) -> Outcome:
        pair = self._pair(command)
        point = PointSpec.coordinate(command.at) if command.at else PointSpec.origin(pair.ring)
        value = ord_at(pair, point)
        return Outcome({"order": number_text(value), "at": str(point)}, value)

    def _sing(self, command: Command) -> Outcome:
        pair = self._pair(command)
        locus = singular_locus_ideal(pair)
        payload = {"generators": [str(g) for g in locus.generators], "exact": locus.exact}
        return Outcome(payload, locus.generators, pair.ring)

    def _tangent(self, command: Command) -> Outcome:
        pair = self._pair(command)
        cone = tangent_cone_pair(pair)
        components = [
            {"generators": [str(cone.to_chart(g)) for g in c.generators], "weight": c.weight}
            for c in cone.components
        ]
        value = tuple(cone.to_chart(g) for g in cone.generators)
        return Outcome({"components": components, "best_effort": cone.best_effort}, value, pair.ring)

    def _directrix(self, command: Command) -> Outcome:
        pair = self._pair(command)
        cone = tangent_cone_pair(pair)
        presentation = ridge(cone)
        result = directrix(cone, presentation)
        forms = tuple(cone.to_chart(f) for f in result.forms)
        payload = {
            "forms": [str(f) for f in forms],
            "pivots": [cone.chart_name(name) for name in result.pivots],
            "ridge": [str(cone.to_chart(s.polynomial)) for s in presentation.generators],
            "reduced_ridge_equals_directrix": reduced_ridge_equals_directrix(
                presentation, result
            ),
        }
        return Outcome(payload, forms, pair.ring)

    def _ridge(self, command: Command) -> Outcome:
        pair = self._pair(command)
        cone = tangent_cone_pair(pair)
        presentation = ridge(cone)
        forms = tuple(cone.to_chart(s.polynomial) for s in presentation.generators)
        generators = [
            {"form": str(f), "degree": s.degree, "pivot": cone.chart_name(s.pivot)}
            for f, s in zip(forms, presentation.generators)
        ]
        payload = {
            "generators": generators,
            "triangular": presentation.triangular,
            "certificate": presentation.describe(),
        }
        return Outcome(payload, forms, pair.ring)

    def _reduce(self, command: Command) -> Outcome:
        pair = self._pair(command)
        report = classify(pair, self.chart)
        if isinstance(report, Resolved):
            return Outcome({"case": "resolved"}, "resolved")
        certificate = report.stripping.describe()
        if report.contact_certificate is not None:
            certificate += report.contact_certificate.describe()
        payload = {
            "case": report.case.value,
            "exponents": list(report.exponents),
            "t": report.t,
            "s": report.s,
            "y_variables": list(report.y_variables),
            "coordinates": str(report.coordinates),
            "coefficients": pair_text(report.coefficients) if report.coefficients else None,
            "companion": pair_text(report.companion) if report.companion else None,
            "certificate": certificate,
        }
        return Outcome(payload, report.case.value)

    def _decompose(self, command: Command) -> Outcome:
        pair = self._pair(command)
        decomposition = ridge_decomposition(pair)
        if isinstance(decomposition, Resolved):
            return Outcome({"lifts": "()", "residual": "()"}, Pair(pair.ring))
        payload = {
            "lifts": pair_text(decomposition.generators),
            "residual": pair_text(decomposition.residual),
            "coordinates": str(decomposition.coordinates),
            "certificate": decomposition.certificate.describe(),
        }
        return Outcome(payload, decomposition.generators)

    def _blowup(self, command: Command) -> Outcome:
        if not command.at or command.chart is None:
            raise ValueError("blowup needs 'at [center]' and 'chart VARIABLE'")
        result = blowup(self.chart, self._pair(command), command.at, command.chart)
        transforms = result.transforms
        payload = {
            "pair": pair_text(result.pair),
            "boundary": [str(d) for d in result.chart.boundary],
            "substitution": str(result.chart.coordinate_changes[-1]),
            "total": [[str(g) for g in t.total] for t in transforms],
            # only standard-basis components have a well-defined strict transform
            "strict": [
                [str(g) for g in t.strict] if t.strict is not None else None for t in transforms
            ],
            "regenerates_total": all(t.regenerates_total(command.chart) for t in transforms),
        }
        return Outcome(payload, result.pair)

    def _coefficient(self, command: Command) -> Outcome:
        coefficients = coefficient_pair(self._pair(command), command.split)
        return Outcome({"pair": pair_text(coefficients)}, coefficients)

    def _delta(self, command: Command) -> Outcome:
        value = delta(self._pair(command), command.split)
        return Outcome({"delta": number_text(value)}, value)

    def _invariant(self, command: Command) -> Outcome:
        truncation = invariant_truncation(self.chart, self._pair(command), command.depth or 1)
        payload = {"invariant": str(truncation), "stop": truncation.stop.value}
        return Outcome(payload, str(truncation))

    def _chain(self, command: Command) -> Outcome:
        chain = maximal_contact_chain(self._pair(command), command.split)
        payload = {
            "deltas": [number_text(d) for d in chain.deltas],
            "coordinates": [
                str(step.coordinates) if step.coordinates else "identity" for step in chain.steps
            ],
            "final": pair_text(chain.final),
        }
        return Outcome(payload, chain.deltas)

    def _gb(self, command: Command) -> Outcome:
        assert command.target is not None and self.script.ring is not None
        basis = buchberger(self.script.ideals[command.target], self.script.ring).basis
        return Outcome({"basis": [str(g) for g in basis]}, basis, self.script.ring)

    def _resolve_det(self, command: Command) -> Outcome:
        assert command.size is not None
        m, n, r = command.size
        spec = GenericMatrixSpec(m, n, r, parse_field(command.field or "Q"))
        trace = resolve_determinantal(spec, cap=self.cap)
        checks = gluing_checks(trace)
        summary = {
            "depth": str(trace.depth),
            "leaves": str(len(trace.leaves())),
            "verified": str(trace.verified).lower(),
            "gluing": str(all(check.holds for check in checks)).lower(),
            "gluing_checks": str(len(checks)),
            "sizes_decrease": str(trace.sizes_decrease()).lower(),
        }
        charts = [
            {
                "chart": node.label(),
                "size": list(node.size),
                "status": node.status.value,
                "substitution": {k: str(v) for k, v in node.substitution.items()},
            }
            for node in trace.nodes()
        ]
        verified = trace.verified and summary["gluing"] == "true"
        return Outcome({**summary, "charts": charts}, summary, verified=verified)


def _shown(outcome: Outcome) -> str:
    value = outcome.value
    if isinstance(value, Pair):
        return pair_text(value)
    if isinstance(value, tuple):
        items = (str(v) if isinstance(v, Polynomial) else number_text(v) for v in value)
        return f"[{', '.join(items)}]"
    if isinstance(value, (Fraction, float, int)):
        return number_text(value)
    return str(value)
