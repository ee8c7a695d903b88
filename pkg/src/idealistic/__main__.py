"""CLI entrypoint for session scripts, the determinantal driver and the corpus."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, TypedDict

from idealistic.corpus import EntryReport, run_corpus
from idealistic.exceptions import IdealisticError
from idealistic.script import IDEAL_COMMANDS, Command, SessionScript, parse, parse_field
from idealistic.session import CommandResult, Session

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

SCRIPT_COMMANDS = (
    "order",
    "sing",
    "tangent",
    "directrix",
    "ridge",
    "reduce",
    "decompose",
    "blowup",
    "coefficient",
    "delta",
    "invariant",
    "chain",
    "gb",
)


class CommandPayload(TypedDict):
    """JSON-serializable single-command payload."""

    command: str
    success: bool
    result: Any
    message: str


class EntryPayload(TypedDict, total=False):
    """JSON-serializable corpus entry or script line result."""

    id: str
    line: int
    success: bool
    result: Any
    message: str


class ResultsPayload(TypedDict):
    """JSON-serializable batch results payload."""

    results: list[EntryPayload]


def _jsonable(value: Any) -> Any:
    """Convert a value into a JSON-serializable structure.

    Args:
        value: Value from a command payload.

    Returns:
        JSON-serializable value.
    """
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value

    if isinstance(value, (tuple, list)):
        return [_jsonable(item) for item in value]

    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}

    return str(value)


def _names(text: str) -> tuple[str, ...]:
    return tuple(name.strip() for name in text.split(",") if name.strip())


def _add_script_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("script", type=Path, help="Path to a session script")
    parser.add_argument(
        "--pair",
        metavar="NAME",
        help="Pair (or ideal, for gb) to act on; defaults to the only one defined",
    )


def build_parser() -> argparse.ArgumentParser:
    """Create the command-line argument parser.

    Returns:
        Configured parser with one subcommand per operation.
    """
    parser = argparse.ArgumentParser(
        prog="idealistic",
        description="Exact computations with idealistic exponents and their blowups.",
    )
    parser.add_argument(
        "--emit",
        choices=("text", "json"),
        default="text",
        help="Output format (default: text)",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="Logging level for messages on stderr (default: WARNING)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name in SCRIPT_COMMANDS:
        sub = subparsers.add_parser(name, help=f"Run '{name}' on a pair of a script")
        _add_script_arguments(sub)
        if name == "order":
            sub.add_argument("--at", type=_names, help="Coordinate subspace, e.g. x,z")
        if name == "blowup":
            sub.add_argument("--center", type=_names, required=True, help="Center, e.g. x,y")
            sub.add_argument("--chart", required=True, help="Chart variable")
        if name in ("coefficient", "delta", "chain"):
            sub.add_argument("--split", type=_names, help="y-variables of the split")
        if name == "invariant":
            sub.add_argument("--depth", type=int, default=1, help="Number of stages")

    det = subparsers.add_parser("resolve-det", help="Resolve a generic determinantal variety")
    det.add_argument("m", type=int)
    det.add_argument("n", type=int)
    det.add_argument("r", type=int)
    det.add_argument("--field", default="Q", help="Q or Fp(p) (default: Q)")
    det.add_argument("--no-cap", action="store_true", help="Lift the desk-scale size cap")

    corpus = subparsers.add_parser("corpus", help="Run the bundled example corpus")
    corpus.add_argument("ids", nargs="*", help="Corpus ids to run (default: all)")
    corpus.add_argument("--no-cap", action="store_true", help="Lift the desk-scale size cap")

    run = subparsers.add_parser("run", help="Execute every command of a script")
    run.add_argument("script", type=Path, help="Path to a session script")
    run.add_argument("--no-cap", action="store_true", help="Lift the desk-scale size cap")
    return parser


def _read_script(path: Path) -> SessionScript:
    """Load and parse a session script.

    Raises:
        ValueError: If the file cannot be read.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"Cannot read script {path}: {exc.strerror}") from None
    return parse(text)


def _target(script: SessionScript, command: str, requested: str | None) -> str:
    """Pick the pair or ideal a subcommand acts on.

    Raises:
        ValueError: If the name is unknown or no single default exists.
    """
    known = script.ideals if command in IDEAL_COMMANDS else script.pairs
    kind = "ideal" if command in IDEAL_COMMANDS else "pair"
    if requested is not None:
        if requested not in known:
            raise ValueError(f"The script defines no {kind} named '{requested}'")
        return requested
    if len(known) != 1:
        raise ValueError(f"Use --pair to choose one of {len(known)} defined {kind}s")
    return next(iter(known))


def _command(args: argparse.Namespace, script: SessionScript) -> Command:
    return Command(
        args.command,
        target=_target(script, args.command, args.pair),
        at=getattr(args, "at", None) or getattr(args, "center", None),
        chart=getattr(args, "chart", None),
        split=getattr(args, "split", None),
        depth=getattr(args, "depth", None),
    )


def _exit_code(result: CommandResult) -> int:
    if result.success:
        return EXIT_OK
    return EXIT_USAGE if result.result is None else EXIT_MISMATCH


def _text_lines(payload: dict[str, Any]) -> list[str]:
    """Render a flat mapping as aligned ``key: value`` lines."""
    width = max((len(key) for key in payload), default=0)
    lines = []
    for key, value in payload.items():
        if isinstance(value, (list, dict)):
            value = json.dumps(_jsonable(value))
        lines.append(f"{key.ljust(width)}: {value}")
    return lines


def _emit_command(name: str, result: CommandResult | None, message: str, emit: str) -> None:
    success = result is not None and result.success
    payload = result.result if result is not None else None
    if emit == "json":
        report = CommandPayload(
            command=name, success=success, result=_jsonable(payload), message=message
        )
        print(json.dumps(report, indent=2))
        return
    lines = _text_lines(payload or {})
    if message:
        lines.append(f"error: {message}")
    print("\n".join(lines))


def _line_payload(result: CommandResult) -> EntryPayload:
    return EntryPayload(
        line=result.command.line,
        success=result.success,
        result=_jsonable(result.result),
        message=result.message,
    )


def _entry_payload(report: EntryReport) -> EntryPayload:
    return EntryPayload(
        id=report.id,
        success=report.success,
        result=[_line_payload(result) for result in report.results],
        message=report.message,
    )


def _emit_results(payload: ResultsPayload, emit: str, label: str) -> None:
    if emit == "json":
        print(json.dumps(payload, indent=2))
        return
    rows = {
        str(entry.get(label)): "ok" if entry["success"] else f"FAILED {entry['message']}"
        for entry in payload["results"]
    }
    print("\n".join(_text_lines(rows)))


def _run_single(args: argparse.Namespace) -> int:
    try:
        if args.command == "resolve-det":
            parse_field(args.field)
            script = SessionScript()
            command = Command(
                "resolve-det", size=(args.m, args.n, args.r), field=args.field
            )
            session = Session(script, cap=not args.no_cap)
        else:
            script = _read_script(args.script)
            command = _command(args, script)
            session = Session(script)
    except (IdealisticError, ValueError) as exc:
        _emit_command(args.command, None, str(exc), args.emit)
        return EXIT_USAGE
    result = session.execute(command)
    _emit_command(args.command, result, result.message, args.emit)
    return _exit_code(result)


def _run_script(args: argparse.Namespace) -> int:
    try:
        script = _read_script(args.script)
    except (IdealisticError, ValueError) as exc:
        _emit_command("run", None, str(exc), args.emit)
        return EXIT_USAGE
    results = Session(script, cap=not args.no_cap).run()
    payload = ResultsPayload(results=[_line_payload(result) for result in results])
    _emit_results(payload, args.emit, "line")
    return EXIT_OK if all(result.success for result in results) else EXIT_MISMATCH


def _run_corpus(args: argparse.Namespace) -> int:
    try:
        reports = run_corpus(args.ids or None, cap=not args.no_cap)
    except (FileNotFoundError, KeyError) as exc:
        _emit_command("corpus", None, str(exc).strip("'\""), args.emit)
        return EXIT_USAGE
    payload = ResultsPayload(results=[_entry_payload(report) for report in reports])
    _emit_results(payload, args.emit, "id")
    return EXIT_OK if all(report.success for report in reports) else EXIT_MISMATCH


def main(argv: list[str] | None = None) -> int:
    """Run the CLI command.

    Args:
        argv: Optional argument list; when ``None``, values are read from
            ``sys.argv``.

    Returns:
        Process exit code: ``0`` on success, ``1`` on a mismatch or failed
        verification, ``2`` on a usage or parse error.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if args.command == "corpus":
        return _run_corpus(args)

    if args.command == "run":
        return _run_script(args)

    return _run_single(args)


if __name__ == "__main__":
    sys.exit(main())
