"""Bundled example scripts and the corpus runner."""

from __future__ import annotations

import logging
import os
from collections.abc import Iterable
from dataclasses import dataclass
from importlib.resources import files
from importlib.resources.abc import Traversable
from pathlib import Path

from .exceptions import IdealisticError
from .script import SessionScript, parse
from .session import CommandResult, Session

logger = logging.getLogger(__name__)

CORPUS_ENV = "IDEALISTIC_CORPUS"
SUFFIX = ".idl"


def corpus_dir() -> Traversable:
    """Return the corpus directory, honoring the ``IDEALISTIC_CORPUS`` override."""
    override = os.environ.get(CORPUS_ENV)
    if override:
        return Path(override)
    return files("idealistic").joinpath("corpus")


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    text: str

    def script(self) -> SessionScript:
        return parse(self.text)


@dataclass(frozen=True)
class EntryReport:
    """Outcome of one corpus entry: every command result, or the parse failure."""

    id: str
    results: tuple[CommandResult, ...]
    error: str = ""

    @property
    def success(self) -> bool:
        return not self.error and all(result.success for result in self.results)

    @property
    def message(self) -> str:
        if self.error:
            return self.error
        failures = [
            f"line {result.command.line}: {result.message}"
            for result in self.results
            if not result.success
        ]
        return "; ".join(failures)


def load_corpus() -> list[CorpusEntry]:
    """Load every corpus script, sorted by id.

    Raises:
        FileNotFoundError: If the corpus directory does not exist.
    """
    directory = corpus_dir()
    if not directory.is_dir():
        raise FileNotFoundError(f"Corpus directory not found: {directory}")
    entries = [
        CorpusEntry(item.name.removesuffix(SUFFIX), item.read_text(encoding="utf-8"))
        for item in directory.iterdir()
        if item.name.endswith(SUFFIX)
    ]
    return sorted(entries, key=lambda entry: entry.id)


def run_entry(entry: CorpusEntry, cap: bool = True) -> EntryReport:
    try:
        script = entry.script()
    except IdealisticError as exc:
        logger.warning("Corpus entry %s does not parse: %s", entry.id, exc)
        return EntryReport(entry.id, (), str(exc))
    results = tuple(Session(script, cap=cap).run())
    report = EntryReport(entry.id, results)
    logger.info("Corpus entry %s: %s", entry.id, "ok" if report.success else "FAILED")
    return report


def run_corpus(ids: Iterable[str] | None = None, cap: bool = True) -> list[EntryReport]:
    """Run the selected corpus entries, or all of them, in id order.

    Raises:
        KeyError: If a requested id is not in the corpus.
    """
    entries = load_corpus()
    if ids is not None:
        by_id = {entry.id: entry for entry in entries}
        wanted = list(ids)
        missing = [name for name in wanted if name not in by_id]
        if missing:
            raise KeyError(f"Unknown corpus ids: {', '.join(missing)}")
        entries = [by_id[name] for name in wanted]
    return [run_entry(entry, cap) for entry in entries]
