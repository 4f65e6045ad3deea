"""Daily-record journal: a line-oriented text file, one record per date.

Format::

    # comment
    2024-01-02 mood=calm,sleep_hours=7.5

Keys are identifiers.  A value that reads as a decimal number is numeric;
anything else is category text.  The canonical form sorts records by date
and keys by name, and drops comments and blank lines.
"""

from __future__ import annotations

import datetime as dt
import os
import re
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AssignmentError, KolamError, KolamParseError, MappingError, NoPatternError, TooLargeError
from .geometry import RenderParams
from .grid import GridSpec, SymmetryGroup
from .mapping import DailyRecord, MappingSpec, RenderPlan, Value, format_number, resolve
from .render import contact_sheet, render_svg
from .search import Catalog, SearchRequest, enumerate_single_loop, find_single_loop, pattern_for_category
from .specdsl import load_spec
from .trace import GateConfig

_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}")
_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_TEXT_RE = re.compile(r"[^\s,=#]+")

SHEET_NAME = "kolam-sheet.svg"
SHEET_COLUMNS = 7


class JournalError(KolamError):
    pass


def parse_date(text: str) -> dt.date:
    if not _DATE_RE.fullmatch(text):
        raise ValueError(f"malformed date {text!r} (expected YYYY-MM-DD)")
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise ValueError(f"malformed date {text!r} (no such day)") from None


def parse_value(text: str) -> Value:
    return float(text) if _NUMBER_RE.fullmatch(text) else text


def parse_assignments(tokens: list[str] | str) -> dict[str, Value]:
    """Parse 'k=v' tokens; each token may itself hold a comma-separated list."""
    if isinstance(tokens, str):
        tokens = [tokens]
    fields: dict[str, Value] = {}
    for chunk in tokens:
        for token in chunk.split(","):
            key, sep, raw = token.partition("=")
            if not sep:
                raise AssignmentError(f"malformed assignment {token!r} (expected key=value)", token)
            if not _KEY_RE.fullmatch(key):
                raise AssignmentError(f"malformed key {key!r} in assignment {token!r}", token)
            if not _TEXT_RE.fullmatch(raw):
                raise AssignmentError(f"malformed value {raw!r} in assignment {token!r}", token)
            if key in fields:
                raise AssignmentError(f"field {key!r} assigned twice", token)
            fields[key] = parse_value(raw)
    if not fields:
        raise AssignmentError("a record needs at least one key=value assignment", "")
    return fields


def format_record(record: DailyRecord) -> str:
    parts = []
    for key in sorted(record.fields):
        value = record.fields[key]
        parts.append(f"{key}={value if isinstance(value, str) else format_number(value)}")
    return f"{record.date.isoformat()} {','.join(parts)}"


@dataclass(frozen=True)
class Journal:
    records: tuple[DailyRecord, ...] = ()
    path: Path | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        dates = [r.date for r in self.records]
        if dates != sorted(set(dates)):
            raise JournalError("journal records must be unique per date and sorted")

    def get(self, date: dt.date) -> DailyRecord | None:
        return next((r for r in self.records if r.date == date), None)

    def with_record(self, record: DailyRecord) -> Journal:
        kept = [r for r in self.records if r.date != record.date]
        kept.append(record)
        kept.sort(key=lambda r: r.date)
        return Journal(tuple(kept), self.path)


def parse_journal(text: str, path: Path | None = None) -> Journal:
    records: dict[dt.date, DailyRecord] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        date_text, _, rest = stripped.partition(" ")
        try:
            date = parse_date(date_text)
        except ValueError as exc:
            raise KolamParseError(str(exc), lineno, 1) from None
        if date in records:
            raise KolamParseError(f"second record for {date}", lineno, 1)
        try:
            fields = parse_assignments(rest.strip())
        except AssignmentError as exc:
            raise KolamParseError(str(exc), lineno, line.find(exc.token) + 1 if exc.token else None) from None
        records[date] = DailyRecord(date, fields)
    return Journal(tuple(records[d] for d in sorted(records)), path)


def format_journal(journal: Journal) -> str:
    return "".join(format_record(r) + "\n" for r in journal.records)


def load_journal(path: str | os.PathLike) -> Journal:
    path = Path(path)
    return parse_journal(path.read_text(encoding="utf-8"), path)


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_journal(journal: Journal, path: str | os.PathLike | None = None) -> None:
    target = path if path is not None else journal.path
    if target is None:
        raise JournalError("journal has no path to save to")
    atomic_write(target, format_journal(journal))


def journal_add(path: str | os.PathLike, date: str | dt.date, assignments: list[str] | str) -> Journal:
    """Add or replace the record for ``date``; a missing file starts a new journal."""
    if isinstance(date, str):
        date = parse_date(date)
    record = DailyRecord(date, parse_assignments(assignments))
    path = Path(path)
    journal = load_journal(path) if path.exists() else Journal((), path)
    journal = journal.with_record(record)
    save_journal(journal, path)
    return journal


class PatternSource:
    """Maps a pattern index to a gate config for one grid and symmetry.

    Uses the exhaustive catalog where it is tractable; otherwise runs the
    seeded search with the index as seed.
    """

    def __init__(self, grid: GridSpec, symmetry: SymmetryGroup):
        self.grid = grid
        self.symmetry = symmetry
        try:
            self.catalog: Catalog | None = enumerate_single_loop(grid, symmetry)
        except TooLargeError:
            self.catalog = None
        self._found: dict[int, GateConfig] = {}

    def config(self, index: int) -> GateConfig:
        if self.catalog is not None:
            return pattern_for_category(self.catalog, index)
        if index not in self._found:
            self._found[index] = find_single_loop(SearchRequest(self.grid, self.symmetry, seed=index))
        return self._found[index]


def day_filename(date: dt.date) -> str:
    return f"kolam-{date.isoformat()}.svg"


def plan_journal(journal: Journal, spec: MappingSpec,
                 params: RenderParams | None = None) -> list[tuple[DailyRecord, RenderPlan]]:
    """Resolve every record; the first failure aborts with its date in the message."""
    if not journal.records:
        raise JournalError("no records")
    plans = []
    for record in journal.records:
        try:
            plans.append((record, resolve(spec, record, params)))
        except MappingError as exc:
            text = str(exc)
            if not text.startswith(record.label):
                text = f"{record.label}: {text}"
            raise type(exc)(text) from None
    return plans


def journal_render(journal_path: str | os.PathLike, spec_path: str | os.PathLike, out_dir: str | os.PathLike,
                   params: RenderParams | None = None, workers: int = 1) -> list[Path]:
    """Render one SVG per record plus a contact sheet; returns paths in write order."""
    params = params or RenderParams()
    journal = load_journal(journal_path)
    spec = load_spec(Path(spec_path).read_text(encoding="utf-8"), params)
    plans = plan_journal(journal, spec, params)
    patterns = PatternSource(spec.grid, spec.symmetry)
    configs = []
    for record, plan in plans:
        try:
            configs.append(patterns.config(plan.pattern_index))
        except NoPatternError as exc:
            raise NoPatternError(f"{record.date}: {exc}") from None

    def draw(k: int) -> str:
        return render_svg(configs[k], plans[k][1], params)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            documents = list(pool.map(draw, range(len(plans))))
    else:
        documents = [draw(k) for k in range(len(plans))]

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for (record, _), doc in zip(plans, documents):
        target = out / day_filename(record.date)
        atomic_write(target, doc)
        written.append(target)
    captions = [record.date.isoformat() for record, _ in plans]
    sheet = out / SHEET_NAME
    atomic_write(sheet, contact_sheet(documents, SHEET_COLUMNS, captions))
    written.append(sheet)
    return written
