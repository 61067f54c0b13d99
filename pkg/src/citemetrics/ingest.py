"""CSV ingestion and workspace persistence for journal-year tables.

Input schema (UTF-8, comma separated, dot decimals, header required):

    journal_id,year,citations,impact_factor,articles

Workspace layout:

    <dir>/manifest.json
    <dir>/data/<discipline>_<basis>_<year>.csv

Writes to a workspace are serialized through an advisory lock file and all
file replacements go through write-temp-then-rename, so a workspace survives
interrupted runs. Reads are freely concurrent.
"""

from __future__ import annotations

import csv
import fcntl
import hashlib
import json
import os
import tempfile
import warnings
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable

from .errors import ValidationError, WorkspaceError
from .model import Basis, Discipline, JournalYearRecord, RankedSet

COLUMNS = ("journal_id", "year", "citations", "impact_factor", "articles")
MANIFEST_NAME = "manifest.json"
DATA_DIR = "data"
LOCK_NAME = ".lock"


def _parse_int(text: str, column: str, line_no: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValidationError(
            f"line {line_no}: column {column!r} must be an integer, got {text!r}"
        ) from None
    if value < 0:
        raise ValidationError(f"line {line_no}: column {column!r} must be >= 0, got {value}")
    return value


def _parse_float(text: str, column: str, line_no: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(
            f"line {line_no}: column {column!r} must be numeric, got {text!r}"
        ) from None
    if value < 0:
        raise ValidationError(f"line {line_no}: column {column!r} must be >= 0, got {value}")
    return value


def parse_csv(path: str | Path) -> list[JournalYearRecord]:
    """Parse a journal-year CSV into records, validating every field.

    Fields are whitespace-trimmed; numerics use the dot decimal separator
    regardless of locale. Unknown extra columns are ignored with a warning.
    Errors carry the 1-based line number of the offending row.
    """
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file, header row required") from None
        header = [h.strip() for h in header]
        missing = [c for c in COLUMNS if c not in header]
        if missing:
            raise ValidationError(f"{path}: missing column(s) {', '.join(missing)}")
        extra = [h for h in header if h not in COLUMNS]
        if extra:
            warnings.warn(
                f"{path}: ignoring extra column(s) {', '.join(extra)}", stacklevel=2
            )
        index = {c: header.index(c) for c in COLUMNS}

        records = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < len(header):
                raise ValidationError(
                    f"line {line_no}: expected {len(header)} fields, got {len(row)}"
                )
            cell = {c: row[index[c]].strip() for c in COLUMNS}
            records.append(
                JournalYearRecord(
                    journal_id=cell["journal_id"],
                    year=_parse_int(cell["year"], "year", line_no),
                    citations=_parse_int(cell["citations"], "citations", line_no),
                    impact_factor=_parse_float(cell["impact_factor"], "impact_factor", line_no),
                    articles=_parse_int(cell["articles"], "articles", line_no),
                )
            )
    return records


def write_csv(path: str | Path, records: Iterable[JournalYearRecord]) -> None:
    """Write records in the canonical column order.

    Floats use shortest round-trip formatting so parse(write(x)) == x
    bit-exactly.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for rec in records:
            writer.writerow(
                [rec.journal_id, rec.year, rec.citations, repr(rec.impact_factor), rec.articles]
            )


# --- workspace -------------------------------------------------------------


def _digest(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def _dataset_filename(discipline: Discipline, basis: Basis, year: int) -> str:
    return f"{discipline.value}_{basis.value}_{year}.csv"


@contextmanager
def _workspace_lock(workspace_dir: Path):
    """Advisory exclusive lock over workspace mutations."""
    workspace_dir.mkdir(parents=True, exist_ok=True)
    lock_path = workspace_dir / LOCK_NAME
    with lock_path.open("a") as fh:
        fcntl.flock(fh.fileno(), fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(fh.fileno(), fcntl.LOCK_UN)


def _atomic_write(path: Path, data: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_manifest(workspace_dir: str | Path) -> list[dict]:
    """Manifest entries of a workspace; empty list if none exists yet."""
    manifest_path = Path(workspace_dir) / MANIFEST_NAME
    if not manifest_path.exists():
        return []
    payload = json.loads(manifest_path.read_text(encoding="utf-8"))
    return payload.get("entries", [])


def _write_manifest(workspace_dir: Path, entries: list[dict]) -> None:
    entries = sorted(entries, key=lambda e: (e["discipline"], e["basis"], e["year"]))
    _atomic_write(
        workspace_dir / MANIFEST_NAME,
        json.dumps({"entries": entries}, indent=2, sort_keys=True) + "\n",
    )


def store_dataset(
    workspace_dir: str | Path, ranked: RankedSet, overwrite: bool = False
) -> dict:
    """Persist a RankedSet as normalized CSV and register it in the manifest.

    The (discipline, basis, year) triple must be unique within the workspace
    unless ``overwrite`` is set. Returns the manifest entry.
    """
    workspace_dir = Path(workspace_dir)
    with _workspace_lock(workspace_dir):
        entries = read_manifest(workspace_dir)
        key = (ranked.discipline.value, ranked.basis.value, ranked.year)
        clashing = [
            e for e in entries if (e["discipline"], e["basis"], e["year"]) == key
        ]
        if clashing and not overwrite:
            raise WorkspaceError(
                f"dataset {key[0]}:{key[1]}:{key[2]} already stored; pass overwrite to replace"
            )
        entries = [e for e in entries if e not in clashing]

        data_dir = workspace_dir / DATA_DIR
        data_dir.mkdir(exist_ok=True)
        target = data_dir / _dataset_filename(ranked.discipline, ranked.basis, ranked.year)
        fd, tmp = tempfile.mkstemp(dir=data_dir, prefix=target.name, suffix=".tmp")
        os.close(fd)
        try:
            write_csv(tmp, ranked.records)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

        entry = {
            "discipline": ranked.discipline.value,
            "basis": ranked.basis.value,
            "year": ranked.year,
            "row_count": len(ranked),
            "cap": ranked.cap,
            "source_path": f"{DATA_DIR}/{target.name}",
            "content_digest": _digest(target),
        }
        entries.append(entry)
        _write_manifest(workspace_dir, entries)
    return entry


def load_dataset(
    workspace_dir: str | Path, discipline: Discipline, basis: Basis, year: int
) -> RankedSet:
    """Reload a stored dataset, verifying its content digest first."""
    workspace_dir = Path(workspace_dir)
    entries = read_manifest(workspace_dir)
    key = (discipline.value, basis.value, year)
    matches = [e for e in entries if (e["discipline"], e["basis"], e["year"]) == key]
    if not matches:
        known = ", ".join(
            f"{e['discipline']}:{e['basis']}:{e['year']}" for e in entries
        )
        raise WorkspaceError(
            f"no dataset {key[0]}:{key[1]}:{key[2]} in workspace"
            + (f"; available: {known}" if known else "; workspace is empty")
        )
    entry = matches[0]
    data_path = workspace_dir / entry["source_path"]
    if not data_path.exists():
        raise WorkspaceError(f"manifest references missing file {data_path}")
    actual = _digest(data_path)
    if actual != entry["content_digest"]:
        raise WorkspaceError(
            f"digest mismatch for {data_path.name}: stored {entry['content_digest']}, "
            f"actual {actual}; file is corrupt"
        )
    records = parse_csv(data_path)
    return RankedSet(
        discipline=discipline,
        basis=basis,
        year=year,
        records=tuple(records),
        cap=entry.get("cap", max(len(records), 1)),
    )
