"""JSON implementation of the KnotRepository.

A database file is a JSON array of record objects. Each object carries the
``KnotRecord`` fields plus an optional ``provenance`` object mapping field
names to ``"asserted"`` or ``"derived:<rule id>"``. Files are re-read only
when their modification time changes.
"""

from __future__ import annotations

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from instanton_calculus.domain.models import Contradiction, Database, KnotRecord, record_fields
from instanton_calculus.repository.base import KnotRepository
from instanton_calculus.services.inference_service import (
    DEFAULT_NU_BOUND,
    apply_rules,
    check_consistency,
)

logger = logging.getLogger(__name__)

SEED_RESOURCE = "seed_knots.json"


class DatabaseError(ValueError):
    """A database file could not be parsed, validated or reconciled."""

    def __init__(self, message: str, contradictions: list[Contradiction] | None = None) -> None:
        super().__init__(message)
        self.contradictions = contradictions or []


# ── Parsing ──────────────────────────────────────────────────────────────


def _format_validation(index: int, name: str, err: ValidationError) -> str:
    parts = []
    for item in err.errors():
        where = ".".join(str(x) for x in item["loc"]) or "<record>"
        parts.append(f"{where}: {item['msg']}")
    return f"record #{index} ({name}): " + "; ".join(parts)


def parse_database(
    text: str, source: str = "<string>", force: bool = False, bound: int = DEFAULT_NU_BOUND
) -> Database:
    """Build a Database from JSON text.

    Raises:
        DatabaseError: On malformed JSON, invalid records, duplicate names, or
            (unless ``force``) records the inference rules refute
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DatabaseError(
            f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    if not isinstance(raw, list):
        raise DatabaseError(f"{source}: expected a JSON array of records")

    db = Database()
    contradictions: list[Contradiction] = []
    problems: list[str] = []
    for index, item in enumerate(raw):
        if not isinstance(item, dict):
            raise DatabaseError(f"{source}: record #{index} is not an object")
        item = dict(item)
        provenance = item.pop("provenance", None)
        name = str(item.get("name", "?"))
        try:
            record = KnotRecord.model_validate(item)
        except ValidationError as e:
            raise DatabaseError(f"{source}: {_format_validation(index, name, e)}") from e
        if record.name in db.records:
            raise DatabaseError(f"{source}: duplicate record name {record.name!r}")
        if provenance is not None and not isinstance(provenance, dict):
            raise DatabaseError(f"{source}: record {name!r} has a non-object provenance")
        bad_tags = [
            t for t in (provenance or {}).values()
            if not isinstance(t, str) or not (t == "asserted" or t.startswith("derived:"))
        ]
        if bad_tags:
            raise DatabaseError(f"{source}: record {name!r} has invalid provenance tags {bad_tags}")

        for rule_id, msg in record.invariant_violations():
            problems.append(f"{record.name}: {rule_id}: {msg}")
        found = check_consistency(record, bound)
        for c in found:
            problems.append(f"{record.name}: {c.message}")
        contradictions.extend(found)
        db.add(record, provenance)

    if problems:
        message = f"{source}: inconsistent records:\n" + "\n".join(f"  - {p}" for p in problems)
        if not force:
            raise DatabaseError(message, contradictions)
        logger.warning(message)
    logger.debug("Parsed %d records from %s", len(db.records), source)
    return db


def load_database(
    path: Path, force: bool = False, bound: int = DEFAULT_NU_BOUND
) -> Database:
    if not path.exists():
        raise FileNotFoundError(f"Knot database not found: {path}")
    logger.debug("Loading knot database: %s", path)
    return parse_database(path.read_text(encoding="utf-8"), str(path), force, bound)


def parse_record(text: str, source: str = "<string>") -> KnotRecord:
    """One record from a JSON object or a one-element array.

    Only field validation runs; consistency is left to the caller.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DatabaseError(
            f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    if isinstance(raw, list):
        if len(raw) != 1:
            raise DatabaseError(f"{source}: expected a single record, found {len(raw)}")
        raw = raw[0]
    if not isinstance(raw, dict):
        raise DatabaseError(f"{source}: expected a JSON object")
    item = {k: v for k, v in raw.items() if k != "provenance"}
    try:
        return KnotRecord.model_validate(item)
    except ValidationError as e:
        name = str(item.get("name", "?"))
        raise DatabaseError(f"{source}: {_format_validation(0, name, e)}") from e


def load_record(path: Path) -> KnotRecord:
    if not path.exists():
        raise FileNotFoundError(f"Record file not found: {path}")
    return parse_record(path.read_text(encoding="utf-8"), str(path))


def load_seed_database() -> Database:
    """The packaged database of small knots and their mirrors."""
    text = resources.files("instanton_calculus.data").joinpath(SEED_RESOURCE).read_text(
        encoding="utf-8"
    )
    return parse_database(text, SEED_RESOURCE)


# ── Serialization ────────────────────────────────────────────────────────


def database_to_json(db: Database) -> str:
    """Canonical form: records by name, keys sorted, two-space indent."""
    items: list[dict[str, Any]] = []
    for name in sorted(db.records):
        data = db.records[name].to_json_dict()
        tags = db.provenance.get(name, {})
        derived = {f: t for f, t in tags.items() if t != "asserted"}
        if derived:
            data["provenance"] = derived
        items.append(data)
    return json.dumps(items, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_database(db: Database, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(database_to_json(db), encoding="utf-8")
    logger.debug("Saved %d records to %s", len(db.records), path)


def merge_records(
    target: Database,
    incoming: Database,
    derive: bool = False,
    bound: int = DEFAULT_NU_BOUND,
) -> list[str]:
    """Copy records from ``incoming`` into ``target``; returns the merged names.

    With ``derive`` each record is first run through the inference engine and
    newly determined fields are tagged ``derived:<rule id>``.
    """
    merged = []
    for name in sorted(incoming.records):
        record = incoming.records[name]
        tags = dict(incoming.provenance.get(name, {}))
        if derive:
            result = apply_rules(record, bound)
            if not result.consistent:
                raise DatabaseError(
                    f"cannot derive facts for inconsistent record {name!r}",
                    result.contradictions,
                )
            last_rule = {d.field: d.rule_id for d in result.derivations}
            asserted = set(record_fields(record))
            for field in record_fields(result.record):
                if field not in asserted and field in last_rule:
                    tags[field] = f"derived:{last_rule[field]}"
            record = result.record
        target.add(record, tags)
        merged.append(name)
    return merged


# ── Repository ───────────────────────────────────────────────────────────


class JsonKnotRepository(KnotRepository):
    """File-backed repository; ``None`` path serves the packaged seed."""

    def __init__(self, path: Path | None = None, force: bool = False) -> None:
        self.path = path
        self.force = force
        self._db: Database | None = None
        self._mtime: float = 0.0

    def _ensure_data_loaded(self) -> Database:
        if self.path is None:
            if self._db is None:
                self._db = load_seed_database()
            return self._db
        mtime = self.path.stat().st_mtime if self.path.exists() else 0.0
        if self._db is None or mtime != self._mtime:
            self._db = load_database(self.path, self.force)
            self._mtime = mtime
        return self._db

    def invalidate_cache(self) -> None:
        self._db = None
        self._mtime = 0.0

    @property
    def database(self) -> Database:
        return self._ensure_data_loaded()

    def get_record(self, name: str) -> KnotRecord:
        return self._ensure_data_loaded().get(name)

    def list_records(self) -> list[KnotRecord]:
        db = self._ensure_data_loaded()
        return [db.records[n] for n in sorted(db.records)]

    def names(self) -> list[str]:
        return sorted(self._ensure_data_loaded().records)
