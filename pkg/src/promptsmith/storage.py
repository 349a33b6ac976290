"""Durable session storage: one JSON record per session.

The event log inside a record is the source of truth; the snapshot is a
cache that load() cross-checks against an event replay. Writes are
atomic (temp file then rename) so interrupted saves never corrupt an
existing record.
"""

from __future__ import annotations

import errno
import json
import os
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import CorruptRecord, NotFound, SchemaMismatch, SerializationFailure, StorageFull
from .wizard import Session, compose_prompt_text, event_from_dict, replay, snapshot

SCHEMA_VERSION = 1

_SAFE_ID = re.compile(r"^[A-Za-z0-9_-]+$")


@dataclass(frozen=True)
class SessionSummary:
    id: str
    updated: str
    prompt_preview: str


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, session_id: str) -> Path:
        if not _SAFE_ID.match(session_id):
            raise NotFound(f"No session named '{session_id}' exists.")
        return self.root / f"{session_id}.json"

    def save(self, session: Session, meta: dict | None = None) -> Path:
        """Atomically write the session record and return its location."""
        record = {
            "schema_version": SCHEMA_VERSION,
            "session": snapshot(session),
            "meta": meta or {},
        }
        try:
            payload = json.dumps(record, ensure_ascii=False, indent=2, sort_keys=True)
        except (TypeError, ValueError) as exc:
            raise SerializationFailure(f"The session could not be serialized: {exc}") from exc

        target = self._path(session.id)
        tmp = target.with_name(target.name + ".tmp")
        try:
            with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(payload + "\n")
            os.replace(tmp, target)
        except OSError as exc:
            tmp.unlink(missing_ok=True)
            if exc.errno == errno.ENOSPC:
                raise StorageFull("There is no space left to save the session.") from exc
            raise StorageFull(f"The session could not be saved: {exc}") from exc
        return target

    def load(self, session_id: str) -> Session:
        """Rebuild a session by replaying its event log."""
        path = self._path(session_id)
        if not path.is_file():
            raise NotFound(f"No session named '{session_id}' exists.")
        try:
            record = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptRecord(f"The session record could not be read: {exc}") from exc
        return self._restore(record)

    def _restore(self, record: dict) -> Session:
        if not isinstance(record, dict) or "schema_version" not in record:
            raise CorruptRecord("The session record is missing its schema version.")
        if record["schema_version"] != SCHEMA_VERSION:
            raise SchemaMismatch(
                f"The session record uses schema {record['schema_version']}, "
                f"but this build reads schema {SCHEMA_VERSION}."
            )
        try:
            stored = record["session"]
            events = [event_from_dict(item) for item in stored["events"]]
            session = replay(
                events,
                session_id=stored["id"],
                created=stored["created"],
                updated=stored["updated"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptRecord(f"The session record is incomplete: {exc}") from exc

        # The snapshot is only a cache; refuse records where it disagrees
        # with the replayed event log.
        for field_name in ("step", "environment", "subjects", "actions", "scene", "style"):
            if getattr(session, field_name) != stored.get(field_name):
                raise CorruptRecord(
                    f"The session record's snapshot disagrees with its event log "
                    f"({field_name})."
                )
        return session

    def list_sessions(self) -> list[SessionSummary]:
        """All stored sessions, newest first. Unreadable files are skipped."""
        summaries = []
        for path in self.root.glob("*.json"):
            try:
                record = json.loads(path.read_text(encoding="utf-8"))
                stored = record["session"]
                events = [event_from_dict(item) for item in stored["events"]]
                session = replay(events, stored["id"], stored["created"], stored["updated"])
                preview = compose_prompt_text(session) or ""
                summaries.append(SessionSummary(stored["id"], stored["updated"], preview))
            except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError):
                continue
        summaries.sort(key=lambda item: (item.updated, item.id), reverse=True)
        return summaries
