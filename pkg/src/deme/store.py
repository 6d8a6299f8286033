"""Durable append-only event log plus snapshot archive import/export.

Layout: one directory per deployment holding ``events.log``, one canonical
JSON record per line, UTF-8, gapless ``seq`` starting at 1. An archive is the
same records preceded by the header line ``deme-archive v1``. Records are
always serialized canonically (sorted keys, compact separators), so
export -> import -> export reproduces archives byte for byte.

Every append is flushed and fsynced before it is acknowledged; a record that
was acknowledged survives a hard kill. Loading is strict: the first
truncated, unparseable, or out-of-sequence record aborts with
:class:`~deme.errors.CorruptLog` naming its seq.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable

from .errors import CorruptLog, NonEmptyTarget, SchemaMismatch, StorageFailure

SCHEMA_VERSION = 1
ARCHIVE_HEADER = f"deme-archive v{SCHEMA_VERSION}"
_ARCHIVE_HEADER_RE = re.compile(r"^deme-archive v(\d+)$")

MEMBER_ADDED = "member_added"
DOCUMENT_CREATED = "document_created"
VERSION_ADDED = "version_added"
COMMENT_ADDED = "comment_added"
PERTINENCE_CHANGED = "pertinence_changed"
POLL_OPENED = "poll_opened"
VOTE_CAST = "vote_cast"
POLL_CLOSED = "poll_closed"

EVENT_KINDS = frozenset(
    {
        MEMBER_ADDED,
        DOCUMENT_CREATED,
        VERSION_ADDED,
        COMMENT_ADDED,
        PERTINENCE_CHANGED,
        POLL_OPENED,
        VOTE_CAST,
        POLL_CLOSED,
    }
)


@dataclass(frozen=True)
class Event:
    seq: int
    kind: str
    payload: dict
    occurred_at: datetime

    def to_line(self) -> str:
        record = {
            "seq": self.seq,
            "kind": self.kind,
            "payload": self.payload,
            "occurred_at": self.occurred_at.isoformat(),
        }
        return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str, expected_seq: int) -> Event:
        try:
            record = json.loads(line)
            seq = record["seq"]
            kind = record["kind"]
            payload = record["payload"]
            occurred_at = datetime.fromisoformat(record["occurred_at"])
            if seq != expected_seq:
                raise ValueError(f"expected seq {expected_seq}, found {seq}")
            if kind not in EVENT_KINDS:
                raise ValueError(f"unknown event kind {kind!r}")
            if not isinstance(payload, dict):
                raise ValueError("payload is not an object")
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptLog(expected_seq, f"corrupt event log: bad record at seq {expected_seq}: {exc}") from exc
        return cls(seq=seq, kind=kind, payload=payload, occurred_at=occurred_at)


class EventLog:
    """Single-writer append-only log backed by ``<data_dir>/events.log``."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.path = self.data_dir / "events.log"
        self._handle: IO[bytes] | None = None
        self._last_seq = 0
        # Byte length the file must have before our next append; guards the
        # single-writer contract against a second process interleaving writes.
        self._expected_size: int | None = None

    @property
    def last_seq(self) -> int:
        return self._last_seq

    def load(self) -> list[Event]:
        """Read and validate the whole log; positions the writer at its end."""
        events: list[Event] = []
        data = b""
        if self.path.exists():
            with self.path.open("rb") as fh:
                data = fh.read()
            if data:
                # A log written by us always ends in a newline; a missing one
                # means the final record was truncated mid-write.
                chunks = data.split(b"\n")
                trailing_partial = chunks[-1] != b""
                lines = chunks[:-1] if not trailing_partial else chunks
                for idx, raw in enumerate(lines, start=1):
                    if trailing_partial and idx == len(lines):
                        try:
                            text = raw.decode("utf-8")
                        except UnicodeDecodeError:
                            raise CorruptLog(idx, f"corrupt event log: truncated record at seq {idx}") from None
                        raise CorruptLog(idx, f"corrupt event log: truncated record at seq {idx}")
                    try:
                        text = raw.decode("utf-8")
                    except UnicodeDecodeError as exc:
                        raise CorruptLog(idx, f"corrupt event log: undecodable record at seq {idx}") from exc
                    events.append(Event.from_line(text, idx))
        self._last_seq = len(events)
        self._expected_size = len(data)
        return events

    def append(self, kind: str, payload: dict, occurred_at: datetime) -> Event:
        event = Event(self._last_seq + 1, kind, payload, occurred_at)
        self.append_existing(event)
        return event

    def append_existing(self, event: Event) -> None:
        """Write an already-sequenced event (used by archive import)."""
        if self._expected_size is None:
            raise StorageFailure("log must be loaded before appending")
        if event.seq != self._last_seq + 1:
            raise StorageFailure(
                f"append out of sequence: got {event.seq}, expected {self._last_seq + 1}"
            )
        payload = (event.to_line() + "\n").encode("utf-8")
        try:
            handle = self._writer()
            actual_size = os.fstat(handle.fileno()).st_size
            if actual_size != self._expected_size:
                raise StorageFailure(
                    f"{self.path} changed on disk (expected {self._expected_size} bytes, "
                    f"found {actual_size}); is another process writing this data dir?"
                )
            handle.write(payload)
            handle.flush()
            os.fsync(handle.fileno())
        except OSError as exc:
            raise StorageFailure(f"cannot append to {self.path}: {exc}") from exc
        self._last_seq = event.seq
        self._expected_size += len(payload)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def _writer(self) -> IO[bytes]:
        if self._handle is None:
            self._handle = self.path.open("ab")
        return self._handle


def export_archive(events: Iterable[Event], path: str | Path) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(ARCHIVE_HEADER + "\n")
            for event in events:
                fh.write(event.to_line() + "\n")
            fh.flush()
            os.fsync(fh.fileno())
    except OSError as exc:
        raise StorageFailure(f"cannot write archive {path}: {exc}") from exc


def read_archive(path: str | Path) -> list[Event]:
    """Parse an archive file; schema must be ours or older."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise StorageFailure(f"cannot read archive {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise SchemaMismatch(f"archive {path} is not UTF-8: {exc}") from exc
    lines = text.split("\n")
    match = _ARCHIVE_HEADER_RE.match(lines[0]) if lines else None
    if match is None:
        raise SchemaMismatch(f"archive {path} has no recognizable header")
    found = int(match.group(1))
    if found > SCHEMA_VERSION:
        raise SchemaMismatch(
            f"archive schema v{found} is newer than supported v{SCHEMA_VERSION}"
        )
    events = []
    for idx, raw in enumerate((ln for ln in lines[1:] if ln != ""), start=1):
        events.append(Event.from_line(raw, idx))
    return events


def import_archive(log: EventLog, path: str | Path) -> list[Event]:
    """Load an archive into an empty deployment's log."""
    if log.last_seq != 0:
        raise NonEmptyTarget(
            f"target already holds {log.last_seq} events; import requires an empty deployment"
        )
    events = read_archive(path)
    for event in events:
        log.append_existing(event)
    return events
