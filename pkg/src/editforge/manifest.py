"""Append-only JSON-Lines manifests and the per-stage run ledger.

Manifests are written line-at-a-time with periodic fsync (every 64 entries or
1 second). Recovery tolerates exactly one truncated trailing line, which is
discarded with a warning; any earlier undecodable line is corruption.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Optional

from .errors import ManifestCorrupt

logger = logging.getLogger(__name__)

FSYNC_EVERY_N = 64
FSYNC_EVERY_S = 1.0

STATUS_OK = "ok"
STATUS_FAILED = "failed"


def dump_line(obj: dict[str, Any]) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def read_jsonl(path: str | Path) -> Iterator[dict[str, Any]]:
    """Yield manifest entries; a truncated final line is dropped with a warning."""
    path = Path(path)
    if not path.exists():
        return
    with path.open("r", encoding="utf-8") as fh:
        lines = fh.readlines()
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            yield json.loads(stripped)
        except json.JSONDecodeError as exc:
            if i == len(lines) - 1:
                logger.warning("discarding truncated trailing line in %s", path)
                return
            raise ManifestCorrupt(str(path), i + 1, str(exc)) from exc


class JsonlWriter:
    """Single-writer append channel for one manifest file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("a", encoding="utf-8")
        self._lock = threading.Lock()
        self._since_sync = 0
        self._last_sync = time.monotonic()

    def append(self, obj: dict[str, Any]) -> None:
        with self._lock:
            self._fh.write(dump_line(obj) + "\n")
            self._fh.flush()
            self._since_sync += 1
            now = time.monotonic()
            if self._since_sync >= FSYNC_EVERY_N or now - self._last_sync >= FSYNC_EVERY_S:
                os.fsync(self._fh.fileno())
                self._since_sync = 0
                self._last_sync = now

    def close(self) -> None:
        with self._lock:
            self._fh.flush()
            os.fsync(self._fh.fileno())
            self._fh.close()

    def __enter__(self) -> "JsonlWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


@dataclass(frozen=True)
class LedgerEntry:
    stage: str
    record_id: str
    status: str  # ok | failed
    attempt: int
    ts: float
    error: Optional[str] = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "stage": self.stage,
            "record_id": self.record_id,
            "status": self.status,
            "attempt": self.attempt,
            "ts": self.ts,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "LedgerEntry":
        return cls(
            stage=obj["stage"],
            record_id=obj["record_id"],
            status=obj["status"],
            attempt=int(obj.get("attempt", 1)),
            ts=float(obj.get("ts", 0.0)),
            error=obj.get("error"),
        )


class Ledger:
    """Replayable stage ledger: the last entry per (stage, record id) wins."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[tuple[str, str], LedgerEntry] = {}
        for obj in read_jsonl(self.path):
            entry = LedgerEntry.from_json(obj)
            self._entries[(entry.stage, entry.record_id)] = entry
        self._writer: Optional[JsonlWriter] = None
        self._lock = threading.Lock()

    def _ensure_writer(self) -> JsonlWriter:
        if self._writer is None:
            self._writer = JsonlWriter(self.path)
        return self._writer

    def terminal(self, stage: str, record_id: str) -> Optional[LedgerEntry]:
        return self._entries.get((stage, record_id))

    def record(self, stage: str, record_id: str, status: str,
               attempt: int = 1, error: Optional[str] = None) -> LedgerEntry:
        entry = LedgerEntry(stage=stage, record_id=record_id, status=status,
                            attempt=attempt, ts=time.time(), error=error)
        with self._lock:
            self._ensure_writer().append(entry.to_json())
            self._entries[(stage, record_id)] = entry
        return entry

    def entries_for_stage(self, stage: str) -> list[LedgerEntry]:
        return [e for (s, _), e in self._entries.items() if s == stage]

    def all_entries(self) -> list[LedgerEntry]:
        return list(self._entries.values())

    def terminal_set(self) -> set[tuple[str, str, str]]:
        """(stage, record_id, status) triples; the resume-equivalence witness."""
        return {(e.stage, e.record_id, e.status) for e in self._entries.values()}

    def close(self) -> None:
        if self._writer is not None:
            self._writer.close()
            self._writer = None


def dead_letter_list(ledger: Ledger) -> dict[str, dict[str, list[LedgerEntry]]]:
    """Terminal failures grouped by stage, then by error class (the text before
    the first '(' or ':' of the error note)."""
    grouped: dict[str, dict[str, list[LedgerEntry]]] = {}
    for entry in ledger.all_entries():
        if entry.status != STATUS_FAILED:
            continue
        note = entry.error or "unknown"
        klass = note.split("(")[0].split(":")[0].strip() or "unknown"
        grouped.setdefault(entry.stage, {}).setdefault(klass, []).append(entry)
    return grouped
