"""Durable stores: the append-only event log, sealed blobs, snapshots.

The event log is newline-delimited canonical JSON; every record carries a
content digest and a strictly increasing global sequence number. A torn
final line (no trailing newline, from a crash mid-write) is dropped on open;
any other malformed line, digest mismatch, or sequence gap is corruption.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Optional

from cfe_registry.errors import StorageCorruption
from cfe_registry.formats.canonical import canonical_bytes, canonical_digest

EVENTS_FILE = "events.log"
BLOBS_DIR = "blobs"
SNAPSHOTS_DIR = "snapshots"
OUTBOX_FILE = "outbox.log"


def record_digest(global_seq: int, kind: str, recorded_at: str, body: dict) -> str:
    return canonical_digest(
        {"global_seq": global_seq, "kind": kind, "recorded_at": recorded_at, "body": body}
    )


class EventLog:
    def __init__(self, data_dir: str | Path, durable: bool = True):
        self.path = Path(data_dir) / EVENTS_FILE
        self.durable = durable
        self._handle = None

    def read_all(self) -> list[dict]:
        """Verify and return every record; drops a torn trailing write."""
        if not self.path.exists():
            return []
        raw = self.path.read_bytes()
        if not raw:
            return []
        complete, _, torn = raw.rpartition(b"\n")
        if torn:
            # crash mid-write: discard the unterminated tail
            self.path.write_bytes(complete + b"\n" if complete else b"")
        records: list[dict] = []
        expected_seq = 1
        for lineno, line in enumerate(complete.split(b"\n") if complete else [], start=1):
            try:
                record = json.loads(line.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise StorageCorruption(f"events.log line {lineno}: unparseable record: {exc}")
            if not isinstance(record, dict):
                raise StorageCorruption(f"events.log line {lineno}: record is not an object")
            expected = record_digest(
                record.get("global_seq"), record.get("kind"), record.get("recorded_at"), record.get("body")
            )
            if record.get("digest") != expected:
                raise StorageCorruption(f"events.log line {lineno}: digest mismatch")
            if record["global_seq"] != expected_seq:
                raise StorageCorruption(
                    f"events.log line {lineno}: global_seq {record['global_seq']}, expected {expected_seq}"
                )
            expected_seq += 1
            records.append(record)
        return records

    def append(self, record: dict) -> None:
        """Durably append one verified record (flush + fsync before returning)."""
        if self._handle is None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = open(self.path, "ab")
        self._handle.write(canonical_bytes(record) + b"\n")
        self._handle.flush()
        if self.durable:
            os.fsync(self._handle.fileno())

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


class BlobStore:
    """Sealed content-addressed payloads; written once, never served."""

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir) / BLOBS_DIR

    def put(self, raw: bytes) -> str:
        digest = hashlib.sha256(raw).hexdigest()
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / digest
        if not path.exists():
            path.write_bytes(raw)
        return f"sha256:{digest}"

    def exists(self, digest: str) -> bool:
        return (self.root / digest.removeprefix("sha256:")).exists()


class SnapshotStore:
    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir) / SNAPSHOTS_DIR

    def write(self, global_seq: int, payload: bytes) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / f"{global_seq:012d}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(payload)
        os.replace(tmp, path)
        return path

    def latest(self) -> Optional[tuple[int, bytes]]:
        if not self.root.exists():
            return None
        candidates = sorted(p for p in self.root.glob("*.json"))
        if not candidates:
            return None
        path = candidates[-1]
        return int(path.stem), path.read_bytes()


class Outbox:
    """Notification records awaiting out-of-band delivery (transport out of scope)."""

    def __init__(self, data_dir: str | Path):
        self.path = Path(data_dir) / OUTBOX_FILE

    def notified_case_ids(self) -> set[str]:
        ids: set[str] = set()
        if not self.path.exists():
            return ids
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                try:
                    ids.add(json.loads(line)["case_id"])
                except (json.JSONDecodeError, KeyError):
                    continue
        return ids

    def write(self, notification: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "ab") as handle:
            handle.write(canonical_bytes(notification) + b"\n")
            handle.flush()
