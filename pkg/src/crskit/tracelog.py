"""Append-only, hash-chained change log (criterion C5).

JSON Lines; each record carries a `chain` field:
sha-256(previous chain bytes || canonical record bytes), genesis-seeded
from 32 zero bytes. Rewriting, reordering, or deleting any historical
line breaks the chain of the line after it, so "traceable" is checkable
rather than taken on trust. Truncating the tip record is the one edit a
self-contained file cannot expose.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from . import canon, vocab
from .errors import AppendError, CanonError, CrsError

LOG_FILENAME = "CHANGES.crs.jsonl"
GENESIS_CHAIN = "0" * 64

_RECORD_KEYS = frozenset(
    {"recorded_at", "change_kind", "affected_points", "description", "actor"}
)


@dataclass(frozen=True)
class TraceRecord:
    recorded_at: datetime
    change_kind: str
    affected_points: tuple[str, ...]
    description: str
    actor: str

    def __post_init__(self):
        if self.change_kind not in vocab.CHANGE_KINDS:
            raise CanonError(f"unknown change kind: {self.change_kind!r}")
        if self.recorded_at.tzinfo is None:
            raise CanonError("recorded_at must be timezone-aware")
        if len(set(self.affected_points)) != len(self.affected_points):
            raise CanonError("affected_points must be unique within a record")
        if not self.affected_points and self.change_kind != "version-released":
            raise CanonError(
                f"{self.change_kind} records must list the impacted points"
            )


@dataclass(frozen=True)
class TraceLog:
    records: tuple[TraceRecord, ...]
    source_path: str
    tail_chain: str = GENESIS_CHAIN


@dataclass(frozen=True)
class LogValidation:
    valid: bool
    reason: str | None = None


def record_body(record: TraceRecord | dict) -> dict:
    if isinstance(record, dict):
        return {k: record[k] for k in sorted(record) if k != "chain"}
    return {
        "actor": record.actor,
        "affected_points": list(record.affected_points),
        "change_kind": record.change_kind,
        "description": record.description,
        "recorded_at": canon.format_utc(record.recorded_at),
    }


def body_bytes(body: dict) -> bytes:
    return canon.canonical_json_bytes(body)


def chain_digest(prev_chain_hex: str, body: bytes) -> str:
    return hashlib.sha256(bytes.fromhex(prev_chain_hex) + body).hexdigest()


def new_log(path: str | Path) -> TraceLog:
    return TraceLog(records=(), source_path=str(path))


def append_record(log: TraceLog, record: TraceRecord) -> TraceLog:
    """Append one record; the file at log.source_path grows by one line.

    Appends to a given log must be serialized by the caller (single-writer).
    """
    if log.records and record.recorded_at < log.records[-1].recorded_at:
        raise AppendError(
            f"record at {canon.format_utc(record.recorded_at)} predates the "
            f"log tail {canon.format_utc(log.records[-1].recorded_at)}"
        )
    body = record_body(record)
    chain = chain_digest(log.tail_chain, body_bytes(body))
    line_obj = dict(body)
    line_obj["chain"] = chain
    with open(log.source_path, "a", encoding="utf-8") as fh:
        fh.write(canon.canonical_json_bytes(line_obj).decode("utf-8") + "\n")
    return TraceLog(
        records=log.records + (record,),
        source_path=log.source_path,
        tail_chain=chain,
    )


def _parse_record(obj: dict, lineno: int) -> TraceRecord:
    unknown = set(obj) - _RECORD_KEYS - {"chain"}
    if unknown:
        raise CrsError(f"line {lineno}: unknown fields {sorted(unknown)}")
    missing = (_RECORD_KEYS | {"chain"}) - set(obj)
    if missing:
        raise CrsError(f"line {lineno}: missing fields {sorted(missing)}")
    points = obj["affected_points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise CrsError(f"line {lineno}: affected_points must be a list of strings")
    try:
        return TraceRecord(
            recorded_at=canon.parse_utc(obj["recorded_at"]),
            change_kind=obj["change_kind"],
            affected_points=tuple(points),
            description=obj["description"],
            actor=obj["actor"],
        )
    except CanonError as exc:
        raise CrsError(f"line {lineno}: {exc}") from None


def validate_log(path: str | Path) -> LogValidation:
    """Valid iff parseable, chronologically monotonic, and the chain hashes
    verify end to end."""
    p = Path(path)
    if not p.exists():
        return LogValidation(valid=False, reason="absent")
    prev_chain = GENESIS_CHAIN
    prev_time = None
    lines = p.read_text(encoding="utf-8").splitlines()
    if not any(line.strip() for line in lines):
        return LogValidation(valid=False, reason="empty log")
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            return LogValidation(False, f"line {lineno}: bad JSON: {exc.msg}")
        if not isinstance(obj, dict):
            return LogValidation(False, f"line {lineno}: not an object")
        try:
            record = _parse_record(obj, lineno)
        except CrsError as exc:
            return LogValidation(False, str(exc))
        expected = chain_digest(prev_chain, body_bytes(record_body(obj)))
        if obj["chain"] != expected:
            return LogValidation(False, f"chain hash mismatch at line {lineno}")
        if prev_time is not None and record.recorded_at < prev_time:
            return LogValidation(False, "dates not monotonic")
        prev_chain = obj["chain"]
        prev_time = record.recorded_at
    return LogValidation(valid=True)


def load_log(path: str | Path) -> TraceLog:
    """Strict read of an existing log (raises on structural problems)."""
    p = Path(path)
    records = []
    prev_chain = GENESIS_CHAIN
    for lineno, line in enumerate(
        p.read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CrsError(f"{p}:{lineno}: bad JSON: {exc.msg}") from None
        records.append(_parse_record(obj, lineno))
        prev_chain = obj.get("chain", prev_chain)
    return TraceLog(records=tuple(records), source_path=str(p), tail_chain=prev_chain)
