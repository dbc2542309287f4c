"""Canonical serialization primitives shared by manifests, trace logs, and reports.

Canonical JSON here means: UTF-8, lexicographically sorted keys, no
insignificant whitespace. Signatures and chain hashes are computed over
these bytes, so any change to this module is a wire-format change.
"""

from __future__ import annotations

import json
import re
from datetime import date, datetime, timezone
from urllib.parse import urlsplit, urlunsplit

from .errors import CanonError

# ISO-8601 duration, integer designators only (P5Y, P6M, PT12H, P1DT2H30M, ...)
_DURATION_RE = re.compile(
    r"^P(?!$)(\d+Y)?(\d+M)?(\d+W)?(\d+D)?(T(?=\d)(\d+H)?(\d+M)?(\d+S)?)?$"
)
_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def canonical_json_bytes(obj) -> bytes:
    """Serialize to canonical JSON bytes (sorted keys, compact, UTF-8)."""
    return json.dumps(
        obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def format_utc(dt: datetime) -> str:
    """RFC 3339 UTC timestamp; microseconds emitted only when non-zero."""
    if dt.tzinfo is None:
        raise CanonError("naive datetime cannot be serialized as RFC 3339 UTC")
    dt = dt.astimezone(timezone.utc)
    if dt.microsecond:
        return dt.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_utc(value: str) -> datetime:
    """Parse an RFC 3339 timestamp; result is normalized to UTC."""
    if not isinstance(value, str) or not value:
        raise CanonError(f"not a timestamp: {value!r}")
    text = value
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise CanonError(f"bad RFC 3339 timestamp {value!r}: {exc}") from None
    if dt.tzinfo is None:
        raise CanonError(f"timestamp {value!r} has no UTC offset")
    return dt.astimezone(timezone.utc)


def validate_retention(value: str) -> str:
    """Accept an ISO-8601 duration (P5Y) or an RFC 3339 expiry date."""
    if not isinstance(value, str) or not value:
        raise CanonError(f"empty retention period: {value!r}")
    if _DURATION_RE.match(value):
        return value
    if _DATE_RE.match(value):
        try:
            date.fromisoformat(value)
        except ValueError as exc:
            raise CanonError(f"bad retention date {value!r}: {exc}") from None
        return value
    raise CanonError(
        f"retention period {value!r} is neither an ISO-8601 duration nor a date"
    )


def retention_expiry(value: str) -> date | None:
    """Expiry date for date-form retention periods; None for durations."""
    if _DATE_RE.match(value):
        return date.fromisoformat(value)
    return None


def normalize_source(identifier: str) -> str:
    """Normalize a dataset-source URI for equality checks.

    Lowercases the scheme and host and strips trailing slashes; non-URI
    identifiers only get the trailing-slash strip (paths stay case-sensitive).
    """
    text = identifier.strip()
    parts = urlsplit(text)
    if parts.scheme and (parts.netloc or parts.path):
        return urlunsplit(
            (
                parts.scheme.lower(),
                parts.netloc.lower(),
                parts.path.rstrip("/"),
                parts.query,
                parts.fragment,
            )
        )
    return text.rstrip("/")


def is_hex(value: str, nbytes: int) -> bool:
    if not isinstance(value, str) or len(value) != 2 * nbytes:
        return False
    try:
        bytes.fromhex(value)
    except ValueError:
        return False
    return value == value.lower()
