"""Exception hierarchy. Everything raised on purpose derives from CrsError."""

from __future__ import annotations


class CrsError(Exception):
    """Base class for all toolkit errors."""


class CanonError(CrsError):
    """Malformed timestamp, retention period, or other canonical field."""


class ManifestParseError(CrsError):
    """Sidecar present but not a well-formed manifest.

    Distinct from "no sidecar" (extract returns None) and from a manifest
    that parses but fails validation (ValidationStatus.invalid).
    """

    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


class RefusalError(CrsError):
    """Operation refused: would build on unverifiable provenance."""


class AppendError(CrsError):
    """Trace-log append rejected (out-of-order timestamp, bad record)."""


class ContractError(CrsError):
    """Caller broke an interface contract (wrong criterion level, etc.)."""


class EvaluationError(CrsError):
    """Dataset cannot be rated (empty dataset, unresolvable input)."""


class FetchError(CrsError):
    """Network evidence fetch failed after retries. Retryable."""


class NotFoundError(CrsError):
    """Dataset or resource does not exist on the platform."""


class FixtureError(CrsError):
    """Fixture generation refused (non-empty output dir, bad profile)."""
