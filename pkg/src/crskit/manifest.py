"""Per-asset provenance manifests: parse, validate, sign, embed.

A manifest lives in a sidecar file named ``<asset filename>.prov.json``
next to the asset it describes. It binds to the asset through a sha-256
content hash and is signed with ed25519 over the canonical serialization
of every field except the signature block itself. The sidecar is UTF-8
JSON with sorted keys and no insignificant whitespace, so serialization
is byte-deterministic and signatures are stable.

`extract_manifest` is the extension point for other storage schemes
(e.g. embedded credential segments): anything that yields a
ProvenanceManifest for an asset can stand in for the sidecar reader.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

from . import canon, vocab
from .errors import CanonError, CrsError, ManifestParseError, RefusalError

SIDECAR_SUFFIX = ".prov.json"
MANIFEST_VERSION = "1.0.0"

_MANIFEST_KEYS = frozenset(
    {
        "manifest_version",
        "asset_binding",
        "creator",
        "license",
        "ai_training_consent",
        "allowed_uses",
        "provenance_chain",
        "dataset_entries",
        "signature",
    }
)


def _sniff_media_kind(head: bytes) -> str:
    if head.startswith(b"\x89PNG\r\n\x1a\n") or head.startswith(b"\xff\xd8\xff"):
        return "image"
    if head[:4] == b"RIFF" and head[8:12] == b"WAVE":
        return "audio"
    if head[:4] == b"RIFF" and head[8:12] == b"AVI ":
        return "video"
    return "other"


@dataclass(frozen=True)
class AssetRef:
    """A data point: a filesystem path or an in-memory byte stream."""

    locator: Path | bytes
    media_kind: str
    size_bytes: int

    @classmethod
    def from_path(cls, path: str | Path) -> "AssetRef":
        p = Path(path)
        try:
            with open(p, "rb") as fh:
                head = fh.read(16)
            size = p.stat().st_size
        except OSError as exc:
            raise CrsError(f"unreadable asset {p}: {exc}") from None
        return cls(locator=p, media_kind=_sniff_media_kind(head), size_bytes=size)

    @classmethod
    def from_bytes(cls, data: bytes) -> "AssetRef":
        return cls(
            locator=data, media_kind=_sniff_media_kind(data[:16]), size_bytes=len(data)
        )

    def read_bytes(self) -> bytes:
        if isinstance(self.locator, bytes):
            return self.locator
        try:
            return Path(self.locator).read_bytes()
        except OSError as exc:
            raise CrsError(f"unreadable asset {self.locator}: {exc}") from None

    @property
    def path(self) -> Path | None:
        return self.locator if isinstance(self.locator, Path) else None


@dataclass(frozen=True)
class ContentHash:
    algorithm: str
    digest: str  # lowercase hex

    def __post_init__(self):
        if self.algorithm != "sha-256":
            raise CanonError(f"unsupported hash algorithm: {self.algorithm!r}")
        if not canon.is_hex(self.digest, 32):
            raise CanonError("sha-256 digest must be 64 lowercase hex chars")


@dataclass(frozen=True)
class ActionRecord:
    timestamp: datetime
    action: str
    actor: str
    note: str

    def __post_init__(self):
        if self.action not in vocab.ACTIONS:
            raise CanonError(f"unknown provenance action: {self.action!r}")
        if self.timestamp.tzinfo is None:
            raise CanonError("action timestamp must be timezone-aware")


@dataclass(frozen=True)
class DatasetEntry:
    dataset_source: str
    retention_period: str
    added_at: datetime

    def __post_init__(self):
        if not self.dataset_source:
            raise CanonError("dataset_source must be non-empty")
        canon.validate_retention(self.retention_period)
        if self.added_at.tzinfo is None:
            raise CanonError("added_at must be timezone-aware")


@dataclass(frozen=True)
class SignatureBlock:
    scheme: str
    public_key: str  # 32 bytes, lowercase hex
    signature: str  # 64 bytes, lowercase hex

    def __post_init__(self):
        if self.scheme != "ed25519":
            raise CanonError(f"unsupported signature scheme: {self.scheme!r}")
        if not canon.is_hex(self.public_key, 32):
            raise CanonError("public key must be 64 lowercase hex chars")
        if not canon.is_hex(self.signature, 64):
            raise CanonError("signature must be 128 lowercase hex chars")


@dataclass(frozen=True)
class ProvenanceManifest:
    asset_binding: ContentHash
    creator: str
    license: str
    ai_training_consent: str
    provenance_chain: tuple[ActionRecord, ...]
    dataset_entries: tuple[DatasetEntry, ...] = ()
    allowed_uses: tuple[str, ...] | None = None
    signature: SignatureBlock | None = None
    manifest_version: str = MANIFEST_VERSION

    def __post_init__(self):
        if not vocab.valid_license(self.license):
            raise CanonError(f"unknown license: {self.license!r}")
        if self.ai_training_consent not in vocab.CONSENT_VALUES:
            raise CanonError(f"unknown consent value: {self.ai_training_consent!r}")
        if self.allowed_uses is not None:
            for tag in self.allowed_uses:
                if tag not in vocab.USE_TAGS:
                    raise CanonError(f"unknown use tag: {tag!r}")
        if not self.provenance_chain:
            raise CanonError("provenance_chain must be non-empty")
        times = [rec.timestamp for rec in self.provenance_chain]
        if any(b < a for a, b in zip(times, times[1:])):
            raise CanonError("provenance_chain timestamps must be non-decreasing")


def sidecar_path(asset_path: str | Path) -> Path:
    p = Path(asset_path)
    return p.with_name(p.name + SIDECAR_SUFFIX)


def compute_content_hash(asset: AssetRef) -> ContentHash:
    """sha-256 over the full byte stream of the asset."""
    digest = hashlib.sha256(asset.read_bytes()).hexdigest()
    return ContentHash(algorithm="sha-256", digest=digest)


def _manifest_to_obj(manifest: ProvenanceManifest, with_signature: bool) -> dict:
    obj = {
        "manifest_version": manifest.manifest_version,
        "asset_binding": {
            "algorithm": manifest.asset_binding.algorithm,
            "digest": manifest.asset_binding.digest,
        },
        "creator": manifest.creator,
        "license": manifest.license,
        "ai_training_consent": manifest.ai_training_consent,
        "provenance_chain": [
            {
                "timestamp": canon.format_utc(rec.timestamp),
                "action": rec.action,
                "actor": rec.actor,
                "note": rec.note,
            }
            for rec in manifest.provenance_chain
        ],
        "dataset_entries": [
            {
                "dataset_source": entry.dataset_source,
                "retention_period": entry.retention_period,
                "added_at": canon.format_utc(entry.added_at),
            }
            for entry in manifest.dataset_entries
        ],
    }
    if manifest.allowed_uses is not None:
        obj["allowed_uses"] = list(manifest.allowed_uses)
    if with_signature and manifest.signature is not None:
        obj["signature"] = {
            "scheme": manifest.signature.scheme,
            "public_key": manifest.signature.public_key,
            "signature": manifest.signature.signature,
        }
    return obj


def signing_bytes(manifest: ProvenanceManifest) -> bytes:
    """Canonical bytes covered by the signature (everything but the block)."""
    return canon.canonical_json_bytes(_manifest_to_obj(manifest, with_signature=False))


def serialize_manifest(manifest: ProvenanceManifest) -> bytes:
    """Canonical sidecar bytes. Deterministic: equal manifests serialize
    byte-identically."""
    return canon.canonical_json_bytes(_manifest_to_obj(manifest, with_signature=True))


def _require(obj: dict, key: str, kind, context: str):
    if key not in obj:
        raise ManifestParseError(f"{context}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise ManifestParseError(f"{context}: field {key!r} has wrong type")
    return value


def parse_manifest(data: bytes) -> ProvenanceManifest:
    """Parse sidecar bytes; rejects unknown fields and malformed values."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ManifestParseError("not UTF-8", byte_offset=exc.start) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ManifestParseError(f"bad JSON: {exc.msg}", byte_offset=offset) from None
    if not isinstance(obj, dict):
        raise ManifestParseError("manifest must be a JSON object")
    unknown = set(obj) - _MANIFEST_KEYS
    if unknown:
        raise ManifestParseError(f"unknown manifest fields: {sorted(unknown)}")

    binding_obj = _require(obj, "asset_binding", dict, "manifest")
    chain_objs = _require(obj, "provenance_chain", list, "manifest")
    entry_objs = _require(obj, "dataset_entries", list, "manifest")

    try:
        binding = ContentHash(
            algorithm=_require(binding_obj, "algorithm", str, "asset_binding"),
            digest=_require(binding_obj, "digest", str, "asset_binding"),
        )
        chain = tuple(
            ActionRecord(
                timestamp=canon.parse_utc(
                    _require(rec, "timestamp", str, f"provenance_chain[{i}]")
                ),
                action=_require(rec, "action", str, f"provenance_chain[{i}]"),
                actor=_require(rec, "actor", str, f"provenance_chain[{i}]"),
                note=_require(rec, "note", str, f"provenance_chain[{i}]"),
            )
            for i, rec in enumerate(chain_objs)
        )
        entries = tuple(
            DatasetEntry(
                dataset_source=_require(e, "dataset_source", str, f"dataset_entries[{i}]"),
                retention_period=_require(
                    e, "retention_period", str, f"dataset_entries[{i}]"
                ),
                added_at=canon.parse_utc(
                    _require(e, "added_at", str, f"dataset_entries[{i}]")
                ),
            )
            for i, e in enumerate(entry_objs)
        )
        allowed = obj.get("allowed_uses")
        if allowed is not None:
            if not isinstance(allowed, list) or not all(
                isinstance(t, str) for t in allowed
            ):
                raise ManifestParseError("allowed_uses must be a list of strings")
            allowed = tuple(allowed)
        sig = None
        if "signature" in obj:
            sig_obj = obj["signature"]
            if not isinstance(sig_obj, dict):
                raise ManifestParseError("signature must be an object")
            sig = SignatureBlock(
                scheme=_require(sig_obj, "scheme", str, "signature"),
                public_key=_require(sig_obj, "public_key", str, "signature"),
                signature=_require(sig_obj, "signature", str, "signature"),
            )
        return ProvenanceManifest(
            manifest_version=_require(obj, "manifest_version", str, "manifest"),
            asset_binding=binding,
            creator=_require(obj, "creator", str, "manifest"),
            license=_require(obj, "license", str, "manifest"),
            ai_training_consent=_require(obj, "ai_training_consent", str, "manifest"),
            allowed_uses=allowed,
            provenance_chain=chain,
            dataset_entries=entries,
            signature=sig,
        )
    except CanonError as exc:
        raise ManifestParseError(str(exc)) from None


def extract_manifest(asset: AssetRef) -> ProvenanceManifest | None:
    """Locate and parse the asset's sidecar manifest.

    Returns None when no sidecar exists; raises ManifestParseError when a
    sidecar exists but cannot be parsed (those are different situations and
    downstream reasoning keeps them apart).
    """
    if asset.path is None:
        return None
    side = sidecar_path(asset.path)
    if not side.exists():
        return None
    return parse_manifest(side.read_bytes())


def load_signing_key(seed: bytes) -> Ed25519PrivateKey:
    if len(seed) != 32:
        raise CrsError("ed25519 private key seed must be exactly 32 bytes")
    return Ed25519PrivateKey.from_private_bytes(seed)


def public_key_hex(key: Ed25519PrivateKey) -> str:
    raw = key.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
    return raw.hex()


def sign_manifest(
    manifest: ProvenanceManifest, key: Ed25519PrivateKey
) -> ProvenanceManifest:
    """Return a copy with a fresh signature block over the canonical bytes."""
    now = datetime.now(timezone.utc)
    for rec in manifest.provenance_chain:
        if rec.timestamp > now:
            raise CrsError(
                f"provenance record at {canon.format_utc(rec.timestamp)} is in the future"
            )
    unsigned = replace(manifest, signature=None)
    sig = key.sign(signing_bytes(unsigned))
    block = SignatureBlock(
        scheme="ed25519", public_key=public_key_hex(key), signature=sig.hex()
    )
    return replace(manifest, signature=block)


def validate_manifest(asset: AssetRef, manifest: ProvenanceManifest) -> str:
    """`valid` iff the binding matches the recomputed hash and the signature
    verifies; `invalid` otherwise. Unsigned manifests are never valid."""
    if manifest.signature is None:
        return vocab.INVALID
    recomputed = compute_content_hash(asset)
    if recomputed.digest != manifest.asset_binding.digest:
        return vocab.INVALID
    try:
        pub = Ed25519PublicKey.from_public_bytes(
            bytes.fromhex(manifest.signature.public_key)
        )
        pub.verify(
            bytes.fromhex(manifest.signature.signature),
            signing_bytes(replace(manifest, signature=None)),
        )
    except (InvalidSignature, ValueError):
        return vocab.INVALID
    return vocab.VALID


def resolve_status(asset: AssetRef) -> tuple[str, ProvenanceManifest | None]:
    """Combined extract + validate: (`valid`|`invalid`|`missing`, manifest).

    Parse errors still propagate as ManifestParseError; callers that need
    the three-way status plus the corruption case catch it themselves.
    """
    manifest = extract_manifest(asset)
    if manifest is None:
        return vocab.MISSING, None
    return validate_manifest(asset, manifest), manifest


def embed_dataset_entry(
    asset: AssetRef,
    manifest: ProvenanceManifest,
    entry: DatasetEntry,
    signing_key: Ed25519PrivateKey,
) -> ProvenanceManifest:
    """Append a dataset entry and re-sign with the dataset author's key.

    Embedding mutates the manifest, which invalidates the prior signature,
    so the author's key signs the result; the prior signer's public key is
    preserved in the appended provenance record. Refuses to embed into a
    manifest that does not validate against its asset.
    """
    if validate_manifest(asset, manifest) != vocab.VALID:
        raise RefusalError("refusing to embed into unverifiable provenance")
    last = manifest.provenance_chain[-1].timestamp
    if entry.added_at < last:
        raise CrsError(
            "entry added_at predates the newest provenance record; chain must stay ordered"
        )
    prior_signer = manifest.signature.public_key  # validated above, never None
    record = ActionRecord(
        timestamp=entry.added_at,
        action="other",
        actor=f"dataset-author; prior-signer={prior_signer}",
        note="dataset-entry-added",
    )
    grown = replace(
        manifest,
        dataset_entries=manifest.dataset_entries + (entry,),
        provenance_chain=manifest.provenance_chain + (record,),
        signature=None,
    )
    return sign_manifest(grown, signing_key)


def write_sidecar(asset_path: str | Path, manifest: ProvenanceManifest) -> Path:
    side = sidecar_path(asset_path)
    side.write_bytes(serialize_manifest(manifest))
    return side
