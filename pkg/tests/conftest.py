from __future__ import annotations

import hashlib
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from crskit import manifest as mf
from crskit.criteria import DatasetPolicy

BASE_TIME = datetime(2024, 1, 1, tzinfo=timezone.utc)

LICENSES = [
    "CC0-1.0",
    "CC-BY-4.0",
    "CC-BY-SA-4.0",
    "CC-BY-NC-4.0",
    "CC-BY-ND-4.0",
    "ALL-RIGHTS-RESERVED",
    "CUSTOM:archive-terms-2019",
    "UNSPECIFIED",
]
USE_TAGS = ["ai-training", "redistribution", "commercial", "derivative-works", "research-only"]


def deterministic_key(tag: str) -> "mf.Ed25519PrivateKey":
    seed = hashlib.sha256(f"crskit-test-key:{tag}".encode()).digest()
    return mf.load_signing_key(seed)


def make_manifest(
    asset_bytes: bytes,
    *,
    license_id: str = "CC0-1.0",
    consent: str = "granted",
    allowed_uses=None,
    entries=(),
    creator: str = "test creator",
) -> mf.ProvenanceManifest:
    digest = hashlib.sha256(asset_bytes).hexdigest()
    return mf.ProvenanceManifest(
        asset_binding=mf.ContentHash(algorithm="sha-256", digest=digest),
        creator=creator,
        license=license_id,
        ai_training_consent=consent,
        allowed_uses=tuple(allowed_uses) if allowed_uses is not None else None,
        provenance_chain=(
            mf.ActionRecord(
                timestamp=BASE_TIME, action="created", actor="camera-rig", note="capture"
            ),
        ),
        dataset_entries=tuple(entries),
    )


def write_point(
    directory: Path,
    name: str = "point.png",
    *,
    payload: bytes = b"\x89PNG\r\n\x1a\nstub-pixel-data",
    signed: bool = True,
    key=None,
    **manifest_kwargs,
):
    """Create an asset file plus sidecar; returns (asset_path, manifest)."""
    asset_path = directory / name
    asset_path.write_bytes(payload)
    manifest = make_manifest(payload, **manifest_kwargs)
    if signed:
        manifest = mf.sign_manifest(manifest, key or deterministic_key("default"))
    mf.write_sidecar(asset_path, manifest)
    return asset_path, manifest


def random_timestamp(rng: random.Random) -> datetime:
    dt = BASE_TIME + timedelta(seconds=rng.randrange(0, 3_000_000))
    if rng.random() < 0.3:
        dt = dt.replace(microsecond=rng.randrange(1, 1_000_000))
    return dt


def random_text(rng: random.Random) -> str:
    pieces = ["alpha", "Ωmega", "café", "研究", "data point", "🙂", "quote\"inside", "tab\there"]
    return " ".join(rng.choice(pieces) for _ in range(rng.randrange(1, 4)))


def random_manifest(rng: random.Random) -> mf.ProvenanceManifest:
    """Seeded arbitrary-but-valid manifest for round-trip sweeps."""
    times = sorted(random_timestamp(rng) for _ in range(rng.randrange(1, 5)))
    chain = tuple(
        mf.ActionRecord(
            timestamp=t,
            action=rng.choice(["created", "edited", "transcoded", "annotated", "other"]),
            actor=random_text(rng),
            note=random_text(rng),
        )
        for t in times
    )
    entries = tuple(
        mf.DatasetEntry(
            dataset_source=rng.choice(
                [
                    "https://example.org/datasets/birds",
                    "hf:acme/street-scenes",
                    "https://Example.ORG/sets/a/",
                ]
            ),
            retention_period=rng.choice(["P5Y", "P6M", "PT720H", "2031-12-01"]),
            added_at=random_timestamp(rng),
        )
        for _ in range(rng.randrange(0, 3))
    )
    allowed = None
    if rng.random() < 0.5:
        allowed = tuple(
            sorted(rng.sample(USE_TAGS, k=rng.randrange(0, len(USE_TAGS) + 1)))
        )
    signature = None
    if rng.random() < 0.5:
        signature = mf.SignatureBlock(
            scheme="ed25519",
            public_key=rng.randbytes(32).hex(),
            signature=rng.randbytes(64).hex(),
        )
    return mf.ProvenanceManifest(
        asset_binding=mf.ContentHash(algorithm="sha-256", digest=rng.randbytes(32).hex()),
        creator=random_text(rng),
        license=rng.choice(LICENSES),
        ai_training_consent=rng.choice(["granted", "denied", "unspecified"]),
        allowed_uses=allowed,
        provenance_chain=chain,
        dataset_entries=entries,
        signature=signature,
    )


@pytest.fixture
def ai_policy() -> DatasetPolicy:
    return DatasetPolicy(
        dataset_license="CC-BY-4.0",
        intended_uses=("ai-training",),
        requires_explicit_consent=False,
        performs_derivatives=False,
    )
