"""Deterministic fixture snapshots with a chosen criterion profile.

A profile names the criteria the generated dataset should satisfy;
everything else (signed sidecars, card keys, trace log, flags,
overrides, deliberate defects) is derived from it and a seed. Same
profile + seed means byte-identical output, including signatures.

Shipped presets replicate the four case-study grade patterns at desk
scale: sod4sb-replica (C), mscoco-replica (F), randompeople-replica (B),
tiktok-replica (G).
"""

from __future__ import annotations

import hashlib
import json
import random
import struct
import zlib
from dataclasses import dataclass
from datetime import timedelta, datetime, timezone
from pathlib import Path

from . import criteria, evidence as ev, manifest as mf, tracelog as tl, vocab
from .errors import FixtureError

BASE_TIME = datetime(2024, 1, 1, tzinfo=timezone.utc)
POLICY_FILENAME = "policy.crs.json"
KEY_FILENAME = "signing-key.hex"


@dataclass(frozen=True)
class FixtureProfile:
    satisfied: frozenset[str]
    point_count: int
    seed: int
    platform_layout: str
    media_kind: str = "image"
    flagged_inconclusive_count: int = 0
    name: str | None = None

    def __post_init__(self):
        bad = set(self.satisfied) - set(vocab.CRITERIA)
        if bad:
            raise FixtureError(f"unknown criteria in profile: {sorted(bad)}")
        if not 0 < self.point_count <= 10_000:
            raise FixtureError("point_count must be in 1..10000")
        if self.platform_layout not in ev.PLATFORMS - {"local"}:
            raise FixtureError(f"bad platform layout: {self.platform_layout!r}")
        if self.media_kind not in ("image", "video", "audio"):
            raise FixtureError(f"bad media kind: {self.media_kind!r}")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        crit = "".join(c for c in vocab.CRITERIA if c in self.satisfied) or "none"
        return f"fixture-{crit}-{self.seed}"


PRESETS: dict[str, FixtureProfile] = {
    "sod4sb-replica": FixtureProfile(
        satisfied=frozenset({"C1", "C2", "C3", "C4"}),
        point_count=100,
        seed=20230501,
        platform_layout="github",
        media_kind="image",
        flagged_inconclusive_count=2,
        name="sod4sb-replica",
    ),
    "mscoco-replica": FixtureProfile(
        satisfied=frozenset({"C1"}),
        point_count=60,
        seed=20140601,
        platform_layout="custom-url",
        media_kind="image",
        name="mscoco-replica",
    ),
    "randompeople-replica": FixtureProfile(
        satisfied=frozenset({"C1", "C2", "C3", "C4", "C5"}),
        point_count=40,
        seed=20240301,
        platform_layout="huggingface",
        media_kind="video",
        flagged_inconclusive_count=2,
        name="randompeople-replica",
    ),
    "tiktok-replica": FixtureProfile(
        satisfied=frozenset(),
        point_count=50,
        seed=20210101,
        platform_layout="kaggle",
        media_kind="video",
        name="tiktok-replica",
    ),
}


def _png_stub(rng: random.Random) -> bytes:
    def chunk(kind: bytes, data: bytes) -> bytes:
        body = kind + data
        return struct.pack(">I", len(data)) + body + struct.pack(">I", zlib.crc32(body))

    ihdr = struct.pack(">IIBBBBB", 1, 1, 8, 2, 0, 0, 0)
    pixel = bytes([0, rng.randrange(256), rng.randrange(256), rng.randrange(256)])
    idat = zlib.compress(pixel)
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", ihdr)
        + chunk(b"IDAT", idat)
        + chunk(b"IEND", b"")
    )


def _wav_stub(rng: random.Random) -> bytes:
    samples = rng.randbytes(16)
    fmt = struct.pack("<HHIIHH", 1, 1, 8000, 8000, 1, 8)
    body = b"WAVEfmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(samples)) + samples
    return b"RIFF" + struct.pack("<I", len(body)) + body


def _avi_stub(rng: random.Random) -> bytes:
    payload = rng.randbytes(16)
    body = b"AVI JUNK" + struct.pack("<I", len(payload)) + payload
    return b"RIFF" + struct.pack("<I", len(body)) + body


_STUBS = {"image": (_png_stub, ".png"), "audio": (_wav_stub, ".wav"), "video": (_avi_stub, ".avi")}


def fixture_key_seed(seed: int) -> bytes:
    return hashlib.sha256(b"crskit-fixture-key:" + str(seed).encode()).digest()


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _source_variant(canonical: str, rng: random.Random) -> str:
    # exercise URI normalization without changing identity
    roll = rng.random()
    if roll < 0.15:
        return canonical + "/"
    if roll < 0.25:
        return canonical.replace("https://", "HTTPS://", 1)
    return canonical


def build_fixture(profile: FixtureProfile, out_dir: str | Path) -> Path:
    """Materialize a snapshot realizing the profile's criterion subset.

    Refuses a non-empty output directory. Pure function of the profile:
    no wall clock, no machine state.
    """
    root = Path(out_dir)
    if root.exists() and any(root.iterdir()):
        raise FixtureError(f"output directory not empty: {root}")
    rng = random.Random(profile.seed)
    n = profile.point_count
    name = profile.label
    canonical_source = f"https://example.org/datasets/{name}"
    key_seed = fixture_key_seed(profile.seed)
    key = mf.load_signing_key(key_seed)
    standardized = profile.platform_layout in ev.STANDARDIZED
    build_stub, extension = _STUBS[profile.media_kind]

    defect_k = max(1, n // 20)
    shuffled = list(range(n))
    rng.shuffle(shuffled)
    cursor = 0

    def take(count: int) -> set[int]:
        nonlocal cursor
        if cursor + count > n:
            raise FixtureError("point_count too small for the requested defects")
        chosen = set(shuffled[cursor : cursor + count])
        cursor += count
        return chosen

    c2_defects = take(defect_k) if "C2" not in profile.satisfied else set()
    c3_defects = take(defect_k) if "C3" not in profile.satisfied else set()
    flagged = (
        take(profile.flagged_inconclusive_count)
        if "C3" in profile.satisfied and profile.flagged_inconclusive_count
        else set()
    )
    c6_defects = take(defect_k) if "C6" not in profile.satisfied else set()

    files_dir = root / "files"
    files_dir.mkdir(parents=True, exist_ok=True)

    point_ids: list[str] = []
    for i in range(n):
        asset_id = f"point-{i:04d}{extension}"
        point_ids.append(asset_id)
        payload = build_stub(rng)
        asset_path = files_dir / asset_id
        asset_path.write_bytes(payload)

        unsigned = i in c3_defects or i in flagged
        if i in c2_defects:
            license_id, consent = vocab.LICENSE_CC_BY, vocab.CONSENT_DENIED
        else:
            license_id = rng.choice([vocab.LICENSE_CC0, vocab.LICENSE_CC_BY])
            consent = vocab.CONSENT_GRANTED
        allowed = None
        if rng.random() < 0.3:
            allowed = tuple(sorted(vocab.USE_TAGS))

        entries = ()
        if i not in c6_defects:
            entries = (
                mf.DatasetEntry(
                    dataset_source=_source_variant(canonical_source, rng),
                    retention_period=rng.choice(["P5Y", "P3Y", "2033-01-01"]),
                    added_at=BASE_TIME + timedelta(minutes=n + i),
                ),
            )
        manifest = mf.ProvenanceManifest(
            asset_binding=mf.compute_content_hash(mf.AssetRef.from_bytes(payload)),
            creator=f"creator-{rng.randrange(20):02d}",
            license=license_id,
            ai_training_consent=consent,
            allowed_uses=allowed,
            provenance_chain=(
                mf.ActionRecord(
                    timestamp=BASE_TIME + timedelta(minutes=i),
                    action="created",
                    actor="capture-rig",
                    note="original capture",
                ),
            ),
            dataset_entries=entries,
        )
        if not unsigned:
            manifest = mf.sign_manifest(manifest, key)
        mf.write_sidecar(asset_path, manifest)

    # flags: one record per flagged inconclusive point
    flags_path = root / criteria.FLAGS_FILENAME
    flags_path.write_text("", encoding="utf-8")
    for offset, i in enumerate(sorted(flagged)):
        criteria.append_flag(
            root,
            criteria.FlagEntry(
                asset_id=point_ids[i],
                reason="provenance unsigned; kept with flag",
                flagged_at=BASE_TIME + timedelta(days=2, minutes=offset),
            ),
        )

    # trace log only when C5 should hold; absence is the violation
    if "C5" in profile.satisfied:
        log = tl.new_log(root / tl.LOG_FILENAME)
        for j in range(3 + n // 10):
            affected = tuple(
                sorted(rng.sample(point_ids, k=min(3, len(point_ids))))
            )
            kind = ["point-added", "annotation-modified", "data-modified"][j % 3]
            log = tl.append_record(
                log,
                tl.TraceRecord(
                    recorded_at=BASE_TIME + timedelta(days=1, hours=j),
                    change_kind=kind,
                    affected_points=affected,
                    description=f"curation batch {j}",
                    actor="curator",
                ),
            )

    metadata: dict[str, str] = {}
    if standardized:
        if "C1" in profile.satisfied:
            metadata[ev.CARD_KEY_REPRODUCIBILITY] = (
                f"https://example.org/{name}/pipeline — scraping, filtering and "
                "preprocessing code; reproduces the dataset end to end"
            )
        if "C4" in profile.satisfied:
            metadata[ev.CARD_KEY_OPT_OUT] = "mailto:removals@example.org"
        if "C5" in profile.satisfied:
            metadata[ev.CARD_KEY_TRACE_LOG] = tl.LOG_FILENAME

    card = {
        "name": name,
        "platform": profile.platform_layout,
        "dataset_source": canonical_source,
        "description": f"synthetic {profile.media_kind} dataset ({n} points)",
        "metadata": metadata,
    }
    _write_json(root / "card.json", card)

    readme = [f"# {name}", "", f"A synthetic {profile.media_kind} dataset with {n} points."]
    if not standardized:
        if "C1" in profile.satisfied:
            readme += [
                "",
                "## Reproduction",
                "The scraping pipeline, filtering rules and preprocessing code in "
                "this repository reproduce the dataset from its sources.",
            ]
        if "C4" in profile.satisfied:
            readme += [
                "",
                "## Opt-out",
                "To request removal of your data, email removals@example.org.",
            ]
    (root / "README.md").write_text("\n".join(readme) + "\n", encoding="utf-8")

    overrides: list[ev.ReviewOverride] = []
    if not standardized:
        decision_time = BASE_TIME + timedelta(days=90)
        for idx, criterion in enumerate(("C1", "C4")):
            status = vocab.SATISFIED if criterion in profile.satisfied else vocab.VIOLATED
            overrides.append(
                ev.ReviewOverride(
                    criterion=criterion,
                    status=status,
                    justification=(
                        f"manual platform review: {criterion} "
                        f"{'confirmed' if status == vocab.SATISFIED else 'not found'}"
                    ),
                    reviewer="fixture-reviewer",
                    decided_at=decision_time + timedelta(minutes=idx),
                )
            )
        if "C5" in profile.satisfied:
            overrides.append(
                ev.ReviewOverride(
                    criterion="C5",
                    status=vocab.SATISFIED,
                    justification="manual platform review: designated trace log confirmed",
                    reviewer="fixture-reviewer",
                    decided_at=decision_time + timedelta(minutes=5),
                )
            )
    _write_json(
        root / ev.OVERRIDES_FILENAME,
        [
            {
                "criterion": o.criterion,
                "status": o.status,
                "justification": o.justification,
                "reviewer": o.reviewer,
                "decided_at": o.decided_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
            }
            for o in overrides
        ],
    )

    _write_json(
        root / POLICY_FILENAME,
        {
            "dataset_license": "CC-BY-4.0",
            "intended_uses": ["ai-training"],
            "requires_explicit_consent": False,
            "performs_derivatives": False,
        },
    )
    (root / KEY_FILENAME).write_text(key_seed.hex() + "\n", encoding="utf-8")
    return root


def build_preset(preset: str, out_dir: str | Path) -> Path:
    if preset not in PRESETS:
        raise FixtureError(
            f"unknown preset {preset!r}; choose from {sorted(PRESETS)}"
        )
    return build_fixture(PRESETS[preset], out_dir)


def tamper(snapshot: str | Path, asset_id: str, byte_index: int) -> Path:
    """Flip exactly one byte of one asset; sidecars stay untouched."""
    path = Path(snapshot) / "files" / asset_id
    if not path.is_file():
        raise FixtureError(f"no such asset in snapshot: {asset_id}")
    data = bytearray(path.read_bytes())
    if not 0 <= byte_index < len(data):
        raise FixtureError(
            f"byte index {byte_index} out of range for {asset_id} ({len(data)} bytes)"
        )
    data[byte_index] ^= 0xFF
    path.write_bytes(bytes(data))
    return Path(snapshot)
