from __future__ import annotations

import hashlib
import json
import random
from dataclasses import replace
from datetime import timedelta, timezone, datetime

import pytest

from crskit import manifest as mf
from crskit.errors import CanonError, CrsError, ManifestParseError, RefusalError

from conftest import (
    BASE_TIME,
    deterministic_key,
    make_manifest,
    random_manifest,
    write_point,
)

# sha-256 of zero bytes, as published everywhere sha-256 is specified
EMPTY_SHA256 = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


class TestContentHash:
    def test_empty_stream(self):
        asset = mf.AssetRef.from_bytes(b"")
        assert mf.compute_content_hash(asset).digest == EMPTY_SHA256

    def test_deterministic(self):
        asset = mf.AssetRef.from_bytes(b"same bytes")
        assert mf.compute_content_hash(asset) == mf.compute_content_hash(asset)

    def test_matches_independent_recompute(self, tmp_path):
        asset_path, manifest = write_point(tmp_path, payload=b"\x89PNG\r\n\x1a\nxyz123")
        independent = hashlib.sha256(asset_path.read_bytes()).hexdigest()
        assert manifest.asset_binding.digest == independent

    def test_unreadable_asset(self, tmp_path):
        with pytest.raises(CrsError):
            mf.AssetRef.from_path(tmp_path / "nope.png")


class TestMediaKind:
    def test_sniffing(self):
        assert mf.AssetRef.from_bytes(b"\x89PNG\r\n\x1a\n....").media_kind == "image"
        assert mf.AssetRef.from_bytes(b"RIFF\x00\x00\x00\x00WAVEfmt ").media_kind == "audio"
        assert mf.AssetRef.from_bytes(b"RIFF\x00\x00\x00\x00AVI LIST").media_kind == "video"
        assert mf.AssetRef.from_bytes(b"plain text").media_kind == "other"


class TestSerializeParse:
    def test_round_trip_identity(self):
        manifest = make_manifest(b"bytes", entries=(), allowed_uses=["ai-training"])
        data = mf.serialize_manifest(manifest)
        assert mf.parse_manifest(data) == manifest

    def test_serialize_deterministic(self):
        manifest = make_manifest(b"bytes")
        assert mf.serialize_manifest(manifest) == mf.serialize_manifest(manifest)

    def test_permuted_keys_parse_to_same_manifest(self):
        manifest = make_manifest(b"bytes")
        canonical = mf.serialize_manifest(manifest)
        obj = json.loads(canonical)
        permuted = json.dumps(
            {k: obj[k] for k in reversed(sorted(obj))}, indent=3
        ).encode()
        assert permuted != canonical
        reparsed = mf.parse_manifest(permuted)
        assert reparsed == manifest
        assert mf.serialize_manifest(reparsed) == canonical

    def test_random_manifests_round_trip_byte_exact(self):
        rng = random.Random(20240811)
        for _ in range(200):
            manifest = random_manifest(rng)
            first = mf.serialize_manifest(manifest)
            second = mf.serialize_manifest(mf.parse_manifest(first))
            assert first == second
            assert mf.parse_manifest(first) == manifest

    def test_parse_error_reports_byte_offset(self):
        data = mf.serialize_manifest(make_manifest(b"x"))
        bad = data[: len(data) // 2]
        with pytest.raises(ManifestParseError) as err:
            mf.parse_manifest(bad)
        assert err.value.byte_offset is not None

    def test_unknown_field_rejected(self):
        obj = json.loads(mf.serialize_manifest(make_manifest(b"x")))
        obj["surprise"] = 1
        with pytest.raises(ManifestParseError):
            mf.parse_manifest(json.dumps(obj).encode())

    def test_unknown_use_tag_rejected(self):
        obj = json.loads(mf.serialize_manifest(make_manifest(b"x")))
        obj["allowed_uses"] = ["ai-training", "mining"]
        with pytest.raises(ManifestParseError):
            mf.parse_manifest(json.dumps(obj).encode())

    def test_bad_retention_rejected(self):
        with pytest.raises(CanonError):
            mf.DatasetEntry(
                dataset_source="https://example.org/d",
                retention_period="five years",
                added_at=BASE_TIME,
            )

    def test_chain_must_be_ordered(self):
        rec = lambda t: mf.ActionRecord(
            timestamp=t, action="edited", actor="a", note="n"
        )
        with pytest.raises(CanonError):
            mf.ProvenanceManifest(
                asset_binding=mf.ContentHash("sha-256", "00" * 32),
                creator="c",
                license="CC0-1.0",
                ai_training_consent="granted",
                provenance_chain=(rec(BASE_TIME), rec(BASE_TIME - timedelta(days=1))),
            )

    def test_empty_chain_rejected(self):
        with pytest.raises(CanonError):
            mf.ProvenanceManifest(
                asset_binding=mf.ContentHash("sha-256", "00" * 32),
                creator="c",
                license="CC0-1.0",
                ai_training_consent="granted",
                provenance_chain=(),
            )


class TestExtract:
    def test_well_formed_sidecar(self, tmp_path):
        asset_path, manifest = write_point(tmp_path)
        extracted = mf.extract_manifest(mf.AssetRef.from_path(asset_path))
        assert extracted == manifest

    def test_no_sidecar_is_absent(self, tmp_path):
        path = tmp_path / "bare.png"
        path.write_bytes(b"\x89PNG\r\n\x1a\n-")
        assert mf.extract_manifest(mf.AssetRef.from_path(path)) is None

    def test_truncated_sidecar_is_parse_error_not_absent(self, tmp_path):
        asset_path, _ = write_point(tmp_path)
        side = mf.sidecar_path(asset_path)
        data = side.read_bytes()
        side.write_bytes(data[: len(data) // 2])
        with pytest.raises(ManifestParseError):
            mf.extract_manifest(mf.AssetRef.from_path(asset_path))


class TestValidate:
    def test_untampered_is_valid(self, tmp_path):
        asset_path, manifest = write_point(tmp_path)
        asset = mf.AssetRef.from_path(asset_path)
        assert mf.validate_manifest(asset, manifest) == "valid"

    def test_unsigned_is_never_valid(self, tmp_path):
        asset_path, manifest = write_point(tmp_path, signed=False)
        asset = mf.AssetRef.from_path(asset_path)
        assert mf.validate_manifest(asset, manifest) == "invalid"

    def test_any_single_flipped_byte_invalidates(self, tmp_path):
        payload = b"\x89PNG\r\n\x1a\n" + bytes(range(256)) * 4
        asset_path, manifest = write_point(tmp_path, payload=payload)
        rng = random.Random(7)
        positions = rng.sample(range(len(payload)), 100)
        for pos in positions:
            mutated = bytearray(payload)
            mutated[pos] ^= 0xFF
            asset = mf.AssetRef.from_bytes(bytes(mutated))
            assert mf.validate_manifest(asset, manifest) == "invalid", f"byte {pos}"

    def test_mutating_any_field_invalidates(self, tmp_path):
        asset_path, manifest = write_point(
            tmp_path,
            entries=(
                mf.DatasetEntry(
                    dataset_source="https://example.org/sets/a",
                    retention_period="P5Y",
                    added_at=BASE_TIME,
                ),
            ),
            allowed_uses=["ai-training"],
        )
        asset = mf.AssetRef.from_path(asset_path)
        obj = json.loads(mf.serialize_manifest(manifest))

        def mutations():
            yield "creator", "someone else"
            yield "license", "CC-BY-4.0"
            yield "ai_training_consent", "denied"
            yield "manifest_version", "1.0.1"
            yield "allowed_uses", ["ai-training", "commercial"]
            binding = dict(obj["asset_binding"])
            binding["digest"] = ("0" if binding["digest"][0] != "0" else "1") + binding["digest"][1:]
            yield "asset_binding", binding
            chain = [dict(r) for r in obj["provenance_chain"]]
            chain[0]["note"] = "rewritten"
            yield "provenance_chain", chain
            entries = [dict(e) for e in obj["dataset_entries"]]
            entries[0]["retention_period"] = "P9Y"
            yield "dataset_entries", entries

        for key, value in mutations():
            mutated = dict(obj)
            mutated[key] = value
            reparsed = mf.parse_manifest(json.dumps(mutated).encode())
            assert mf.validate_manifest(asset, reparsed) == "invalid", key

    def test_resolve_status_missing(self, tmp_path):
        path = tmp_path / "orphan.png"
        path.write_bytes(b"\x89PNG\r\n\x1a\n-")
        status, parsed = mf.resolve_status(mf.AssetRef.from_path(path))
        assert status == "missing" and parsed is None


class TestSign:
    def test_sign_then_validate(self, tmp_path):
        payload = b"\x89PNG\r\n\x1a\nsignme"
        asset_path = tmp_path / "a.png"
        asset_path.write_bytes(payload)
        manifest = mf.sign_manifest(make_manifest(payload), deterministic_key("k1"))
        assert mf.validate_manifest(mf.AssetRef.from_path(asset_path), manifest) == "valid"

    def test_wrong_public_key_invalid(self, tmp_path):
        payload = b"\x89PNG\r\n\x1a\nsignme"
        asset_path = tmp_path / "a.png"
        asset_path.write_bytes(payload)
        manifest = mf.sign_manifest(make_manifest(payload), deterministic_key("k1"))
        other_pub = mf.public_key_hex(deterministic_key("k2"))
        forged = replace(manifest, signature=replace(manifest.signature, public_key=other_pub))
        assert mf.validate_manifest(mf.AssetRef.from_path(asset_path), forged) == "invalid"

    def test_resigning_after_field_change_changes_signature(self):
        key = deterministic_key("k1")
        manifest = mf.sign_manifest(make_manifest(b"data"), key)
        changed = replace(manifest, license="CC-BY-4.0", signature=None)
        resigned = mf.sign_manifest(changed, key)
        assert resigned.signature.signature != manifest.signature.signature

    def test_future_chain_timestamp_refused(self):
        manifest = make_manifest(b"data")
        future = datetime.now(timezone.utc) + timedelta(days=2)
        manifest = replace(
            manifest,
            provenance_chain=(
                replace(manifest.provenance_chain[0], timestamp=future),
            ),
        )
        with pytest.raises(CrsError):
            mf.sign_manifest(manifest, deterministic_key("k1"))


class TestEmbed:
    def entry(self, when=None):
        return mf.DatasetEntry(
            dataset_source="https://example.org/datasets/birds",
            retention_period="P5Y",
            added_at=when or (BASE_TIME + timedelta(days=30)),
        )

    def test_append_to_empty(self, tmp_path):
        asset_path, manifest = write_point(tmp_path)
        asset = mf.AssetRef.from_path(asset_path)
        grown = mf.embed_dataset_entry(asset, manifest, self.entry(), deterministic_key("author"))
        assert grown.dataset_entries == (self.entry(),)
        assert manifest.dataset_entries == ()  # original untouched

    def test_action_record_appended_and_resigned(self, tmp_path):
        asset_path, manifest = write_point(tmp_path)
        asset = mf.AssetRef.from_path(asset_path)
        grown = mf.embed_dataset_entry(asset, manifest, self.entry(), deterministic_key("author"))
        added = grown.provenance_chain[-1]
        assert added.action == "other"
        assert added.note == "dataset-entry-added"
        assert manifest.signature.public_key in added.actor  # prior signer preserved
        assert grown.signature.public_key == mf.public_key_hex(deterministic_key("author"))
        assert mf.validate_manifest(asset, grown) == "valid"

    def test_monotonic_no_removal_or_reorder(self, tmp_path):
        first = self.entry()
        asset_path, manifest = write_point(tmp_path, entries=(first,))
        asset = mf.AssetRef.from_path(asset_path)
        second = mf.DatasetEntry(
            dataset_source="https://example.org/datasets/other",
            retention_period="2032-01-01",
            added_at=BASE_TIME + timedelta(days=60),
        )
        grown = mf.embed_dataset_entry(asset, manifest, second, deterministic_key("author"))
        assert grown.dataset_entries[: len(manifest.dataset_entries)] == manifest.dataset_entries
        assert grown.provenance_chain[: len(manifest.provenance_chain)] == manifest.provenance_chain

    def test_embed_then_extract_round_trips(self, tmp_path):
        asset_path, manifest = write_point(tmp_path)
        asset = mf.AssetRef.from_path(asset_path)
        grown = mf.embed_dataset_entry(asset, manifest, self.entry(), deterministic_key("author"))
        mf.write_sidecar(asset_path, grown)
        again = mf.extract_manifest(asset)
        assert again == grown
        assert again.dataset_entries[-1] == self.entry()

    def test_refuses_tampered_asset(self, tmp_path):
        asset_path, manifest = write_point(tmp_path)
        data = bytearray(asset_path.read_bytes())
        data[-1] ^= 0xFF
        asset_path.write_bytes(bytes(data))
        with pytest.raises(RefusalError):
            mf.embed_dataset_entry(
                mf.AssetRef.from_path(asset_path), manifest, self.entry(), deterministic_key("author")
            )

    def test_refuses_unsigned_manifest(self, tmp_path):
        asset_path, manifest = write_point(tmp_path, signed=False)
        with pytest.raises(RefusalError):
            mf.embed_dataset_entry(
                mf.AssetRef.from_path(asset_path), manifest, self.entry(), deterministic_key("author")
            )
