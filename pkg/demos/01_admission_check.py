"""Admitting data points while building a dataset.

Walks the author-side workflow: generate a small snapshot, run the
admission check on each candidate point, drop the rejects, and embed the
dataset entry into the keepers.
"""

import tempfile
from datetime import datetime, timezone
from pathlib import Path

from crskit import AssetRef, DatasetEntry, assess_datapoint, load_policy
from crskit.fixtures import FixtureProfile, build_fixture, POLICY_FILENAME
from crskit.rating import discover_points

workdir = Path(tempfile.mkdtemp(prefix="crskit-demo-"))

# A snapshot with one consent-denied point (violates C2) and one unsigned
# point (inconclusive provenance, violates C3 unless flagged).
profile = FixtureProfile(
    satisfied=frozenset({"C1", "C4", "C5", "C6"}),
    point_count=8,
    seed=101,
    platform_layout="huggingface",
)
snapshot = build_fixture(profile, workdir / "incoming")
policy = load_policy(snapshot / POLICY_FILENAME)

# The entry we promise to embed if the point is admitted.
pending = DatasetEntry(
    dataset_source="https://example.org/datasets/my-new-dataset",
    retention_period="P5Y",
    added_at=datetime.now(timezone.utc),
)

kept, dropped = [], []
for asset_id, asset in discover_points(snapshot):
    outcome = assess_datapoint(asset, policy, pending)
    if outcome.compliant:
        kept.append(asset_id)
    else:
        dropped.append(asset_id)
        print(f"drop {asset_id}:")
        for reason in outcome.reasons:
            print(f"    {reason}")

print(f"\nkept {len(kept)} points, dropped {len(dropped)}")
print("admitted points would now get the entry embedded via `crskit embed`")
