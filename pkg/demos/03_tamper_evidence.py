"""What tampering does to a rating, and how flagging recovers it.

Flips a single byte in one asset of a fully compliant snapshot, shows the
binding break, then flags the point and shows C3 recovering while C2 and
C6 stay untouched.
"""

import tempfile
from datetime import datetime, timezone
from pathlib import Path

from crskit import AssetRef
from crskit.criteria import FlagEntry, append_flag
from crskit.fixtures import FixtureProfile, build_fixture, tamper
from crskit.manifest import resolve_status
from crskit.rating import discover_points, rate_snapshot

workdir = Path(tempfile.mkdtemp(prefix="crskit-demo-"))
snapshot = build_fixture(
    FixtureProfile(
        satisfied=frozenset({"C1", "C2", "C3", "C4", "C5", "C6"}),
        point_count=10,
        seed=303,
        platform_layout="huggingface",
    ),
    workdir / "clean",
)

victim, asset = discover_points(snapshot)[3]
print("before:", resolve_status(AssetRef.from_path(snapshot / "files" / victim))[0])

tamper(snapshot, victim, byte_index=7)
print("after: ", resolve_status(AssetRef.from_path(snapshot / "files" / victim))[0])

outcome = rate_snapshot(snapshot)
by = {r.criterion: r for r in outcome.assessment.per_criterion}
print(f"\nunflagged tamper -> score {outcome.assessment.score.letter}")
print(f"  C3 {by['C3'].status}: {by['C3'].evidence}")

# The point stays in the dataset but must be flagged as inconclusive.
append_flag(
    snapshot,
    FlagEntry(
        asset_id=victim,
        reason="binding no longer verifies; kept pending investigation",
        flagged_at=datetime.now(timezone.utc),
    ),
)
outcome = rate_snapshot(snapshot)
by = {r.criterion: r for r in outcome.assessment.per_criterion}
print(f"\nflagged tamper -> score {outcome.assessment.score.letter}")
for criterion in ("C2", "C3", "C6"):
    print(f"  {criterion} {by[criterion].status}")
