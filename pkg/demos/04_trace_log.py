"""The hash-chained change log behind criterion C5.

Appends dated change records, validates the chain, then edits one line
in place and watches validation pinpoint the rewrite.
"""

import json
import tempfile
from datetime import datetime, timedelta, timezone
from pathlib import Path

from crskit.tracelog import TraceRecord, append_record, new_log, validate_log

workdir = Path(tempfile.mkdtemp(prefix="crskit-demo-"))
log_path = workdir / "CHANGES.crs.jsonl"

t0 = datetime(2025, 6, 1, tzinfo=timezone.utc)
log = new_log(log_path)
for i, (kind, points, what) in enumerate(
    [
        ("point-added", ("img-001.png", "img-002.png"), "initial ingest"),
        ("annotation-modified", ("img-001.png",), "fixed bounding box"),
        ("point-removed", ("img-002.png",), "opt-out request honored"),
        ("version-released", (), "v1.1"),
    ]
):
    log = append_record(
        log,
        TraceRecord(
            recorded_at=t0 + timedelta(days=i),
            change_kind=kind,
            affected_points=points,
            description=what,
            actor="curator",
        ),
    )

print("fresh log:", validate_log(log_path))

# Rewrite history: change what record 3 claims happened.
lines = log_path.read_text().splitlines()
entry = json.loads(lines[2])
entry["description"] = "routine cleanup"  # it was not
lines[2] = json.dumps(entry, sort_keys=True, separators=(",", ":"))
log_path.write_text("\n".join(lines) + "\n")

print("edited log:", validate_log(log_path))
