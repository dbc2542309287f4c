"""Rating finished datasets: the consumer-side workflow.

Builds the four case-study replicas, rates each, prints the per-criterion
table, and emits a JSON report plus an SVG badge for one of them.
"""

import json
import tempfile
from pathlib import Path

from crskit import __version__
from crskit.badge import render_badge
from crskit.fixtures import PRESETS, build_preset
from crskit.rating import build_report, rate_snapshot, render_text

workdir = Path(tempfile.mkdtemp(prefix="crskit-demo-"))

for preset in sorted(PRESETS):
    snapshot = build_preset(preset, workdir / preset)
    outcome = rate_snapshot(snapshot)
    print(f"=== {preset} ===")
    print(render_text(outcome))

# Machine-readable report + badge for the best-scoring replica.
outcome = rate_snapshot(workdir / "randompeople-replica")
report = build_report(outcome, __version__)
report_path = workdir / "report.json"
report_path.write_text(json.dumps(report, indent=2, sort_keys=True))
badge_path = workdir / "badge.svg"
badge_path.write_text(render_badge(report["score"]["letter"]))
print(f"report: {report_path}")
print(f"badge:  {badge_path}")
