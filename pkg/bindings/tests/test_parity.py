"""Binding/CLI parity: the secondary acceptance criterion.

The binding must produce JSON-identical output to the CLI for the same
inputs (timestamps aside), which also demonstrates behaviorally that no
criterion logic exists on the binding side.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

import crskit_pipeline as pipeline

from conftest import gen_fixture, run_cli


def cli_report(snapshot) -> dict:
    proc = run_cli("rate", str(snapshot), "--format", "json")
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def scrub(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "generated_at"}


@pytest.fixture(scope="module")
def random_fixtures(tmp_path_factory) -> list[str]:
    base = tmp_path_factory.mktemp("random")
    rng = random.Random(88)
    platforms = ["huggingface", "kaggle", "github", "custom-url"]
    fixtures = []
    for i in range(10):
        satisfied = [c for c in ("C1", "C2", "C3", "C4", "C5", "C6") if rng.random() < 0.6]
        fixtures.append(
            gen_fixture(
                base / f"fixture-{i:02d}",
                profile={
                    "satisfied": satisfied,
                    "point_count": rng.randrange(4, 8),
                    "seed": 17000 + i,
                    "platform_layout": platforms[i % 4],
                },
            )
        )
    return fixtures


def test_acceptance_8_rate_parity(replicas, random_fixtures):
    snapshots = list(replicas.values()) + random_fixtures
    for snapshot in snapshots:
        bound = pipeline.rate(snapshot)
        direct = cli_report(snapshot)
        assert scrub(bound.report) == scrub(direct), snapshot
    print(
        f"\nACCEPTANCE 8 PASS: binding output JSON-equals CLI rate output on "
        f"{len(snapshots)} fixtures (4 replicas + 10 random)"
    )


def test_acceptance_8_check_point_parity(replicas):
    snapshot = Path(replicas["sod4sb-replica"])
    policy = snapshot / "policy.crs.json"
    points = sorted(
        p for p in (snapshot / "files").iterdir() if not p.name.endswith(".prov.json")
    )[:3]
    for point in points:
        bound = pipeline.check_point(
            point, policy, pending_source="https://example.org/x", retention="P5Y"
        )
        proc = run_cli(
            "check-point",
            str(point),
            "--policy",
            str(policy),
            "--pending-entry",
            "https://example.org/x,P5Y",
        )
        direct = json.loads(proc.stdout)
        assert bound.asset_id == direct["asset_id"]
        assert bound.compliant == direct["compliant"]
        assert list(bound.violated) == direct["violated"]
        assert list(bound.reasons) == direct["reasons"]
    print("\nACCEPTANCE 8 PASS: check-point parity holds on sampled points")
