from __future__ import annotations

import json

import pytest

from crskit import evidence as ev, fixtures as fx, vocab
from crskit.criteria import compute_score, load_flags, load_policy
from crskit.errors import EvaluationError
from crskit.rating import (
    assess_dataset,
    build_report,
    discover_points,
    rate_snapshot,
    render_text,
)


@pytest.fixture(scope="module")
def mixed_snapshot(tmp_path_factory):
    profile = fx.FixtureProfile(
        satisfied=frozenset({"C1", "C2", "C4", "C6"}),
        point_count=15,
        seed=4242,
        platform_layout="huggingface",
    )
    return fx.build_fixture(profile, tmp_path_factory.mktemp("rating") / "snap")


class TestRateSnapshot:
    def test_report_letter_matches_recomputation(self, mixed_snapshot):
        from crskit.criteria import CriterionResult

        outcome = rate_snapshot(mixed_snapshot)
        report = build_report(outcome, "0.0-test")
        # recompute from the report's own per_criterion array
        parsed_back = [
            CriterionResult(
                criterion=r["criterion"],
                status=r["status"],
                evidence=r["evidence"],
                violating_points=tuple(r["violating_points"]),
                inconclusive_points=tuple(r["inconclusive_points"]),
            )
            for r in report["per_criterion"]
        ]
        assert report["score"]["letter"] == compute_score(parsed_back).letter
        assert [r["criterion"] for r in report["per_criterion"]] == list(vocab.CRITERIA)

    def test_deterministic_apart_from_timestamp(self, mixed_snapshot):
        a = rate_snapshot(mixed_snapshot)
        b = rate_snapshot(mixed_snapshot)
        assert a.assessment.per_criterion == b.assessment.per_criterion
        assert a.assessment.score == b.assessment.score
        assert a.details == b.details

    def test_parallel_equals_serial(self, mixed_snapshot):
        serial = rate_snapshot(mixed_snapshot, jobs=1)
        parallel = rate_snapshot(mixed_snapshot, jobs=8)
        assert serial.assessment.per_criterion == parallel.assessment.per_criterion

    def test_text_and_report_hold_same_verdicts(self, mixed_snapshot):
        outcome = rate_snapshot(mixed_snapshot)
        report = build_report(outcome, "0.0-test")
        text = render_text(outcome)
        for entry in report["per_criterion"]:
            line = next(
                l for l in text.splitlines() if l.strip().startswith(entry["criterion"])
            )
            assert entry["status"] in line

    def test_empty_dataset_is_an_error(self, tmp_path):
        (tmp_path / "files").mkdir()
        (tmp_path / "policy.crs.json").write_text(
            json.dumps(
                {
                    "dataset_license": "CC-BY-4.0",
                    "intended_uses": ["ai-training"],
                    "requires_explicit_consent": False,
                    "performs_derivatives": False,
                }
            )
        )
        with pytest.raises(EvaluationError):
            rate_snapshot(tmp_path)

    def test_points_detail_capped(self, mixed_snapshot):
        outcome = rate_snapshot(mixed_snapshot)
        report = build_report(outcome, "0.0-test", max_point_details=5)
        assert report["points"]["total"] == 15
        assert report["points"]["truncated"] is True
        assert len(report["points"]["detail"]) == 5

    def test_needs_review_notice_in_text(self, tmp_path):
        profile = fx.FixtureProfile(
            satisfied=frozenset({"C2", "C3", "C6"}),
            point_count=6,
            seed=7,
            platform_layout="github",
        )
        root = fx.build_fixture(profile, tmp_path / "snap")
        # drop the generated overrides so needs-review is left unresolved
        (root / ev.OVERRIDES_FILENAME).write_text("[]")
        outcome = rate_snapshot(root)
        by = {r.criterion: r.status for r in outcome.assessment.per_criterion}
        assert by["C1"] == "needs-review" and by["C4"] == "needs-review"
        assert "NOTICE" in render_text(outcome)


class TestDiscoverPoints:
    def test_snapshot_layout(self, mixed_snapshot):
        points = discover_points(mixed_snapshot)
        assert len(points) == 15
        assert all(not pid.endswith(".prov.json") for pid, _ in points)

    def test_bare_directory_fallback(self, mixed_snapshot, tmp_path):
        import shutil

        bare = tmp_path / "bare"
        shutil.copytree(mixed_snapshot / "files", bare)
        (bare / "README.md").write_text("docs, not a point")
        points = discover_points(bare)
        assert len(points) == 15

    def test_assess_dataset_points_default_ids(self, mixed_snapshot, ai_policy):
        from crskit.criteria import FlagFile, assess_dataset_points
        from crskit.errors import EvaluationError

        assets = [asset for _, asset in discover_points(mixed_snapshot)]
        c2, c3, c6 = assess_dataset_points(
            assets,
            ai_policy,
            load_flags(mixed_snapshot),
            dataset_source="https://example.org/datasets/fixture-C1C2C4C6-4242",
        )
        assert (c2.criterion, c3.criterion, c6.criterion) == ("C2", "C3", "C6")
        assert all("." in pid for pid in c3.violating_points)  # file-name ids
        with pytest.raises(EvaluationError):
            assess_dataset_points([], ai_policy, FlagFile(), dataset_source="x")


class TestAssessDatasetApi:
    def test_compose_from_parts(self, mixed_snapshot):
        policy = load_policy(mixed_snapshot / fx.POLICY_FILENAME)
        ref = ev.DatasetRef(platform="local", identifier=str(mixed_snapshot))
        evidence = ev.fetch_evidence(ref)
        flags = load_flags(mixed_snapshot)
        overrides = ev.load_overrides(mixed_snapshot)
        points = discover_points(mixed_snapshot)
        assessment = assess_dataset(
            points, policy, flags, evidence, overrides, ref=ref
        )
        assert assessment.score == rate_snapshot(mixed_snapshot).assessment.score

    def test_override_lifts_needs_review_to_grade(self, tmp_path):
        # standardless platform: C5's valid log stays needs-review until the
        # emitted override confirms it, landing the grade at B
        profile = fx.FixtureProfile(
            satisfied=frozenset({"C1", "C2", "C3", "C4", "C5"}),
            point_count=10,
            seed=321,
            platform_layout="github",
        )
        root = fx.build_fixture(profile, tmp_path / "snap")
        outcome = rate_snapshot(root)
        c5 = outcome.assessment.per_criterion[4]
        assert c5.status == "satisfied"
        assert "[override:" in c5.evidence
        assert outcome.assessment.score.letter == "B"
        # without the override file the same snapshot sits at needs-review
        (root / ev.OVERRIDES_FILENAME).write_text("[]")
        bare = rate_snapshot(root)
        assert bare.assessment.per_criterion[4].status == "needs-review"
        assert bare.assessment.score.letter == "E"  # C2, C3, C6 remain
