from __future__ import annotations

from pathlib import Path

import pytest

import crskit_pipeline as pipeline

from conftest import gen_fixture


@pytest.fixture(scope="module")
def clean_snapshot(tmp_path_factory):
    return Path(
        gen_fixture(
            tmp_path_factory.mktemp("b") / "clean",
            profile={
                "satisfied": ["C1", "C2", "C3", "C4", "C5", "C6"],
                "point_count": 6,
                "seed": 8801,
                "platform_layout": "huggingface",
            },
        )
    )


@pytest.fixture(scope="module")
def denied_snapshot(tmp_path_factory):
    return Path(
        gen_fixture(
            tmp_path_factory.mktemp("b") / "denied",
            profile={
                "satisfied": ["C1", "C3", "C4", "C5", "C6"],
                "point_count": 6,
                "seed": 8802,
                "platform_layout": "huggingface",
            },
        )
    )


def points_of(snapshot: Path) -> list[Path]:
    return sorted(
        p for p in (snapshot / "files").iterdir() if not p.name.endswith(".prov.json")
    )


def denied_point(snapshot: Path) -> Path:
    rating = pipeline.rate(snapshot)
    c2 = next(r for r in rating.per_criterion if r["criterion"] == "C2")
    return snapshot / "files" / c2["violating_points"][0]


class TestCheckPoint:
    def test_clean_point_compliant(self, clean_snapshot):
        outcome = pipeline.check_point(
            points_of(clean_snapshot)[0],
            clean_snapshot / "policy.crs.json",
            pending_source="https://example.org/datasets/new",
            retention="P5Y",
        )
        assert outcome.compliant and outcome.violated == ()

    def test_denied_point_violates_c2(self, denied_snapshot):
        outcome = pipeline.check_point(
            denied_point(denied_snapshot),
            denied_snapshot / "policy.crs.json",
            pending_source="https://example.org/x",
            retention="P5Y",
        )
        assert not outcome.compliant
        assert outcome.violated == ("C2",)
        assert len(outcome.reasons) >= 1

    def test_missing_file_raises(self, clean_snapshot):
        with pytest.raises(pipeline.CliError):
            pipeline.check_point(
                clean_snapshot / "files" / "ghost.png",
                clean_snapshot / "policy.crs.json",
            )

    def test_pending_args_go_together(self, clean_snapshot):
        with pytest.raises(ValueError):
            pipeline.check_point(
                points_of(clean_snapshot)[0],
                clean_snapshot / "policy.crs.json",
                pending_source="https://example.org/x",
            )


class TestRate:
    def test_replica_letters(self, replicas):
        assert pipeline.rate(replicas["sod4sb-replica"]).letter == "C"
        assert pipeline.rate(replicas["tiktok-replica"]).letter == "G"

    def test_empty_dir_raises(self, tmp_path):
        (tmp_path / "files").mkdir()
        with pytest.raises(pipeline.CliError):
            pipeline.rate(tmp_path)

    def test_rating_mirrors_report(self, replicas):
        rating = pipeline.rate(replicas["sod4sb-replica"])
        assert rating.letter == rating.report["score"]["letter"]
        assert rating.satisfied_count == rating.report["score"]["satisfied_count"]
        assert list(rating.per_criterion) == rating.report["per_criterion"]


class TestCompliantOnly:
    def test_filters_denied_points(self, clean_snapshot, denied_snapshot):
        clean = points_of(clean_snapshot)[0]
        bad = denied_point(denied_snapshot)
        kept = list(
            pipeline.compliant_only(
                [clean, bad, clean],
                clean_snapshot / "policy.crs.json",
                pending_source="https://example.org/x",
                retention="P5Y",
            )
        )
        assert kept == [clean, clean]

    def test_empty_iterable(self, clean_snapshot):
        assert list(pipeline.compliant_only([], clean_snapshot / "policy.crs.json")) == []

    def test_all_clean_is_identity(self, clean_snapshot):
        points = points_of(clean_snapshot)
        kept = list(
            pipeline.compliant_only(
                points,
                clean_snapshot / "policy.crs.json",
                pending_source="https://example.org/x",
                retention="P5Y",
            )
        )
        assert kept == points

    def test_lazy_consumption(self, clean_snapshot):
        first = points_of(clean_snapshot)[0]

        def feed():
            yield first
            raise AssertionError("second item was pulled eagerly")

        stream = pipeline.compliant_only(
            feed(),
            clean_snapshot / "policy.crs.json",
            pending_source="https://example.org/x",
            retention="P5Y",
        )
        assert next(stream) == first  # must not advance past the first item


def test_version_matches_cli():
    assert pipeline.cli_version().endswith(pipeline.__version__)
