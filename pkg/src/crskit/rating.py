"""Whole-dataset rating: joins point-level checks, platform evidence,
review overrides, and the letter score into one assessment plus a
machine-readable report document."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from . import evidence as ev, manifest as mf, vocab
from .criteria import (
    DatasetAssessment,
    DatasetPolicy,
    FlagFile,
    PointDetail,
    compute_score,
    load_flags,
    load_policy,
    review_points,
)
from .errors import EvaluationError
from .fixtures import POLICY_FILENAME

REPORT_SCHEMA_VERSION = 1


# metadata files that are not data points when rating a bare directory
_RESERVED = frozenset(
    {"card.json", POLICY_FILENAME, "FLAGS.crs.jsonl", "CHANGES.crs.jsonl",
     "OVERRIDES.crs.json", "signing-key.hex"}
)


def discover_points(root: str | Path) -> list[tuple[str, mf.AssetRef]]:
    """Data points of a snapshot: every file under files/ except sidecars.
    Ids are posix paths relative to files/. A directory without a files/
    subdir is treated as a bare directory of points (metadata filenames
    skipped), which is how --files-dir works for live refs."""
    root = Path(root)
    files_dir = root / "files"
    bare = not files_dir.is_dir()
    if bare:
        files_dir = root
        if not files_dir.is_dir():
            return []
    points = []
    for path in sorted(files_dir.rglob("*")):
        if not path.is_file() or path.name.endswith(mf.SIDECAR_SUFFIX):
            continue
        if bare and (path.name in _RESERVED or path.name.lower().startswith("readme")):
            continue
        points.append((path.relative_to(files_dir).as_posix(), mf.AssetRef.from_path(path)))
    return points


@dataclass(frozen=True)
class RatingOutcome:
    assessment: DatasetAssessment
    details: tuple[PointDetail, ...]
    ref: ev.DatasetRef
    dataset_source: str
    policy: DatasetPolicy


def _compose(
    labeled_points: Sequence[tuple[str, mf.AssetRef]],
    policy: DatasetPolicy,
    flags: FlagFile,
    evidence: ev.DatasetEvidence,
    overrides: Sequence[ev.ReviewOverride],
    ref: ev.DatasetRef,
    dataset_source: str,
    provider: ev.InferenceProvider | None,
    jobs: int | None,
) -> tuple[DatasetAssessment, tuple[PointDetail, ...]]:
    c1, c4, c5 = ev.apply_overrides(
        ev.infer_dataset_criteria(evidence, ref, provider), overrides
    )
    point_review = review_points(labeled_points, policy, flags, dataset_source, jobs=jobs)
    per_criterion = (c1, point_review.c2, point_review.c3, c4, c5, point_review.c6)
    assessment = DatasetAssessment(
        per_criterion=per_criterion,
        score=compute_score(per_criterion),
        flags_file_checked=flags.present,
        generated_at=datetime.now(timezone.utc),
    )
    return assessment, point_review.details


def assess_dataset(
    points: Sequence[mf.AssetRef] | Sequence[tuple[str, mf.AssetRef]],
    policy: DatasetPolicy,
    flags: FlagFile,
    evidence: ev.DatasetEvidence,
    overrides: Sequence[ev.ReviewOverride] = (),
    *,
    ref: ev.DatasetRef | None = None,
    dataset_source: str | None = None,
    provider: ev.InferenceProvider | None = None,
    jobs: int | None = None,
) -> DatasetAssessment:
    """Full six-criterion assessment from already-gathered inputs."""
    labeled: list[tuple[str, mf.AssetRef]] = []
    for item in points:
        if isinstance(item, tuple):
            labeled.append(item)
        else:
            if item.path is None:
                raise EvaluationError("byte-stream points need explicit ids")
            labeled.append((item.path.name, item))
    if ref is None:
        ref = ev.DatasetRef(platform="local", identifier=str(evidence.raw_metadata.get("name", ".")))
    if dataset_source is None:
        dataset_source = evidence.raw_metadata.get("dataset_source", ref.identifier)
    assessment, _ = _compose(
        labeled, policy, flags, evidence, overrides, ref, dataset_source, provider, jobs
    )
    return assessment


def rate_snapshot(
    root: str | Path,
    policy: DatasetPolicy | None = None,
    *,
    provider: ev.InferenceProvider | None = None,
    jobs: int | None = None,
    ref: ev.DatasetRef | None = None,
    files_dir: str | Path | None = None,
) -> RatingOutcome:
    """Rate a snapshot directory end to end.

    The policy defaults to the snapshot's policy.crs.json. For live
    platform refs pass `ref` and point `files_dir` at the local copy of
    the data points.
    """
    root = Path(root)
    if ref is None:
        ref = ev.DatasetRef(platform="local", identifier=str(root))
    if policy is None:
        policy_path = root / POLICY_FILENAME
        if not policy_path.exists():
            raise EvaluationError(
                f"no policy given and {POLICY_FILENAME} not present in {root}"
            )
        policy = load_policy(policy_path)
    evidence = ev.fetch_evidence(ref)
    flags = load_flags(root)
    overrides = ev.load_overrides(root)
    labeled = discover_points(files_dir if files_dir is not None else root)
    if not labeled:
        raise EvaluationError(f"no data points found under {root}/files")
    dataset_source = evidence.raw_metadata.get("dataset_source", ref.identifier)
    assessment, details = _compose(
        labeled, policy, flags, evidence, overrides, ref, dataset_source, provider, jobs
    )
    return RatingOutcome(
        assessment=assessment,
        details=details,
        ref=ref,
        dataset_source=dataset_source,
        policy=policy,
    )


def build_report(
    outcome: RatingOutcome, tool_version: str, max_point_details: int = 500
) -> dict:
    """The versioned report document `rate --format json` emits."""
    assessment = outcome.assessment
    detail = [
        {
            "asset_id": d.asset_id,
            "provenance": d.provenance,
            "compatibility": d.verdict.value if d.verdict else None,
            "compatibility_reason": d.verdict.reason if d.verdict else None,
            "flagged": d.flagged,
            "dataset_entry_matched": d.entry_matched,
        }
        for d in outcome.details[:max_point_details]
    ]
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "tool_version": tool_version,
        "dataset": {
            "platform": outcome.ref.platform,
            "identifier": outcome.ref.identifier,
            "source": outcome.dataset_source,
        },
        "generated_at": assessment.generated_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
        "score": {
            "letter": assessment.score.letter,
            "satisfied_count": assessment.score.satisfied_count,
        },
        "per_criterion": [
            {
                "criterion": r.criterion,
                "level": r.level,
                "status": r.status,
                "evidence": r.evidence,
                "violating_points": list(r.violating_points),
                "inconclusive_points": list(r.inconclusive_points),
            }
            for r in assessment.per_criterion
        ],
        "flags_file_checked": assessment.flags_file_checked,
        "points": {
            "total": len(outcome.details),
            "truncated": len(outcome.details) > max_point_details,
            "detail": detail,
        },
    }


def render_text(outcome: RatingOutcome) -> str:
    assessment = outcome.assessment
    lines = [
        f"dataset: {outcome.ref.identifier} ({outcome.ref.platform})",
        f"CRS score: {assessment.score.letter} — "
        f"{assessment.score.satisfied_count} of 6 criteria satisfied",
    ]
    for r in assessment.per_criterion:
        lines.append(f"  {r.criterion}  {r.level:<13}  {r.status:<12}  {r.evidence}")
        if r.violating_points:
            shown = ", ".join(r.violating_points[:5])
            more = len(r.violating_points) - 5
            suffix = f" (+{more} more)" if more > 0 else ""
            lines.append(f"      violating: {shown}{suffix}")
    pending = [r.criterion for r in assessment.per_criterion if r.status == vocab.NEEDS_REVIEW]
    if pending:
        lines.append(
            f"NOTICE: {', '.join(pending)} need{'s' if len(pending) == 1 else ''} review; "
            "needs-review scores as not satisfied until resolved with `crskit review`."
        )
    return "\n".join(lines) + "\n"
