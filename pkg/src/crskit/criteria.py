"""The six-criterion engine: license compatibility, per-point checks, scoring.

The letter scale runs G (nothing satisfied) to A (everything satisfied);
each satisfied criterion moves the grade up one letter. Criteria C2, C3
and C6 are decided per data point; a dataset satisfies them only when
every point does. Dataset-level results (C1, C4, C5) are produced by the
evidence module and joined in `crskit.rating`.

Every compatibility verdict cites the rule that produced it, so the
matrix stays explainable end to end:

  rule 1  consent denied while the dataset trains AI        -> incompatible
  rule 2  a consulted field is unspecified / custom terms   -> inconclusive
  rule 3  all-rights-reserved without explicit coverage     -> incompatible
  rule 4  non-commercial license, commercial intent         -> incompatible
  rule 5  no-derivatives license, derivative-making dataset -> incompatible
  rule 6  share-alike redistributed under another license   -> incompatible
  rule 7  nothing left to object to                         -> compatible

Rule 2's exception: when the policy does not require explicit consent, an
unspecified consent value is simply not consulted.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path
from typing import Sequence

from . import canon, manifest as mf, vocab
from .errors import CanonError, ContractError, CrsError, EvaluationError, ManifestParseError


@dataclass(frozen=True)
class DatasetPolicy:
    """What the dataset as a whole declares about itself."""

    dataset_license: str
    intended_uses: tuple[str, ...]
    requires_explicit_consent: bool
    performs_derivatives: bool

    def __post_init__(self):
        if not vocab.valid_license(self.dataset_license):
            raise CanonError(f"unknown dataset license: {self.dataset_license!r}")
        if self.dataset_license == vocab.LICENSE_UNSPECIFIED:
            raise CanonError("a dataset policy must declare a license")
        if not self.intended_uses:
            raise CanonError("intended_uses must be non-empty")
        for tag in self.intended_uses:
            if tag not in vocab.USE_TAGS:
                raise CanonError(f"unknown use tag: {tag!r}")


def load_policy(path: str | Path) -> DatasetPolicy:
    """Read a policy file (JSON object with the four policy fields)."""
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CrsError(f"cannot read policy file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CrsError(f"policy file {path} is not valid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise CrsError(f"policy file {path} must hold a JSON object")
    expected = {
        "dataset_license",
        "intended_uses",
        "requires_explicit_consent",
        "performs_derivatives",
    }
    unknown = set(obj) - expected
    if unknown:
        raise CrsError(f"policy file {path}: unknown fields {sorted(unknown)}")
    missing = expected - set(obj)
    if missing:
        raise CrsError(f"policy file {path}: missing fields {sorted(missing)}")
    uses = obj["intended_uses"]
    if not isinstance(uses, list) or not all(isinstance(u, str) for u in uses):
        raise CrsError(f"policy file {path}: intended_uses must be a list of strings")
    try:
        return DatasetPolicy(
            dataset_license=obj["dataset_license"],
            intended_uses=tuple(uses),
            requires_explicit_consent=bool(obj["requires_explicit_consent"]),
            performs_derivatives=bool(obj["performs_derivatives"]),
        )
    except CanonError as exc:
        raise CrsError(f"policy file {path}: {exc}") from None


@dataclass(frozen=True)
class Compatibility:
    value: str  # compatible | incompatible | inconclusive
    reason: str

    def __post_init__(self):
        if self.value not in (vocab.COMPATIBLE, vocab.INCOMPATIBLE, vocab.INCONCLUSIVE):
            raise ContractError(f"bad compatibility value: {self.value!r}")
        if self.value != vocab.COMPATIBLE and not self.reason:
            raise ContractError("non-compatible verdicts need a reason")


@dataclass(frozen=True)
class CriterionResult:
    criterion: str
    status: str
    evidence: str
    violating_points: tuple[str, ...] = ()
    inconclusive_points: tuple[str, ...] = ()

    def __post_init__(self):
        level = vocab.criterion_level(self.criterion)
        if self.status not in (vocab.SATISFIED, vocab.VIOLATED, vocab.NEEDS_REVIEW):
            raise ContractError(f"bad criterion status: {self.status!r}")
        # point-level criteria are decidable without user confirmation
        if self.status == vocab.NEEDS_REVIEW and level != "dataset-level":
            raise ContractError(f"{self.criterion} cannot be needs-review")
        if self.status == vocab.SATISFIED and self.violating_points:
            raise ContractError(f"{self.criterion} satisfied but lists violations")
        if self.violating_points and level != "point-level":
            raise ContractError(f"{self.criterion} is dataset-level, no point lists")
        if self.inconclusive_points and self.criterion not in ("C2", "C3"):
            raise ContractError("inconclusive_points only apply to C2 and C3")

    @property
    def level(self) -> str:
        return vocab.criterion_level(self.criterion)


@dataclass(frozen=True)
class DataPointAssessment:
    asset_id: str
    compliant: bool
    violated: tuple[str, ...]
    reasons: tuple[str, ...]

    def __post_init__(self):
        if self.compliant != (not self.violated):
            raise ContractError("compliant must mean exactly: no violated criteria")
        if len(self.reasons) < len(self.violated):
            raise ContractError("every violation needs a reason")


@dataclass(frozen=True)
class CrsScore:
    letter: str
    satisfied_count: int

    def __post_init__(self):
        if not 0 <= self.satisfied_count <= 6:
            raise ContractError(f"satisfied_count out of range: {self.satisfied_count}")
        expected = vocab.LETTERS[6 - self.satisfied_count]
        if self.letter != expected:
            raise ContractError(
                f"letter {self.letter!r} does not match count {self.satisfied_count}"
            )


@dataclass(frozen=True)
class DatasetAssessment:
    per_criterion: tuple[CriterionResult, ...]
    score: CrsScore
    flags_file_checked: bool
    generated_at: datetime

    def __post_init__(self):
        if tuple(r.criterion for r in self.per_criterion) != vocab.CRITERIA:
            raise ContractError("per_criterion must hold C1..C6 in order")
        count = sum(1 for r in self.per_criterion if r.status == vocab.SATISFIED)
        if count != self.score.satisfied_count:
            raise ContractError("score does not match per-criterion statuses")


@dataclass(frozen=True)
class FlagEntry:
    asset_id: str
    reason: str
    flagged_at: datetime


@dataclass(frozen=True)
class FlagFile:
    """Parsed FLAGS.crs.jsonl; `present` is False when no file existed."""

    entries: tuple[FlagEntry, ...] = ()
    present: bool = False
    path: str | None = None

    def ids(self) -> frozenset[str]:
        return frozenset(e.asset_id for e in self.entries)


FLAGS_FILENAME = "FLAGS.crs.jsonl"


def load_flags(root_or_path: str | Path) -> FlagFile:
    path = Path(root_or_path)
    if path.is_dir():
        path = path / FLAGS_FILENAME
    if not path.exists():
        return FlagFile(present=False, path=str(path))
    entries = []
    for lineno, line in enumerate(
        path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            entries.append(
                FlagEntry(
                    asset_id=obj["asset_id"],
                    reason=obj["reason"],
                    flagged_at=canon.parse_utc(obj["flagged_at"]),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, CanonError) as exc:
            raise CrsError(f"{path}:{lineno}: bad flag record: {exc}") from None
    return FlagFile(entries=tuple(entries), present=True, path=str(path))


def append_flag(root: str | Path, entry: FlagEntry) -> Path:
    path = Path(root) / FLAGS_FILENAME
    record = {
        "asset_id": entry.asset_id,
        "flagged_at": canon.format_utc(entry.flagged_at),
        "reason": entry.reason,
    }
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(canon.canonical_json_bytes(record).decode("utf-8") + "\n")
    return path


# --- compatibility matrix -------------------------------------------------

def _covers_intended(allowed, intended) -> bool:
    return allowed is not None and all(u in allowed for u in intended)


def _rule_1(lic, consent, allowed, policy, covers):
    if consent == vocab.CONSENT_DENIED and vocab.USE_AI_TRAINING in policy.intended_uses:
        return Compatibility(vocab.INCOMPATIBLE, "rule 1: AI-training consent denied")
    return None


def _rule_2(lic, consent, allowed, policy, covers):
    if lic == vocab.LICENSE_UNSPECIFIED:
        return Compatibility(vocab.INCONCLUSIVE, "rule 2: license unspecified")
    if vocab.is_custom_license(lic) and not covers:
        return Compatibility(
            vocab.INCONCLUSIVE,
            "rule 2: custom license terms unknown and allowed uses do not "
            "explicitly cover the dataset's intended uses",
        )
    if consent == vocab.CONSENT_UNSPECIFIED and policy.requires_explicit_consent:
        return Compatibility(
            vocab.INCONCLUSIVE,
            "rule 2: consent unspecified but the dataset policy requires explicit consent",
        )
    return None


def _rule_3(lic, consent, allowed, policy, covers):
    if lic == vocab.LICENSE_ARR and not covers:
        return Compatibility(
            vocab.INCOMPATIBLE,
            "rule 3: all rights reserved and allowed uses do not cover the "
            "dataset's intended uses",
        )
    return None


def _rule_4(lic, consent, allowed, policy, covers):
    if lic == vocab.LICENSE_CC_BY_NC and vocab.USE_COMMERCIAL in policy.intended_uses:
        return Compatibility(
            vocab.INCOMPATIBLE,
            "rule 4: non-commercial license but the dataset declares commercial use",
        )
    return None


def _rule_5(lic, consent, allowed, policy, covers):
    if lic == vocab.LICENSE_CC_BY_ND and policy.performs_derivatives:
        return Compatibility(
            vocab.INCOMPATIBLE,
            "rule 5: no-derivatives license but the dataset produces derivative works",
        )
    return None


def _rule_6(lic, consent, allowed, policy, covers):
    if (
        lic == vocab.LICENSE_CC_BY_SA
        and vocab.USE_REDISTRIBUTION in policy.intended_uses
        and policy.dataset_license != vocab.LICENSE_CC_BY_SA
    ):
        return Compatibility(
            vocab.INCOMPATIBLE,
            "rule 6: share-alike license but the dataset redistributes under "
            f"{policy.dataset_license}",
        )
    return None


_RULES = (_rule_1, _rule_2, _rule_3, _rule_4, _rule_5, _rule_6)


def check_license_compat(
    point_license: str,
    consent: str,
    point_allowed_uses: Sequence[str] | None,
    policy: DatasetPolicy,
) -> Compatibility:
    """Run the ordered rule list; first matching rule wins."""
    if not vocab.valid_license(point_license):
        raise CanonError(f"unknown license: {point_license!r}")
    if consent not in vocab.CONSENT_VALUES:
        raise CanonError(f"unknown consent value: {consent!r}")
    covers = _covers_intended(point_allowed_uses, policy.intended_uses)
    for rule in _RULES:
        verdict = rule(point_license, consent, point_allowed_uses, policy, covers)
        if verdict is not None:
            return verdict
    return Compatibility(vocab.COMPATIBLE, "rule 7: no restriction violated")


# --- per-point review -----------------------------------------------------

@dataclass(frozen=True)
class PointDetail:
    """Everything the point-level criteria concluded about one asset."""

    asset_id: str
    provenance: str  # valid | invalid | missing | unparseable
    verdict: Compatibility | None
    flagged: bool
    entry_matched: bool
    retention_expired: bool

    @property
    def conclusive(self) -> bool:
        return self.provenance == vocab.VALID and (
            self.verdict is not None and self.verdict.value != vocab.INCONCLUSIVE
        )

    @property
    def incompatible(self) -> bool:
        return (
            self.provenance == vocab.VALID
            and self.verdict is not None
            and self.verdict.value == vocab.INCOMPATIBLE
        )

    def inconclusive_reason(self) -> str:
        if self.provenance == vocab.MISSING:
            return "provenance missing"
        if self.provenance == vocab.INVALID:
            return "provenance invalid (binding or signature verification failed)"
        if self.provenance == "unparseable":
            return "provenance sidecar unparseable"
        assert self.verdict is not None
        return f"provenance inconclusive ({self.verdict.reason})"


def _review_one(
    asset_id: str,
    asset: mf.AssetRef,
    policy: DatasetPolicy,
    dataset_source: str | None,
    flagged_ids: frozenset[str],
) -> PointDetail:
    parsed = None
    try:
        status, parsed = mf.resolve_status(asset)
    except ManifestParseError:
        status = "unparseable"
    verdict = None
    if status == vocab.VALID:
        verdict = check_license_compat(
            parsed.license, parsed.ai_training_consent, parsed.allowed_uses, policy
        )
    entry_matched = False
    retention_expired = False
    if parsed is not None and dataset_source is not None:
        want = canon.normalize_source(dataset_source)
        for entry in parsed.dataset_entries:
            if canon.normalize_source(entry.dataset_source) == want:
                entry_matched = True
                expiry = canon.retention_expiry(entry.retention_period)
                if expiry is not None and expiry < date.today():
                    retention_expired = True
    return PointDetail(
        asset_id=asset_id,
        provenance=status,
        verdict=verdict,
        flagged=asset_id in flagged_ids,
        entry_matched=entry_matched,
        retention_expired=retention_expired,
    )


@dataclass(frozen=True)
class PointLevelReview:
    c2: CriterionResult
    c3: CriterionResult
    c6: CriterionResult
    details: tuple[PointDetail, ...]

    @property
    def results(self) -> tuple[CriterionResult, CriterionResult, CriterionResult]:
        return (self.c2, self.c3, self.c6)


def review_points(
    points: Sequence[tuple[str, mf.AssetRef]],
    policy: DatasetPolicy,
    flags: FlagFile,
    dataset_source: str,
    jobs: int | None = None,
) -> PointLevelReview:
    """Evaluate C2/C3/C6 over labeled points.

    Points are checked on a worker pool and re-sorted by asset id, so the
    outcome is order-independent and deterministic.
    """
    if not points:
        raise EvaluationError("a dataset with zero points cannot be rated")
    flagged = flags.ids()
    workers = jobs or os.cpu_count() or 1
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            details = list(
                pool.map(
                    lambda item: _review_one(
                        item[0], item[1], policy, dataset_source, flagged
                    ),
                    points,
                )
            )
    else:
        details = [
            _review_one(pid, asset, policy, dataset_source, flagged)
            for pid, asset in points
        ]
    details.sort(key=lambda d: d.asset_id)

    n = len(details)
    incompatible = tuple(d.asset_id for d in details if d.incompatible)
    inconclusive = tuple(d.asset_id for d in details if not d.conclusive)
    unflagged = tuple(
        d.asset_id for d in details if not d.conclusive and not d.flagged
    )
    unembedded = tuple(d.asset_id for d in details if not d.entry_matched)
    expired = [d.asset_id for d in details if d.retention_expired]

    c2 = CriterionResult(
        criterion="C2",
        status=vocab.VIOLATED if incompatible else vocab.SATISFIED,
        evidence=(
            f"{len(incompatible)} of {n} data points carry a license or consent "
            "incompatible with the dataset policy"
            if incompatible
            else f"all {n} data points with conclusive provenance are compatible "
            "with the dataset policy"
        ),
        violating_points=incompatible,
        inconclusive_points=inconclusive,
    )
    if unflagged:
        c3_evidence = (
            f"{len(unflagged)} of {len(inconclusive)} data points with inconclusive "
            "provenance are not flagged"
        )
    elif inconclusive:
        c3_evidence = (
            f"all {len(inconclusive)} data points with inconclusive provenance are flagged"
        )
    else:
        c3_evidence = f"no data points with inconclusive provenance among {n}"
    c3 = CriterionResult(
        criterion="C3",
        status=vocab.VIOLATED if unflagged else vocab.SATISFIED,
        evidence=c3_evidence,
        violating_points=unflagged,
        inconclusive_points=inconclusive,
    )
    c6_evidence = (
        f"{len(unembedded)} of {n} data points lack an embedded dataset entry "
        "matching this dataset's source"
        if unembedded
        else f"all {n} data points embed this dataset's source and a retention period"
    )
    if expired:
        c6_evidence += (
            f"; {len(expired)} embedded retention periods are past their expiry "
            "date (informational)"
        )
    c6 = CriterionResult(
        criterion="C6",
        status=vocab.VIOLATED if unembedded else vocab.SATISFIED,
        evidence=c6_evidence,
        violating_points=unembedded,
    )
    return PointLevelReview(c2=c2, c3=c3, c6=c6, details=tuple(details))


def assess_dataset_points(
    points: Sequence[mf.AssetRef],
    policy: DatasetPolicy,
    flags: FlagFile,
    dataset_source: str,
    ids: Sequence[str] | None = None,
    jobs: int | None = None,
) -> tuple[CriterionResult, CriterionResult, CriterionResult]:
    """C2/C3/C6 over a dataset. Ids default to the assets' file names."""
    if ids is None:
        labeled = []
        for p in points:
            if p.path is None:
                raise ContractError("byte-stream assets need explicit ids")
            labeled.append((p.path.name, p))
    else:
        if len(ids) != len(points):
            raise ContractError("ids and points must align")
        labeled = list(zip(ids, points))
    return review_points(labeled, policy, flags, dataset_source, jobs=jobs).results


def assess_datapoint(
    asset: mf.AssetRef,
    policy: DatasetPolicy,
    pending_entry: mf.DatasetEntry | None = None,
    asset_id: str | None = None,
) -> DataPointAssessment:
    """Admission check for a single candidate data point (C2, C3, C6).

    Inconclusive provenance never counts against C2; it violates C3 here
    because admitting the point obliges the author to flag it or drop it.
    C6 is met when the author supplies the entry they will embed, or when
    the manifest already carries one.
    """
    if asset_id is None:
        asset_id = asset.path.name if asset.path is not None else "<bytes>"
    parsed = None
    parse_failure = None
    try:
        status, parsed = mf.resolve_status(asset)
    except ManifestParseError as exc:
        status, parse_failure = "unparseable", str(exc)

    violated: list[str] = []
    reasons: list[str] = []

    verdict = None
    if status == vocab.VALID:
        verdict = check_license_compat(
            parsed.license, parsed.ai_training_consent, parsed.allowed_uses, policy
        )
        if verdict.value == vocab.INCOMPATIBLE:
            violated.append("C2")
            reasons.append(
                f"license or consent incompatible with dataset policy: {verdict.reason}"
            )

    if status == vocab.MISSING:
        violated.append("C3")
        reasons.append("provenance missing; must be flagged or dropped")
    elif status == vocab.INVALID:
        violated.append("C3")
        reasons.append(
            "provenance invalid (binding or signature verification failed); "
            "must be flagged or dropped"
        )
    elif status == "unparseable":
        violated.append("C3")
        reasons.append(
            f"provenance sidecar unparseable ({parse_failure}); must be flagged or dropped"
        )
    elif verdict is not None and verdict.value == vocab.INCONCLUSIVE:
        violated.append("C3")
        reasons.append(
            f"provenance inconclusive ({verdict.reason}); must be flagged or dropped"
        )

    already_embedded = parsed is not None and bool(parsed.dataset_entries)
    if pending_entry is None and not already_embedded:
        violated.append("C6")
        reasons.append(
            "no dataset entry pending and none embedded; the dataset source "
            "and retention period must be added"
        )

    return DataPointAssessment(
        asset_id=asset_id,
        compliant=not violated,
        violated=tuple(violated),
        reasons=tuple(reasons),
    )


def compute_score(per_criterion: Sequence[CriterionResult]) -> CrsScore:
    """Letter grade from the six criterion results; one per criterion."""
    seen = tuple(r.criterion for r in per_criterion)
    if sorted(seen) != list(vocab.CRITERIA) or len(seen) != 6:
        raise ContractError(f"need exactly one result per criterion, got {seen}")
    count = sum(1 for r in per_criterion if r.status == vocab.SATISFIED)
    return CrsScore(letter=vocab.LETTERS[6 - count], satisfied_count=count)
