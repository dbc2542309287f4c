"""Dataset-level evidence (C1 docs, C4 opt-out, C5 trace log) and review.

Hugging Face and Kaggle pages carry standardized card metadata, so the
three dataset-level criteria are decided directly from the card keys
`crs.reproducibility`, `crs.opt_out`, and `crs.trace_log`. GitHub and
custom-hosted datasets have no such convention: a pluggable inference
provider scans the repository text instead, and its verdict is always
demoted to needs-review until a human override settles it. A `local`
ref points at a snapshot directory mirroring any platform layout, which
is also how the test suite stays hermetic.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import time
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

from . import canon, tracelog as tl, vocab
from .criteria import CriterionResult
from .errors import CanonError, ContractError, CrsError, FetchError, NotFoundError

PLATFORMS = frozenset({"huggingface", "kaggle", "github", "custom-url", "local"})
STANDARDIZED = frozenset({"huggingface", "kaggle"})
OVERRIDES_FILENAME = "OVERRIDES.crs.json"

CARD_KEY_REPRODUCIBILITY = "crs.reproducibility"
CARD_KEY_OPT_OUT = "crs.opt_out"
CARD_KEY_TRACE_LOG = "crs.trace_log"

_CONTACT_URI_RE = re.compile(r"^(mailto:|https?://|tel:)", re.IGNORECASE)
_EXCERPT_CAP = 500
_DOC_CAP = 100_000


@dataclass(frozen=True)
class DatasetRef:
    platform: str
    identifier: str

    def __post_init__(self):
        if self.platform not in PLATFORMS:
            raise CrsError(f"unknown platform: {self.platform!r}")
        if not self.identifier:
            raise CrsError("dataset identifier must be non-empty")
        if self.platform == "github" and "/" not in self.identifier:
            raise CrsError("github identifiers look like owner/repo")
        if self.platform == "custom-url" and not self.identifier.startswith(
            ("http://", "https://")
        ):
            raise CrsError("custom-url identifiers must be http(s) URLs")
        if self.platform in STANDARDIZED and any(c.isspace() for c in self.identifier):
            raise CrsError(f"{self.platform} identifiers cannot contain whitespace")


def parse_ref(text: str) -> DatasetRef:
    """CLI-facing ref syntax: hf:/huggingface:, kaggle:, github:, url:,
    anything else is a local snapshot path."""
    for prefix, platform in (
        ("hf:", "huggingface"),
        ("huggingface:", "huggingface"),
        ("kaggle:", "kaggle"),
        ("github:", "github"),
        ("url:", "custom-url"),
    ):
        if text.startswith(prefix):
            return DatasetRef(platform=platform, identifier=text[len(prefix):])
    return DatasetRef(platform="local", identifier=text)


@dataclass(frozen=True)
class EvidenceItem:
    source: str  # file path or URL the excerpt came from
    excerpt: str

    def __post_init__(self):
        if not self.source:
            raise CrsError("evidence items must record their source location")
        if len(self.excerpt) > _EXCERPT_CAP:
            object.__setattr__(self, "excerpt", self.excerpt[:_EXCERPT_CAP])


@dataclass(frozen=True)
class DatasetEvidence:
    c1_docs: tuple[EvidenceItem, ...]
    c4_optout: EvidenceItem | None
    c5_tracelog: tl.TraceLog | None
    raw_metadata: dict
    fetched_at: datetime
    corpus: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class ReviewOverride:
    criterion: str
    status: str
    justification: str
    reviewer: str
    decided_at: datetime

    def __post_init__(self):
        if self.criterion not in vocab.DATASET_LEVEL:
            raise ContractError(
                f"{self.criterion} is point-level; only C1/C4/C5 can be overridden"
            )
        if self.status not in (vocab.SATISFIED, vocab.VIOLATED):
            raise ContractError(f"override status must be satisfied/violated")
        if not self.justification:
            raise ContractError("override justification must be non-empty")
        if self.decided_at.tzinfo is None:
            raise ContractError("decided_at must be timezone-aware")


@dataclass(frozen=True)
class InferenceVerdict:
    verdict: str  # satisfied | violated | needs-review
    rationale: str
    confidence: float


# A provider is any callable (criterion, corpus) -> InferenceVerdict where
# corpus is a sequence of (path, text) pairs.
InferenceProvider = Callable[[str, Sequence[tuple[str, str]]], InferenceVerdict]

# Documented indicator patterns for the deterministic default provider.
_HEURISTIC_PATTERNS: dict[str, tuple[tuple[str, re.Pattern], ...]] = {
    "C1": tuple(
        (name, re.compile(rx, re.IGNORECASE))
        for name, rx in (
            ("scraping", r"scrap(?:e|ed|ing)"),
            ("preprocessing", r"pre[- ]?process"),
            ("reproduction", r"reproduc"),
            ("collection-pipeline", r"data (?:collection|acquisition|sourcing)|pipeline"),
            ("filtering", r"filter(?:ing|ed)?"),
        )
    ),
    "C4": tuple(
        (name, re.compile(rx, re.IGNORECASE))
        for name, rx in (
            ("opt-out", r"opt[- ]?out"),
            ("removal-request", r"request[^.\n]{0,40}removal|removal request|remove (?:your|my|their) data"),
            ("contact-channel", r"mailto:|e-?mail|contact"),
            ("takedown", r"take ?down|withdraw (?:consent|permission)"),
        )
    ),
    "C5": tuple(
        (name, re.compile(rx, re.IGNORECASE))
        for name, rx in (
            ("changelog", r"change ?log"),
            ("trace-log", r"trace log"),
            ("version-history", r"version history|release notes"),
            ("dated-records", r"dated record"),
        )
    ),
}


def heuristic_provider(
    criterion: str, corpus: Sequence[tuple[str, str]]
) -> InferenceVerdict:
    """Deterministic keyword scan standing in for a live text-inference
    provider. Confidence is the fraction of indicator patterns matched;
    the verdict is decisive only at the extremes."""
    patterns = _HEURISTIC_PATTERNS.get(criterion)
    if patterns is None:
        raise ContractError(f"no heuristic patterns for {criterion}")
    text = "\n".join(doc for _, doc in corpus)
    matched = [name for name, rx in patterns if rx.search(text)]
    confidence = len(matched) / len(patterns)
    if confidence == 0.0:
        verdict = vocab.VIOLATED
    elif confidence == 1.0:
        verdict = vocab.SATISFIED
    else:
        verdict = vocab.NEEDS_REVIEW
    if not corpus:
        rationale = "corpus empty; no indicators found"
    elif matched:
        lean = "satisfied" if confidence >= 0.5 else "violated"
        rationale = (
            f"matched {len(matched)}/{len(patterns)} indicators "
            f"({', '.join(matched)}); leaning {lean}"
        )
    else:
        rationale = f"matched 0/{len(patterns)} indicators; leaning violated"
    return InferenceVerdict(verdict=verdict, rationale=rationale, confidence=confidence)


class HttpInferenceProvider:
    """Live provider POSTing {criterion, corpus} to an endpoint that
    answers {verdict, rationale, confidence}."""

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def __call__(self, criterion, corpus) -> InferenceVerdict:
        payload = json.dumps(
            {"criterion": criterion, "corpus": [[p, t] for p, t in corpus]}
        ).encode("utf-8")
        req = urllib.request.Request(
            self.endpoint, data=payload, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                obj = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, json.JSONDecodeError, OSError) as exc:
            raise FetchError(f"inference endpoint failed: {exc}") from None
        return InferenceVerdict(
            verdict=obj["verdict"],
            rationale=obj.get("rationale", ""),
            confidence=float(obj.get("confidence", 0.0)),
        )


# --- fetching -------------------------------------------------------------

@dataclass(frozen=True)
class FetchConfig:
    timeout: float = 10.0
    retries: int = 3
    max_parallel: int = 4  # bounded fan-out against platform APIs
    token_env: str = "CRS_PLATFORM_TOKEN"


def _http_get(url: str, config: FetchConfig, accept_json: bool):
    headers = {"User-Agent": "crskit/0.1"}
    token = os.environ.get(config.token_env)
    if token:
        headers["Authorization"] = f"Bearer {token}"
    last_error: Exception | None = None
    for attempt in range(config.retries):
        try:
            req = urllib.request.Request(url, headers=headers)
            with urllib.request.urlopen(req, timeout=config.timeout) as resp:
                data = resp.read().decode("utf-8", errors="replace")
            return json.loads(data) if accept_json else data
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise NotFoundError(f"not found: {url}") from None
            last_error = exc
            if exc.code not in (429, 500, 502, 503, 504):
                break
        except (urllib.error.URLError, OSError, json.JSONDecodeError) as exc:
            last_error = exc
        time.sleep(0.5 * (2**attempt))
    raise FetchError(f"fetch failed for {url}: {last_error}")


def _snapshot_corpus(root: Path) -> list[tuple[str, str]]:
    # root-level docs only; everything under files/ is data points
    docs: list[tuple[str, str]] = []
    candidates: list[Path] = []
    for pattern in ("README*", "*.md", "*.txt", "*.rst"):
        candidates.extend(sorted(root.glob(pattern)))
    seen = set()
    for path in candidates:
        if path in seen or not path.is_file():
            continue
        seen.add(path)
        try:
            text = path.read_text(encoding="utf-8", errors="replace")[:_DOC_CAP]
        except OSError:
            continue
        docs.append((str(path.relative_to(root)), text))
    return docs


def _load_located_log(path: Path) -> tl.TraceLog:
    try:
        return tl.load_log(path)
    except CrsError:
        # located but structurally broken; validation will say why
        return tl.TraceLog(records=(), source_path=str(path))


def _fetch_snapshot(ref: DatasetRef, root: Path) -> DatasetEvidence:
    if not root.is_dir():
        raise CrsError(f"snapshot directory not found: {root}")
    card: dict = {}
    card_path = root / "card.json"
    if card_path.exists():
        try:
            card = json.loads(card_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CrsError(f"{card_path}: bad JSON: {exc.msg}") from None
        if not isinstance(card, dict):
            raise CrsError(f"{card_path}: card must be a JSON object")
    metadata = card.get("metadata", {}) if isinstance(card.get("metadata"), dict) else {}
    declared = card.get("platform")
    effective = declared if declared in PLATFORMS and declared != "local" else "custom-url"

    corpus = _snapshot_corpus(root)
    if isinstance(card.get("description"), str):
        corpus.insert(0, ("card.json#description", card["description"][:_DOC_CAP]))

    c1_docs: list[EvidenceItem] = []
    repro = metadata.get(CARD_KEY_REPRODUCIBILITY)
    if isinstance(repro, str) and repro:
        c1_docs.append(
            EvidenceItem(source=f"card.json#metadata.{CARD_KEY_REPRODUCIBILITY}", excerpt=repro)
        )
    for doc_path, text in corpus:
        if doc_path.lower().startswith("readme"):
            c1_docs.append(EvidenceItem(source=doc_path, excerpt=text))
            break

    optout = metadata.get(CARD_KEY_OPT_OUT)
    c4_item = (
        EvidenceItem(source=f"card.json#metadata.{CARD_KEY_OPT_OUT}", excerpt=optout)
        if isinstance(optout, str) and optout
        else None
    )

    log_rel = metadata.get(CARD_KEY_TRACE_LOG)
    log_path = None
    if isinstance(log_rel, str) and log_rel and (root / log_rel).exists():
        log_path = root / log_rel
    elif (root / tl.LOG_FILENAME).exists():
        log_path = root / tl.LOG_FILENAME
    located = _load_located_log(log_path) if log_path is not None else None

    raw = {
        "effective_platform": effective,
        "name": card.get("name", root.name),
        "dataset_source": card.get("dataset_source", ref.identifier),
    }
    for key, value in metadata.items():
        if isinstance(value, str):
            raw[key] = value
    return DatasetEvidence(
        c1_docs=tuple(c1_docs),
        c4_optout=c4_item,
        c5_tracelog=located,
        raw_metadata=raw,
        fetched_at=datetime.now(timezone.utc),
        corpus=tuple(corpus),
    )


def _tempfile_log(content: str) -> tl.TraceLog:
    handle = tempfile.NamedTemporaryFile(
        "w", suffix=".crs.jsonl", delete=False, encoding="utf-8"
    )
    with handle as fh:
        fh.write(content)
    return _load_located_log(Path(handle.name))


def _fetch_huggingface(ref: DatasetRef, config: FetchConfig) -> DatasetEvidence:
    info = _http_get(
        f"https://huggingface.co/api/datasets/{ref.identifier}", config, accept_json=True
    )
    card_data = info.get("cardData") or {}
    siblings = [s.get("rfilename", "") for s in info.get("siblings", [])]
    base = f"https://huggingface.co/datasets/{ref.identifier}/raw/main"
    wanted = [name for name in ("README.md", tl.LOG_FILENAME) if name in siblings]
    fetched: dict[str, str] = {}
    with ThreadPoolExecutor(max_workers=config.max_parallel) as pool:
        for name, text in zip(
            wanted,
            pool.map(
                lambda n: _http_get(f"{base}/{n}", config, accept_json=False), wanted
            ),
        ):
            fetched[name] = text
    corpus = [("README.md", fetched["README.md"][:_DOC_CAP])] if "README.md" in fetched else []
    c1_docs = []
    repro = card_data.get(CARD_KEY_REPRODUCIBILITY)
    if isinstance(repro, str) and repro:
        c1_docs.append(EvidenceItem(source=f"cardData.{CARD_KEY_REPRODUCIBILITY}", excerpt=repro))
    optout = card_data.get(CARD_KEY_OPT_OUT)
    c4_item = (
        EvidenceItem(source=f"cardData.{CARD_KEY_OPT_OUT}", excerpt=optout)
        if isinstance(optout, str) and optout
        else None
    )
    located = (
        _tempfile_log(fetched[tl.LOG_FILENAME]) if tl.LOG_FILENAME in fetched else None
    )
    raw = {
        "effective_platform": "huggingface",
        "name": ref.identifier,
        "dataset_source": f"https://huggingface.co/datasets/{ref.identifier}",
    }
    for key, value in card_data.items():
        if isinstance(value, str):
            raw[key] = value
    return DatasetEvidence(
        c1_docs=tuple(c1_docs),
        c4_optout=c4_item,
        c5_tracelog=located,
        raw_metadata=raw,
        fetched_at=datetime.now(timezone.utc),
        corpus=tuple(corpus),
    )


def _fetch_kaggle(ref: DatasetRef, config: FetchConfig) -> DatasetEvidence:
    info = _http_get(
        f"https://www.kaggle.com/api/v1/datasets/view/{ref.identifier}",
        config,
        accept_json=True,
    )
    metadata = {
        k: v for k, v in info.items() if isinstance(v, str) and k.startswith("crs.")
    }
    if isinstance(info.get("metadata"), dict):
        metadata.update(
            {k: v for k, v in info["metadata"].items() if isinstance(v, str)}
        )
    description = info.get("description") or ""
    corpus = [("description", str(description)[:_DOC_CAP])] if description else []
    c1_docs = []
    if metadata.get(CARD_KEY_REPRODUCIBILITY):
        c1_docs.append(
            EvidenceItem(
                source=CARD_KEY_REPRODUCIBILITY, excerpt=metadata[CARD_KEY_REPRODUCIBILITY]
            )
        )
    c4_item = (
        EvidenceItem(source=CARD_KEY_OPT_OUT, excerpt=metadata[CARD_KEY_OPT_OUT])
        if metadata.get(CARD_KEY_OPT_OUT)
        else None
    )
    raw = {
        "effective_platform": "kaggle",
        "name": ref.identifier,
        "dataset_source": f"https://www.kaggle.com/datasets/{ref.identifier}",
    }
    raw.update(metadata)
    return DatasetEvidence(
        c1_docs=tuple(c1_docs),
        c4_optout=c4_item,
        c5_tracelog=None,
        raw_metadata=raw,
        fetched_at=datetime.now(timezone.utc),
        corpus=tuple(corpus),
    )


def _fetch_github(ref: DatasetRef, config: FetchConfig) -> DatasetEvidence:
    api = f"https://api.github.com/repos/{ref.identifier}"
    raw_base = f"https://raw.githubusercontent.com/{ref.identifier}/HEAD"

    def try_text(url: str) -> str | None:
        try:
            return _http_get(url, config, accept_json=False)
        except (FetchError, NotFoundError):
            return None

    with ThreadPoolExecutor(max_workers=config.max_parallel) as pool:
        info_f = pool.submit(_http_get, api, config, True)
        readme_f = pool.submit(try_text, f"{raw_base}/README.md")
        log_f = pool.submit(try_text, f"{raw_base}/{tl.LOG_FILENAME}")
        info = info_f.result()
        readme = readme_f.result()
        log_text = log_f.result()

    corpus = []
    if isinstance(info.get("description"), str) and info["description"]:
        corpus.append(("repo.description", info["description"]))
    if readme:
        corpus.append(("README.md", readme[:_DOC_CAP]))
    c1_docs = tuple(
        EvidenceItem(source=path, excerpt=text) for path, text in corpus[:2]
    )
    located = _tempfile_log(log_text) if log_text else None
    raw = {
        "effective_platform": "github",
        "name": ref.identifier,
        "dataset_source": info.get("html_url", f"https://github.com/{ref.identifier}"),
    }
    return DatasetEvidence(
        c1_docs=c1_docs,
        c4_optout=None,
        c5_tracelog=located,
        raw_metadata=raw,
        fetched_at=datetime.now(timezone.utc),
        corpus=tuple(corpus),
    )


def _fetch_custom(ref: DatasetRef, config: FetchConfig) -> DatasetEvidence:
    page = _http_get(ref.identifier, config, accept_json=False)
    corpus = (("page", page[:_DOC_CAP]),)
    return DatasetEvidence(
        c1_docs=(EvidenceItem(source=ref.identifier, excerpt=page),),
        c4_optout=None,
        c5_tracelog=None,
        raw_metadata={
            "effective_platform": "custom-url",
            "name": ref.identifier,
            "dataset_source": ref.identifier,
        },
        fetched_at=datetime.now(timezone.utc),
        corpus=corpus,
    )


def fetch_evidence(ref: DatasetRef, config: FetchConfig | None = None) -> DatasetEvidence:
    """Gather dataset-level evidence for a ref.

    `local` reads a snapshot directory and is fully deterministic; the
    other platforms issue live requests with bounded parallelism and
    exponential backoff.
    """
    config = config or FetchConfig()
    if ref.platform == "local":
        return _fetch_snapshot(ref, Path(ref.identifier))
    if ref.platform == "huggingface":
        return _fetch_huggingface(ref, config)
    if ref.platform == "kaggle":
        return _fetch_kaggle(ref, config)
    if ref.platform == "github":
        return _fetch_github(ref, config)
    return _fetch_custom(ref, config)


# --- inference ------------------------------------------------------------

def infer_dataset_criteria(
    evidence: DatasetEvidence,
    ref: DatasetRef,
    provider: InferenceProvider | None = None,
) -> tuple[CriterionResult, CriterionResult, CriterionResult]:
    """Preliminary C1/C4/C5 verdicts from fetched evidence.

    Standardized platforms decide directly from card keys; standardless
    platforms go through the provider and are never auto-satisfied. C5
    additionally requires a trace log that exists and validates,
    whatever the platform says.
    """
    provider = provider or heuristic_provider
    platform = evidence.raw_metadata.get("effective_platform", ref.platform)
    standardized = platform in STANDARDIZED

    def provider_result(criterion: str) -> CriterionResult:
        verdict = provider(criterion, evidence.corpus)
        return CriterionResult(
            criterion=criterion,
            status=vocab.NEEDS_REVIEW,
            evidence=(
                f"needs review on {platform}: heuristic verdict {verdict.verdict} "
                f"(confidence {verdict.confidence:.2f}); {verdict.rationale}"
            ),
        )

    if standardized:
        if evidence.c1_docs and evidence.c1_docs[0].source.endswith(
            CARD_KEY_REPRODUCIBILITY
        ):
            c1 = CriterionResult(
                criterion="C1",
                status=vocab.SATISFIED,
                evidence=(
                    "dataset card declares reproducibility documentation: "
                    f"{evidence.c1_docs[0].excerpt}"
                ),
            )
        else:
            c1 = CriterionResult(
                criterion="C1",
                status=vocab.VIOLATED,
                evidence=(
                    "dataset card declares no sourcing/reproducibility documentation "
                    f"({CARD_KEY_REPRODUCIBILITY} absent)"
                ),
            )
        if evidence.c4_optout is None:
            c4 = CriterionResult(
                criterion="C4",
                status=vocab.VIOLATED,
                evidence=f"no opt-out mechanism declared ({CARD_KEY_OPT_OUT} absent)",
            )
        elif _CONTACT_URI_RE.match(evidence.c4_optout.excerpt.strip()):
            c4 = CriterionResult(
                criterion="C4",
                status=vocab.SATISFIED,
                evidence=f"opt-out channel declared: {evidence.c4_optout.excerpt}",
            )
        else:
            c4 = CriterionResult(
                criterion="C4",
                status=vocab.VIOLATED,
                evidence=(
                    "opt-out declared but is not a contactable URI: "
                    f"{evidence.c4_optout.excerpt}"
                ),
            )
    else:
        c1 = provider_result("C1")
        c4 = provider_result("C4")

    if evidence.c5_tracelog is None:
        c5 = CriterionResult(
            criterion="C5",
            status=vocab.VIOLATED,
            evidence=f"no trace log found ({tl.LOG_FILENAME} absent)",
        )
    else:
        outcome = tl.validate_log(evidence.c5_tracelog.source_path)
        if not outcome.valid:
            c5 = CriterionResult(
                criterion="C5",
                status=vocab.VIOLATED,
                evidence=f"trace log invalid: {outcome.reason}",
            )
        elif standardized:
            c5 = CriterionResult(
                criterion="C5",
                status=vocab.SATISFIED,
                evidence=(
                    f"trace log valid ({len(evidence.c5_tracelog.records)} dated records "
                    f"at {Path(evidence.c5_tracelog.source_path).name})"
                ),
            )
        else:
            c5 = CriterionResult(
                criterion="C5",
                status=vocab.NEEDS_REVIEW,
                evidence=(
                    f"needs review on {platform}: trace log validates "
                    f"({len(evidence.c5_tracelog.records)} records) but the platform "
                    "has no standardized designation for it"
                ),
            )
    return c1, c4, c5


def apply_overrides(
    results: Sequence[CriterionResult], overrides: Sequence[ReviewOverride]
) -> list[CriterionResult]:
    """Substitute human review decisions into dataset-level results.

    The latest decision per criterion wins; every applied decision leaves
    a note in the evidence text. Idempotent: re-applying the same list
    changes nothing.
    """
    for override in overrides:
        if override.criterion not in vocab.DATASET_LEVEL:
            raise ContractError(f"{override.criterion} cannot be overridden")
    by_criterion = {r.criterion: r for r in results}
    for override in sorted(overrides, key=lambda o: o.decided_at):
        if override.criterion not in by_criterion:
            raise ContractError(
                f"override targets {override.criterion}, absent from results"
            )
        current = by_criterion[override.criterion]
        note = (
            f"[override: {override.status} by {override.reviewer} at "
            f"{canon.format_utc(override.decided_at)}: {override.justification}]"
        )
        evidence_text = current.evidence
        if note not in evidence_text:
            evidence_text = f"{evidence_text} {note}" if evidence_text else note
        by_criterion[override.criterion] = replace(
            current, status=override.status, evidence=evidence_text
        )
    return [by_criterion[r.criterion] for r in results]


def load_overrides(root_or_path: str | Path) -> tuple[ReviewOverride, ...]:
    path = Path(root_or_path)
    if path.is_dir():
        path = path / OVERRIDES_FILENAME
    if not path.exists():
        return ()
    try:
        items = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CrsError(f"{path}: bad JSON: {exc.msg}") from None
    if not isinstance(items, list):
        raise CrsError(f"{path}: override file must hold a JSON array")
    overrides = []
    for i, obj in enumerate(items):
        try:
            overrides.append(
                ReviewOverride(
                    criterion=obj["criterion"],
                    status=obj["status"],
                    justification=obj["justification"],
                    reviewer=obj["reviewer"],
                    decided_at=canon.parse_utc(obj["decided_at"]),
                )
            )
        except (KeyError, TypeError, CanonError, ContractError) as exc:
            raise CrsError(f"{path}[{i}]: bad override record: {exc}") from None
    return tuple(overrides)


def append_override(root_or_path: str | Path, override: ReviewOverride) -> Path:
    path = Path(root_or_path)
    if path.is_dir():
        path = path / OVERRIDES_FILENAME
    existing = load_overrides(path)
    records = [
        {
            "criterion": o.criterion,
            "status": o.status,
            "justification": o.justification,
            "reviewer": o.reviewer,
            "decided_at": canon.format_utc(o.decided_at),
        }
        for o in (*existing, override)
    ]
    path.write_text(json.dumps(records, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
