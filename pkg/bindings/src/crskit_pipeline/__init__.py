"""Data-pipeline bindings for the crskit compliance toolkit.

Three functions that drop into dataset loaders: `check_point` for
single-point admission, `rate` for a whole snapshot, and
`compliant_only` to filter an iterable of paths down to the admissible
ones. Everything shells out to the `crskit` CLI and parses its JSON, so
no criterion logic lives on this side; results are plain records that
mirror the CLI output field for field.

Calls are synchronous and blocking (loader frameworks parallelize at the
worker level) and safe from multiple threads: each call is an
independent subprocess. Set CRSKIT_CLI to point at a specific CLI
invocation; the default finds `crskit` on PATH or falls back to
`python -m crskit.cli`.
"""

from __future__ import annotations

import json
import os
import shutil
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__version__ = "0.1.0"

__all__ = [
    "CliError",
    "DatasetRating",
    "PointAssessment",
    "check_point",
    "cli_version",
    "compliant_only",
    "rate",
]


class CliError(RuntimeError):
    """The CLI reported an error (exit code 2); carries its message."""


def _cli_argv() -> list[str]:
    override = os.environ.get("CRSKIT_CLI")
    if override:
        return override.split()
    found = shutil.which("crskit")
    if found:
        return [found]
    return [sys.executable, "-m", "crskit.cli"]


def _run(args: Sequence[str]) -> subprocess.CompletedProcess:
    proc = subprocess.run(
        [*_cli_argv(), *args], capture_output=True, text=True
    )
    if proc.returncode == 2:
        raise CliError(proc.stderr.strip() or proc.stdout.strip())
    return proc


@dataclass(frozen=True)
class PointAssessment:
    asset_id: str
    compliant: bool
    violated: tuple[str, ...]
    reasons: tuple[str, ...]


@dataclass(frozen=True)
class DatasetRating:
    letter: str
    satisfied_count: int
    per_criterion: tuple[dict, ...]
    report: dict


def cli_version() -> str:
    proc = _run(["--version"])
    return proc.stdout.strip()


def check_point(
    path: str | Path,
    policy_path: str | Path,
    pending_source: str | None = None,
    retention: str | None = None,
) -> PointAssessment:
    """Admission check for one data point.

    `pending_source` and `retention` declare the dataset entry the author
    will embed on admission; give both or neither.
    """
    if (pending_source is None) != (retention is None):
        raise ValueError("pending_source and retention go together")
    args = ["check-point", str(path), "--policy", str(policy_path)]
    if pending_source is not None:
        args += ["--pending-entry", f"{pending_source},{retention}"]
    proc = _run(args)
    payload = json.loads(proc.stdout)
    return PointAssessment(
        asset_id=payload["asset_id"],
        compliant=payload["compliant"],
        violated=tuple(payload["violated"]),
        reasons=tuple(payload["reasons"]),
    )


def rate(snapshot_path: str | Path, policy_path: str | Path | None = None) -> DatasetRating:
    """Rate a snapshot directory; returns the full report as a record."""
    args = ["rate", str(snapshot_path), "--format", "json"]
    if policy_path is not None:
        args += ["--policy", str(policy_path)]
    proc = _run(args)
    report = json.loads(proc.stdout)
    return DatasetRating(
        letter=report["score"]["letter"],
        satisfied_count=report["score"]["satisfied_count"],
        per_criterion=tuple(report["per_criterion"]),
        report=report,
    )


def compliant_only(
    paths: Iterable[str | Path],
    policy_path: str | Path,
    pending_source: str | None = None,
    retention: str | None = None,
) -> Iterator[str | Path]:
    """Lazily yield only the paths whose admission check passes.

    Order is preserved; paths are checked one by one as the iterator is
    consumed, so it composes with streaming loaders.
    """
    for path in paths:
        if check_point(path, policy_path, pending_source, retention).compliant:
            yield path
