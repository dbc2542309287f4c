"""Command-line front end.

Exit codes: 0 success (for check-point: compliant), 1 a negative verdict
(check-point non-compliant, embed refused), 2 usage or evaluation error.
`rate` exits 0 for every letter — the grade is data, not a failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, evidence as ev, fixtures as fx
from .badge import render_badge
from .canon import validate_retention
from .criteria import assess_datapoint, load_policy
from .errors import CanonError, CrsError, RefusalError
from .manifest import (
    AssetRef,
    DatasetEntry,
    extract_manifest,
    load_signing_key,
    embed_dataset_entry,
    write_sidecar,
)
from .rating import build_report, rate_snapshot, render_text


def _load_key_file(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8").strip()
        return load_signing_key(bytes.fromhex(text))
    except OSError as exc:
        raise CrsError(f"cannot read key file {path}: {exc}") from None
    except ValueError:
        raise CrsError(f"key file {path} must hold 64 hex chars") from None


def _parse_pending(value: str) -> DatasetEntry:
    if "," not in value:
        raise CrsError("--pending-entry takes SOURCE,RETENTION")
    source, retention = value.rsplit(",", 1)
    try:
        validate_retention(retention.strip())
    except CanonError as exc:
        raise CrsError(str(exc)) from None
    return DatasetEntry(
        dataset_source=source.strip(),
        retention_period=retention.strip(),
        added_at=datetime.now(timezone.utc),
    )


def cmd_check_point(args) -> int:
    policy = load_policy(args.policy)
    pending = _parse_pending(args.pending_entry) if args.pending_entry else None
    asset = AssetRef.from_path(args.asset)
    outcome = assess_datapoint(asset, policy, pending)
    print(
        json.dumps(
            {
                "asset_id": outcome.asset_id,
                "compliant": outcome.compliant,
                "violated": list(outcome.violated),
                "reasons": list(outcome.reasons),
            },
            sort_keys=True,
        )
    )
    return 0 if outcome.compliant else 1


def cmd_embed(args) -> int:
    try:
        validate_retention(args.retention)
    except CanonError as exc:
        raise CrsError(str(exc)) from None
    key = _load_key_file(args.key)
    asset = AssetRef.from_path(args.asset)
    try:
        manifest = extract_manifest(asset)
    except CrsError:
        manifest = None
    if manifest is None:
        print("refusing to embed into unverifiable provenance (no parseable manifest)",
              file=sys.stderr)
        return 1
    entry = DatasetEntry(
        dataset_source=args.source,
        retention_period=args.retention,
        added_at=datetime.now(timezone.utc),
    )
    try:
        grown = embed_dataset_entry(asset, manifest, entry, key)
    except RefusalError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    write_sidecar(args.asset, grown)
    print(f"embedded dataset entry into {args.asset}; sidecar re-signed")
    return 0


def cmd_rate(args) -> int:
    ref = ev.parse_ref(args.dataset)
    policy = load_policy(args.policy) if args.policy else None
    if ref.platform == "local":
        outcome = rate_snapshot(ref.identifier, policy, jobs=args.jobs)
    else:
        if not args.files_dir:
            raise CrsError(
                "live platform refs need --files-dir pointing at the local data points"
            )
        outcome = rate_snapshot(
            args.files_dir, policy, jobs=args.jobs, ref=ref, files_dir=args.files_dir
        )
    report = build_report(outcome, __version__)
    if args.out:
        Path(args.out).write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render_text(outcome), end="")
    return 0


def cmd_badge(args) -> int:
    if args.score:
        letter = args.score
    else:
        try:
            report = json.loads(Path(args.report).read_text(encoding="utf-8"))
            letter = report["score"]["letter"]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CrsError(f"cannot read score from report {args.report}: {exc}") from None
    svg = render_badge(letter)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}: score {letter}")
    return 0


def cmd_gen_fixtures(args) -> int:
    if args.preset:
        root = fx.build_preset(args.preset, args.out)
    else:
        try:
            spec_obj = json.loads(args.profile)
        except json.JSONDecodeError as exc:
            raise CrsError(f"--profile must be JSON: {exc.msg}") from None
        try:
            profile = fx.FixtureProfile(
                satisfied=frozenset(spec_obj.get("satisfied", [])),
                point_count=int(spec_obj["point_count"]),
                seed=int(spec_obj["seed"]),
                platform_layout=spec_obj["platform_layout"],
                media_kind=spec_obj.get("media_kind", "image"),
                flagged_inconclusive_count=int(
                    spec_obj.get("flagged_inconclusive_count", 0)
                ),
                name=spec_obj.get("name"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CrsError(f"bad profile: {exc}") from None
        root = fx.build_fixture(profile, args.out)
    print(f"fixture written to {root}")
    return 0


def cmd_review(args) -> int:
    if "=" not in args.set:
        raise CrsError("--set takes CRITERION=STATUS, e.g. C4=satisfied")
    criterion, _, status = args.set.partition("=")
    if not args.justification.strip():
        raise CrsError("--justification must be non-empty")
    override = ev.ReviewOverride(
        criterion=criterion.strip(),
        status=status.strip(),
        justification=args.justification,
        reviewer=args.reviewer,
        decided_at=datetime.now(timezone.utc),
    )
    path = ev.append_override(args.dataset, override)
    print(f"recorded override {criterion}={status} in {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crskit",
        description="Rate AI-training datasets A-G against six provenance criteria.",
    )
    parser.add_argument("--version", action="version", version=f"crskit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-point", help="admission check for one data point")
    p.add_argument("asset")
    p.add_argument("--policy", required=True, help="dataset policy JSON file")
    p.add_argument(
        "--pending-entry",
        metavar="SOURCE,RETENTION",
        help="dataset entry the author will embed on admission",
    )
    p.set_defaults(func=cmd_check_point)

    p = sub.add_parser("embed", help="embed dataset source + retention, re-sign")
    p.add_argument("asset")
    p.add_argument("--source", required=True, help="dataset source URI")
    p.add_argument("--retention", required=True, help="ISO-8601 duration or expiry date")
    p.add_argument("--key", required=True, help="file with 32-byte hex signing seed")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("rate", help="rate a dataset snapshot or platform ref")
    p.add_argument("dataset", help="snapshot dir, or hf:/kaggle:/github:/url: ref")
    p.add_argument("--policy", help="dataset policy JSON (default: snapshot's policy.crs.json)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="also write the JSON report here")
    p.add_argument("--jobs", type=int, default=None, help="point-check workers")
    p.add_argument("--files-dir", help="local data points (required for live refs)")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("badge", help="emit an SVG badge for a score")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--score", help="letter A-G")
    group.add_argument("--report", help="report JSON produced by rate")
    p.add_argument("--out", required=True, help="SVG output path")
    p.set_defaults(func=cmd_badge)

    p = sub.add_parser("gen-fixtures", help="generate a deterministic fixture snapshot")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", help=f"one of {', '.join(sorted(fx.PRESETS))}")
    group.add_argument("--profile", help="profile JSON literal")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_fixtures)

    p = sub.add_parser("review", help="record a human override for C1/C4/C5")
    p.add_argument("dataset", help="dataset root (where OVERRIDES.crs.json lives)")
    p.add_argument("--set", required=True, metavar="CRITERION=STATUS")
    p.add_argument("--justification", required=True)
    p.add_argument("--reviewer", required=True)
    p.set_defaults(func=cmd_review)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CrsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
