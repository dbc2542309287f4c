"""Closed vocabularies shared across modules.

These sets are the wire format: parsers reject anything outside them.
"""

from __future__ import annotations

# License identifiers (SPDX-style). CUSTOM carries an identifier suffix.
LICENSE_CC0 = "CC0-1.0"
LICENSE_CC_BY = "CC-BY-4.0"
LICENSE_CC_BY_SA = "CC-BY-SA-4.0"
LICENSE_CC_BY_NC = "CC-BY-NC-4.0"
LICENSE_CC_BY_ND = "CC-BY-ND-4.0"
LICENSE_ARR = "ALL-RIGHTS-RESERVED"
LICENSE_UNSPECIFIED = "UNSPECIFIED"
CUSTOM_PREFIX = "CUSTOM:"

FIXED_LICENSES = frozenset(
    {
        LICENSE_CC0,
        LICENSE_CC_BY,
        LICENSE_CC_BY_SA,
        LICENSE_CC_BY_NC,
        LICENSE_CC_BY_ND,
        LICENSE_ARR,
        LICENSE_UNSPECIFIED,
    }
)


def is_custom_license(value: str) -> bool:
    return value.startswith(CUSTOM_PREFIX)


def valid_license(value: str) -> bool:
    if value in FIXED_LICENSES:
        return True
    return is_custom_license(value) and len(value) > len(CUSTOM_PREFIX)


# AI-training consent states
CONSENT_GRANTED = "granted"
CONSENT_DENIED = "denied"
CONSENT_UNSPECIFIED = "unspecified"
CONSENT_VALUES = frozenset({CONSENT_GRANTED, CONSENT_DENIED, CONSENT_UNSPECIFIED})

# Use tags (closed; unknown tags rejected at parse time)
USE_AI_TRAINING = "ai-training"
USE_REDISTRIBUTION = "redistribution"
USE_COMMERCIAL = "commercial"
USE_DERIVATIVES = "derivative-works"
USE_RESEARCH_ONLY = "research-only"
USE_TAGS = frozenset(
    {
        USE_AI_TRAINING,
        USE_REDISTRIBUTION,
        USE_COMMERCIAL,
        USE_DERIVATIVES,
        USE_RESEARCH_ONLY,
    }
)

# Criteria. C1/C4/C5 are decided from the distribution platform, C2/C3/C6
# per data point.
CRITERIA = ("C1", "C2", "C3", "C4", "C5", "C6")
DATASET_LEVEL = frozenset({"C1", "C4", "C5"})
POINT_LEVEL = frozenset({"C2", "C3", "C6"})


def criterion_level(criterion: str) -> str:
    if criterion in DATASET_LEVEL:
        return "dataset-level"
    if criterion in POINT_LEVEL:
        return "point-level"
    raise ValueError(f"unknown criterion: {criterion!r}")


# Criterion result statuses
SATISFIED = "satisfied"
VIOLATED = "violated"
NEEDS_REVIEW = "needs-review"

# Compatibility verdicts
COMPATIBLE = "compatible"
INCOMPATIBLE = "incompatible"
INCONCLUSIVE = "inconclusive"

# Manifest validation outcomes
VALID = "valid"
INVALID = "invalid"
MISSING = "missing"

# Provenance-chain actions
ACTIONS = frozenset({"created", "edited", "transcoded", "annotated", "other"})

# Trace-log change kinds
CHANGE_KINDS = frozenset(
    {
        "point-added",
        "point-removed",
        "data-modified",
        "annotation-modified",
        "version-released",
    }
)

# Media kinds recognized from magic bytes
MEDIA_KINDS = frozenset({"image", "video", "audio", "other"})

LETTERS = "ABCDEFG"
