"""crskit: compliance rating for AI-training datasets.

Rates datasets A-G against six provenance criteria using signed per-file
manifests, and admits/rejects single data points during dataset
construction.
"""

from .criteria import (
    Compatibility,
    CriterionResult,
    CrsScore,
    DataPointAssessment,
    DatasetAssessment,
    DatasetPolicy,
    FlagEntry,
    FlagFile,
    assess_datapoint,
    assess_dataset_points,
    check_license_compat,
    compute_score,
    load_flags,
    load_policy,
)
from .errors import CrsError
from .manifest import (
    ActionRecord,
    AssetRef,
    ContentHash,
    DatasetEntry,
    ProvenanceManifest,
    SignatureBlock,
    compute_content_hash,
    embed_dataset_entry,
    extract_manifest,
    parse_manifest,
    serialize_manifest,
    sign_manifest,
    validate_manifest,
)

__version__ = "0.1.0"

__all__ = [
    "ActionRecord",
    "AssetRef",
    "Compatibility",
    "ContentHash",
    "CriterionResult",
    "CrsError",
    "CrsScore",
    "DataPointAssessment",
    "DatasetAssessment",
    "DatasetEntry",
    "DatasetPolicy",
    "FlagEntry",
    "FlagFile",
    "ProvenanceManifest",
    "SignatureBlock",
    "__version__",
    "assess_datapoint",
    "assess_dataset_points",
    "check_license_compat",
    "compute_content_hash",
    "compute_score",
    "embed_dataset_entry",
    "extract_manifest",
    "load_flags",
    "load_policy",
    "parse_manifest",
    "serialize_manifest",
    "sign_manifest",
    "validate_manifest",
]
