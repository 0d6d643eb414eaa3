"""Domain types and the classification/scoping/severity logic shared by every module."""

from cfe_registry.domain.types import (
    Actor,
    Advisory,
    CfeRecord,
    EmbargoWindow,
    EvaluationRecord,
    EvidenceSet,
    Exclusion,
    GovernanceInfo,
    ImpactClaim,
    ModelCard,
    ModelRef,
    ReferenceEntry,
    Report,
    Severity,
    TaxonomyDescriptor,
    TaxonomyRef,
    UseStatement,
)
from cfe_registry.domain.rules import (
    ScopeVerdict,
    Track,
    check_scope,
    classify_report,
    severity_bracket,
    validate_taxonomy,
)

__all__ = [
    "Actor",
    "Advisory",
    "CfeRecord",
    "EmbargoWindow",
    "EvaluationRecord",
    "EvidenceSet",
    "Exclusion",
    "GovernanceInfo",
    "ImpactClaim",
    "ModelCard",
    "ModelRef",
    "ReferenceEntry",
    "Report",
    "ScopeVerdict",
    "Severity",
    "TaxonomyDescriptor",
    "TaxonomyRef",
    "Track",
    "UseStatement",
    "check_scope",
    "classify_report",
    "severity_bracket",
    "validate_taxonomy",
]
