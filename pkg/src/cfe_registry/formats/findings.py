"""The published finding catalogue.

Every validation or lint result carries a code from this catalogue; codes are
append-only and versioned so downstream tooling can rely on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

CATALOGUE_VERSION = "1"

ERROR = "error"
WARNING = "warning"


class FindingCode(str, Enum):
    # structural schema violations
    MISSING_REQUIRED_FIELD = "MISSING_REQUIRED_FIELD"
    INVALID_FIELD_TYPE = "INVALID_FIELD_TYPE"
    INVALID_FIELD_VALUE = "INVALID_FIELD_VALUE"
    EMPTY_INTENT_AND_USE = "EMPTY_INTENT_AND_USE"
    INCOMPLETE_USE_STATEMENT = "INCOMPLETE_USE_STATEMENT"
    EXCLUSIONS_NOT_DECLARED = "EXCLUSIONS_NOT_DECLARED"
    NO_GOVERNANCE_CHANNEL = "NO_GOVERNANCE_CHANNEL"
    VERSION_NOT_IN_LINEAGE = "VERSION_NOT_IN_LINEAGE"
    UNKNOWN_REFERENCE_KIND = "UNKNOWN_REFERENCE_KIND"
    UNKNOWN_HARM_CATEGORY = "UNKNOWN_HARM_CATEGORY"
    UNKNOWN_BREADTH = "UNKNOWN_BREADTH"
    UNKNOWN_BRACKET = "UNKNOWN_BRACKET"
    UNKNOWN_TRACK = "UNKNOWN_TRACK"
    UNKNOWN_CFE_STATUS = "UNKNOWN_CFE_STATUS"
    INVALID_IDENTIFIER = "INVALID_IDENTIFIER"
    K_EXCEEDS_N = "K_EXCEEDS_N"
    # HEX statement schema
    UNKNOWN_STATUS = "UNKNOWN_STATUS"
    UNKNOWN_JUSTIFICATION = "UNKNOWN_JUSTIFICATION"
    JUSTIFICATION_REQUIRED = "JUSTIFICATION_REQUIRED"
    JUSTIFICATION_NOT_ALLOWED = "JUSTIFICATION_NOT_ALLOWED"
    IMPACT_STATEMENT_REQUIRED = "IMPACT_STATEMENT_REQUIRED"
    IMPACT_STATEMENT_NOT_ALLOWED = "IMPACT_STATEMENT_NOT_ALLOWED"
    UNKNOWN_LIFECYCLE_STAGE = "UNKNOWN_LIFECYCLE_STAGE"
    # model-card lint (beyond schema validity)
    EVAL_WITHOUT_OUTPUTS = "EVAL_WITHOUT_OUTPUTS"
    NO_SAFETY_CHANNEL = "NO_SAFETY_CHANNEL"
    NO_REFERENCES = "NO_REFERENCES"
    NONCONFORMANT_TAXONOMY = "NONCONFORMANT_TAXONOMY"
    # taxonomy descriptor conformance
    NON_PERMISSIVE_LICENSE = "NON_PERMISSIVE_LICENSE"
    NOT_EXTENSIBLE = "NOT_EXTENSIBLE"
    RAW_RESPONSES_PUBLISHED = "RAW_RESPONSES_PUBLISHED"


_CATALOGUE: dict[FindingCode, tuple[str, str]] = {
    FindingCode.MISSING_REQUIRED_FIELD: (ERROR, "A required field or section is absent."),
    FindingCode.INVALID_FIELD_TYPE: (ERROR, "A field holds a value of the wrong type."),
    FindingCode.INVALID_FIELD_VALUE: (ERROR, "A field holds a structurally invalid value."),
    FindingCode.EMPTY_INTENT_AND_USE: (ERROR, "intent_and_use must contain at least one use statement."),
    FindingCode.INCOMPLETE_USE_STATEMENT: (
        ERROR,
        "A use statement is missing one of its who/what/how clauses.",
    ),
    FindingCode.EXCLUSIONS_NOT_DECLARED: (
        ERROR,
        "scope.exclusions_declared must be true; an unstated scope is not a valid card.",
    ),
    FindingCode.NO_GOVERNANCE_CHANNEL: (
        ERROR,
        "governance must name a security or safety report channel.",
    ),
    FindingCode.VERSION_NOT_IN_LINEAGE: (
        ERROR,
        "model.version must be the last element of model.lineage.",
    ),
    FindingCode.UNKNOWN_REFERENCE_KIND: (
        ERROR,
        "reference kind must be one of aibom, safety_audit, security_audit, other.",
    ),
    FindingCode.UNKNOWN_HARM_CATEGORY: (ERROR, "Harm category outside the closed harm set."),
    FindingCode.UNKNOWN_BREADTH: (ERROR, "Breadth must be individual, group, or societal."),
    FindingCode.UNKNOWN_BRACKET: (ERROR, "Severity bracket outside low/medium/high/critical."),
    FindingCode.UNKNOWN_TRACK: (ERROR, "Track must be security, safety, or unknown."),
    FindingCode.UNKNOWN_CFE_STATUS: (
        ERROR,
        "CFE status must be reserved, published, under_investigation, or fixed.",
    ),
    FindingCode.INVALID_IDENTIFIER: (ERROR, "Embedded identifier does not match its grammar."),
    FindingCode.K_EXCEEDS_N: (ERROR, "Evidence violation count k exceeds trial count n."),
    FindingCode.UNKNOWN_STATUS: (
        ERROR,
        "HEX status must be affected, unaffected, fixed, or under_investigation.",
    ),
    FindingCode.UNKNOWN_JUSTIFICATION: (ERROR, "HEX justification outside the closed token set."),
    FindingCode.JUSTIFICATION_REQUIRED: (
        ERROR,
        "HEX status unaffected requires a justification token.",
    ),
    FindingCode.JUSTIFICATION_NOT_ALLOWED: (
        ERROR,
        "Only HEX status unaffected may carry a justification.",
    ),
    FindingCode.IMPACT_STATEMENT_REQUIRED: (
        ERROR,
        "HEX status affected requires an impact statement.",
    ),
    FindingCode.IMPACT_STATEMENT_NOT_ALLOWED: (
        ERROR,
        "Only HEX status affected may carry an impact statement.",
    ),
    FindingCode.UNKNOWN_LIFECYCLE_STAGE: (
        ERROR,
        "Subcomponent lifecycle stage must be development, training, fine_tuning, or inference.",
    ),
    FindingCode.EVAL_WITHOUT_OUTPUTS: (
        ERROR,
        "An evaluation record names a framework but reports no outputs.",
    ),
    FindingCode.NO_SAFETY_CHANNEL: (
        WARNING,
        "governance declares no safety report channel; safety reports have nowhere to go.",
    ),
    FindingCode.NO_REFERENCES: (
        WARNING,
        "Card carries no references (AIBOM, safety audit, or security audit).",
    ),
    FindingCode.NONCONFORMANT_TAXONOMY: (
        ERROR,
        "The referenced taxonomy descriptor fails one or more conformance parameters.",
    ),
    FindingCode.NON_PERMISSIVE_LICENSE: (
        ERROR,
        "Taxonomy license is not in the configured permissive-license allowlist.",
    ),
    FindingCode.NOT_EXTENSIBLE: (ERROR, "Taxonomy is not extensible."),
    FindingCode.RAW_RESPONSES_PUBLISHED: (
        ERROR,
        "Taxonomy publishes raw model responses, which can itself enable harm.",
    ),
}


@dataclass(frozen=True)
class Finding:
    code: FindingCode
    path: str
    message: str

    @property
    def severity(self) -> str:
        return _CATALOGUE[self.code][0]

    def to_doc(self) -> dict:
        return {
            "code": self.code.value,
            "severity": self.severity,
            "path": self.path,
            "message": self.message,
        }


def finding_catalogue() -> dict:
    """Machine-readable catalogue document for downstream tooling."""
    return {
        "catalogue_version": CATALOGUE_VERSION,
        "findings": [
            {"code": code.value, "severity": sev, "description": desc}
            for code, (sev, desc) in sorted(_CATALOGUE.items(), key=lambda kv: kv[0].value)
        ],
    }


def has_errors(findings) -> bool:
    return any(f.severity == ERROR for f in findings)
