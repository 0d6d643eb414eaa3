"""Report classification, scope checking, severity bracketing, taxonomy conformance.

All pure, total functions over valid inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from cfe_registry.domain import vocab
from cfe_registry.domain.types import ModelCard, Report, Severity, TaxonomyDescriptor, bracket_for
from cfe_registry.errors import EmptyHarmSet, UnknownModel
from cfe_registry.formats.findings import Finding, FindingCode


class Track(str, Enum):
    SECURITY = "security"
    SAFETY = "safety"
    AMBIGUOUS = "ambiguous"


def classify_report(report: Report, card: ModelCard) -> Track:
    """Route a report by its impact claim.

    CIA-only claims are security; harm-only claims are safety; a claim with
    both is ambiguous and goes to vendor triage for manual assignment. The
    impact-claim invariant rules out the neither case.
    """
    if report.model_ref.name != card.model_name or report.model_ref.version != card.model_version:
        raise UnknownModel(
            f"report references {report.model_ref.name}@{report.model_ref.version}, "
            f"card is {card.model_name}@{card.model_version}"
        )
    cia = report.impact.any_cia()
    harms = bool(report.impact.harm_categories)
    if cia and not harms:
        return Track.SECURITY
    if harms and not cia:
        return Track.SAFETY
    return Track.AMBIGUOUS


@dataclass(frozen=True)
class ScopeVerdict:
    in_scope: bool
    matched_exclusion: Optional[str] = None

    def to_doc(self) -> dict:
        return {"in_scope": self.in_scope, "matched_exclusion": self.matched_exclusion}


IN_SCOPE = ScopeVerdict(in_scope=True)


def check_scope(report: Report, card: ModelCard) -> ScopeVerdict:
    """Match the report's claimed category tags against the card's exclusions.

    A declared exclusion match wins over the undeclared-use rule so the
    verdict names the specific exclusion when both apply.
    """
    excluded = card.excluded_categories()
    for tag in sorted(report.impact.categories):
        if tag in excluded:
            return ScopeVerdict(in_scope=False, matched_exclusion=tag)
    if not report.impact.within_declared_use and not report.impact.any_cia():
        return ScopeVerdict(in_scope=False, matched_exclusion=vocab.UNDECLARED_USE)
    return IN_SCOPE


def severity_bracket(harms: Iterable[str], breadth: str) -> Severity:
    harm_set = frozenset(harms)
    if not harm_set:
        raise EmptyHarmSet("severity requires at least one harm category")
    return Severity(
        harm_categories=harm_set,
        breadth=breadth,
        bracket=bracket_for(harm_set, breadth),
    )


def validate_taxonomy(
    descriptor: TaxonomyDescriptor,
    allowlist: frozenset[str] = vocab.DEFAULT_LICENSE_ALLOWLIST,
) -> list[Finding]:
    """One finding per violated conformance parameter; empty iff conformant."""
    findings = []
    if descriptor.license_id not in allowlist:
        findings.append(
            Finding(
                code=FindingCode.NON_PERMISSIVE_LICENSE,
                path="/license_id",
                message=f"license {descriptor.license_id!r} is not in the permissive allowlist",
            )
        )
    if not descriptor.extensible:
        findings.append(
            Finding(
                code=FindingCode.NOT_EXTENSIBLE,
                path="/extensible",
                message="taxonomy must be extensible",
            )
        )
    if descriptor.publishes_raw_responses:
        findings.append(
            Finding(
                code=FindingCode.RAW_RESPONSES_PUBLISHED,
                path="/publishes_raw_responses",
                message="taxonomy publishes raw model responses",
            )
        )
    return findings


def is_conformant(
    descriptor: TaxonomyDescriptor,
    allowlist: frozenset[str] = vocab.DEFAULT_LICENSE_ALLOWLIST,
) -> bool:
    return not validate_taxonomy(descriptor, allowlist)
