"""Immutable value objects for cards, reports, evidence, and published records.

Constructors enforce type invariants with a single ValueError; the document
parsers in cfe_registry.formats do collect-all validation first and only then
construct, so API callers get complete finding lists while in-process code
gets fail-fast objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from cfe_registry.domain import vocab
from cfe_registry.formats.identifiers import CfeId, format_cfe_id
from cfe_registry.timeutil import parse_ts

_BRACKET_RANK = {name: rank for rank, name in enumerate(vocab.BRACKETS)}

# Severity mapping table: bracket = max(row(harm), col(breadth)).
HARM_ROW = {
    "loss_of_life": "critical",
    "physical_or_mental_injury": "high",
    "social_disruption": "medium",
    "environmental_harm": "medium",
    "economic_disruption": "low",
    "bias_in_decision_making": "low",
    "harmful_content": "low",
}
BREADTH_COL = {"individual": "low", "group": "medium", "societal": "high"}


def bracket_for(harm_categories: frozenset[str], breadth: str) -> str:
    ranks = [_BRACKET_RANK[HARM_ROW[h]] for h in harm_categories]
    ranks.append(_BRACKET_RANK[BREADTH_COL[breadth]])
    return vocab.BRACKETS[max(ranks)]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


@dataclass(frozen=True)
class UseStatement:
    who: str
    what: str
    how: str

    def __post_init__(self):
        for clause in ("who", "what", "how"):
            _require(getattr(self, clause).strip() != "", f"use statement clause {clause!r} is empty")

    def to_doc(self) -> dict:
        return {"who": self.who, "what": self.what, "how": self.how}


@dataclass(frozen=True)
class Exclusion:
    category: str
    note: str = ""

    def __post_init__(self):
        _require(self.category.strip() != "", "exclusion category is empty")

    def to_doc(self) -> dict:
        return {"category": self.category, "note": self.note}


@dataclass(frozen=True)
class EvaluationRecord:
    framework_id: str = ""
    framework_version: str = ""
    dataset_ref: str = ""
    outputs: dict[str, float] = field(default_factory=dict)
    reproducible: bool = False

    def to_doc(self) -> dict:
        return {
            "framework_id": self.framework_id,
            "framework_version": self.framework_version,
            "dataset_ref": self.dataset_ref,
            "outputs": dict(self.outputs),
            "reproducible": self.reproducible,
        }


@dataclass(frozen=True)
class GovernanceInfo:
    security_report_channel: str = ""
    safety_report_channel: str = ""
    methodology: str = ""
    contact: str = ""

    def has_channel(self) -> bool:
        return bool(self.security_report_channel or self.safety_report_channel)

    def to_doc(self) -> dict:
        return {
            "security_report_channel": self.security_report_channel,
            "safety_report_channel": self.safety_report_channel,
            "methodology": self.methodology,
            "contact": self.contact,
        }


@dataclass(frozen=True)
class ReferenceEntry:
    kind: str
    uri: str
    digest: str = ""

    def __post_init__(self):
        _require(self.kind in vocab.REFERENCE_KINDS, f"unknown reference kind {self.kind!r}")
        _require(self.uri.strip() != "", "reference uri is empty")

    def to_doc(self) -> dict:
        return {"kind": self.kind, "uri": self.uri, "digest": self.digest}


@dataclass(frozen=True)
class TaxonomyRef:
    id: str
    version: str

    def to_doc(self) -> dict:
        return {"id": self.id, "version": self.version}


@dataclass(frozen=True)
class ModelCard:
    schema_version: str
    model_name: str
    model_version: str
    lineage: tuple[str, ...]
    intent_and_use: tuple[UseStatement, ...]
    exclusions_declared: bool
    scope_exclusions: tuple[Exclusion, ...]
    evaluation_data: tuple[EvaluationRecord, ...]
    governance: GovernanceInfo
    taxonomy_ref: TaxonomyRef
    references: Optional[tuple[ReferenceEntry, ...]] = None

    def __post_init__(self):
        _require(self.model_name.strip() != "", "model_name is empty")
        _require(self.model_version.strip() != "", "model_version is empty")
        _require(len(self.intent_and_use) > 0, "intent_and_use is empty")
        _require(self.exclusions_declared, "exclusions_declared must be true in a valid card")
        _require(self.governance.has_channel(), "governance declares no report channel")
        _require(
            len(self.lineage) > 0 and self.lineage[-1] == self.model_version,
            "model_version must be the last element of lineage",
        )

    def excluded_categories(self) -> frozenset[str]:
        return frozenset(e.category for e in self.scope_exclusions)

    def to_doc(self) -> dict:
        doc = {
            "schema_version": self.schema_version,
            "model": {
                "name": self.model_name,
                "version": self.model_version,
                "lineage": list(self.lineage),
            },
            "intent_and_use": [u.to_doc() for u in self.intent_and_use],
            "scope": {
                "exclusions_declared": self.exclusions_declared,
                "exclusions": [e.to_doc() for e in self.scope_exclusions],
            },
            "evaluation_data": [e.to_doc() for e in self.evaluation_data],
            "governance": self.governance.to_doc(),
            "taxonomy_ref": self.taxonomy_ref.to_doc(),
        }
        if self.references is not None:
            doc["references"] = [r.to_doc() for r in self.references]
        return doc


@dataclass(frozen=True)
class TaxonomyDescriptor:
    id: str
    version: str
    license_id: str
    open_development: bool
    extensible: bool
    publishes_raw_responses: bool
    cultural_scope_notes: str = ""
    benchmark_integration_uri: Optional[str] = None

    def to_doc(self) -> dict:
        doc = {
            "id": self.id,
            "version": self.version,
            "license_id": self.license_id,
            "open_development": self.open_development,
            "extensible": self.extensible,
            "publishes_raw_responses": self.publishes_raw_responses,
            "cultural_scope_notes": self.cultural_scope_notes,
        }
        if self.benchmark_integration_uri is not None:
            doc["benchmark_integration_uri"] = self.benchmark_integration_uri
        return doc


@dataclass(frozen=True)
class ModelRef:
    name: str
    version: str

    def __post_init__(self):
        _require(self.name.strip() != "", "model ref name is empty")
        _require(self.version.strip() != "", "model ref version is empty")

    def to_doc(self) -> dict:
        return {"name": self.name, "version": self.version}


@dataclass(frozen=True)
class ImpactClaim:
    confidentiality_loss: bool = False
    integrity_loss: bool = False
    availability_loss: bool = False
    harm_categories: frozenset[str] = frozenset()
    categories: frozenset[str] = frozenset()
    within_declared_use: bool = True
    breadth: str = "individual"

    def __post_init__(self):
        unknown = self.harm_categories - vocab.HARM_CATEGORIES
        _require(not unknown, f"unknown harm categories: {sorted(unknown)}")
        _require(self.breadth in vocab.BREADTHS, f"unknown breadth {self.breadth!r}")
        _require(
            self.any_cia() or bool(self.harm_categories),
            "impact claim must set at least one CIA flag or harm category",
        )

    def any_cia(self) -> bool:
        return self.confidentiality_loss or self.integrity_loss or self.availability_loss

    def to_doc(self) -> dict:
        return {
            "confidentiality_loss": self.confidentiality_loss,
            "integrity_loss": self.integrity_loss,
            "availability_loss": self.availability_loss,
            "harm_categories": sorted(self.harm_categories),
            "categories": sorted(self.categories),
            "within_declared_use": self.within_declared_use,
            "breadth": self.breadth,
        }


@dataclass(frozen=True)
class EvidenceSet:
    party: str
    n: int
    k: int
    sampling_protocol: str = ""
    sealed_payload_digest: str = ""

    def __post_init__(self):
        _require(self.n >= 1, "n must be >= 1")
        _require(0 <= self.k <= self.n, "k must satisfy 0 <= k <= n")

    def to_doc(self) -> dict:
        return {
            "party": self.party,
            "n": self.n,
            "k": self.k,
            "sampling_protocol": self.sampling_protocol,
            "sealed_payload_digest": self.sealed_payload_digest,
        }


@dataclass(frozen=True)
class Report:
    reporter_id: str
    model_ref: ModelRef
    claimed_track: str
    impact: ImpactClaim
    narrative: str
    reported_at: str
    evidence: Optional[EvidenceSet] = None

    def __post_init__(self):
        _require(self.reporter_id.strip() != "", "reporter_id is empty")
        _require(self.claimed_track in vocab.CLAIMED_TRACKS, f"unknown track {self.claimed_track!r}")

    def to_doc(self) -> dict:
        doc = {
            "reporter_id": self.reporter_id,
            "model": self.model_ref.to_doc(),
            "claimed_track": self.claimed_track,
            "impact": self.impact.to_doc(),
            "narrative": self.narrative,
            "reported_at": self.reported_at,
        }
        if self.evidence is not None:
            doc["evidence"] = self.evidence.to_doc()
        return doc


@dataclass(frozen=True)
class Severity:
    harm_categories: frozenset[str]
    breadth: str
    bracket: str

    def __post_init__(self):
        _require(bool(self.harm_categories), "severity requires at least one harm category")
        unknown = self.harm_categories - vocab.HARM_CATEGORIES
        _require(not unknown, f"unknown harm categories: {sorted(unknown)}")
        _require(self.breadth in vocab.BREADTHS, f"unknown breadth {self.breadth!r}")
        expected = bracket_for(self.harm_categories, self.breadth)
        _require(
            self.bracket == expected,
            f"bracket {self.bracket!r} does not match mapping table ({expected!r})",
        )

    def to_doc(self) -> dict:
        return {
            "harm_categories": sorted(self.harm_categories),
            "breadth": self.breadth,
            "bracket": self.bracket,
        }


@dataclass(frozen=True)
class Actor:
    actor_id: str
    display_name: str = ""
    roles: frozenset[str] = frozenset()

    def __post_init__(self):
        _require(self.actor_id.strip() != "", "actor_id is empty")
        unknown = self.roles - vocab.ROLES
        _require(not unknown, f"unknown roles: {sorted(unknown)}")

    def to_doc(self) -> dict:
        return {
            "actor_id": self.actor_id,
            "display_name": self.display_name,
            "roles": sorted(self.roles),
        }


@dataclass(frozen=True)
class EmbargoWindow:
    starts_at: str
    expires_at: str
    participants: frozenset[str]

    def __post_init__(self):
        _require(
            parse_ts(self.expires_at) > parse_ts(self.starts_at),
            "embargo must expire after it starts",
        )

    def to_doc(self) -> dict:
        return {
            "starts_at": self.starts_at,
            "expires_at": self.expires_at,
            "participants": sorted(self.participants),
        }


@dataclass(frozen=True)
class CfeRecord:
    cfe_id: CfeId
    case_id: str
    model_ref: ModelRef
    summary: str
    status: str
    reserved_at: str
    severity: Optional[Severity] = None
    affected_lineage: frozenset[str] = frozenset()
    affected_uses: frozenset[str] = frozenset()
    remediating_commits: frozenset[str] = frozenset()
    effective_guardrails: frozenset[str] = frozenset()
    published_at: Optional[str] = None
    re_review_at: Optional[str] = None
    advisory_id: Optional[str] = None

    def __post_init__(self):
        _require(self.status in vocab.CFE_STATUSES, f"unknown CFE status {self.status!r}")

    def to_doc(self) -> dict:
        return {
            "cfe_id": format_cfe_id(self.cfe_id),
            "case_id": self.case_id,
            "model": self.model_ref.to_doc(),
            "summary": self.summary,
            "status": self.status,
            "severity": self.severity.to_doc() if self.severity else None,
            "affected_lineage": sorted(self.affected_lineage),
            "affected_uses": sorted(self.affected_uses),
            "remediating_commits": sorted(self.remediating_commits),
            "effective_guardrails": sorted(self.effective_guardrails),
            "reserved_at": self.reserved_at,
            "published_at": self.published_at,
            "re_review_at": self.re_review_at,
            "advisory_id": self.advisory_id,
        }


@dataclass(frozen=True)
class Advisory:
    advisory_id: str
    case_id: str
    model_ref: ModelRef
    title: str
    body: str
    published_at: str
    cfe_id: Optional[CfeId] = None
    cve_ref: Optional[str] = None
    severity_bracket: Optional[str] = None
    links: tuple[str, ...] = ()

    def __post_init__(self):
        _require(
            self.cfe_id is not None or bool(self.cve_ref),
            "advisory must reference a CFE or CVE identifier",
        )
        if self.severity_bracket is not None:
            _require(self.severity_bracket in vocab.BRACKETS, "unknown severity bracket")

    def to_doc(self) -> dict:
        return {
            "advisory_id": self.advisory_id,
            "case_id": self.case_id,
            "model": self.model_ref.to_doc(),
            "title": self.title,
            "body": self.body,
            "published_at": self.published_at,
            "cfe_id": format_cfe_id(self.cfe_id) if self.cfe_id else None,
            "cve_ref": self.cve_ref,
            "severity_bracket": self.severity_bracket,
            "links": list(self.links),
        }
