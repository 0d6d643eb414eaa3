"""Case file and audit event values."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Optional

from cfe_registry.domain.types import EmbargoWindow, EvidenceSet, ModelRef, Report, Severity
from cfe_registry.engine.states import CaseState


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    actor_id: str
    action: str
    from_state: Optional[str]
    to_state: str
    timestamp: str
    payload_digest: Optional[str] = None

    def to_doc(self) -> dict:
        return {
            "seq": self.seq,
            "actor_id": self.actor_id,
            "action": self.action,
            "from_state": self.from_state,
            "to_state": self.to_state,
            "timestamp": self.timestamp,
            "payload_digest": self.payload_digest,
        }


@dataclass(frozen=True)
class CaseFile:
    case_id: str
    track: str
    state: CaseState
    report: Report
    model_ref: ModelRef
    participants: dict[str, str]  # role -> actor_id; reporter and vendor always present
    version: int
    audit: tuple[AuditEvent, ...]
    embargo: Optional[EmbargoWindow] = None
    evidence: tuple[EvidenceSet, ...] = ()
    cfe_id: Optional[str] = None
    cve_ref: Optional[str] = None
    advisory_id: Optional[str] = None
    severity: Optional[Severity] = None

    def participant_ids(self) -> frozenset[str]:
        ids = set(self.participants.values())
        if self.embargo is not None:
            ids |= self.embargo.participants
        return frozenset(ids)

    def with_changes(self, **changes: Any) -> "CaseFile":
        return replace(self, **changes)

    def to_doc(self) -> dict:
        return {
            "case_id": self.case_id,
            "track": self.track,
            "state": self.state.value,
            "report": self.report.to_doc(),
            "model_ref": self.model_ref.to_doc(),
            "participants": dict(sorted(self.participants.items())),
            "version": self.version,
            "audit": [event.to_doc() for event in self.audit],
            "embargo": self.embargo.to_doc() if self.embargo else None,
            "evidence": [item.to_doc() for item in self.evidence],
            "cfe_id": self.cfe_id,
            "cve_ref": self.cve_ref,
            "advisory_id": self.advisory_id,
            "severity": self.severity.to_doc() if self.severity else None,
        }
