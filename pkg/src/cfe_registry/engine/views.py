"""Visibility filtering for case files.

Participants and the neutral bodies see everything. Everyone else sees
nothing before publication (not even that the case exists) and only the
public fields afterwards; evidence appears publicly as payload digests only,
never as raw sealed payloads.
"""

from __future__ import annotations

from typing import Optional

from cfe_registry.domain.types import Actor
from cfe_registry.engine.casefile import CaseFile
from cfe_registry.engine.states import PUBLIC_STATES, SYSTEM_ACTOR_ID

# field names that may only ever appear in a participant-level view
EMBARGOED_FIELDS = frozenset(
    {
        "report",
        "narrative",
        "impact",
        "participants",
        "embargo",
        "evidence",
        "audit",
        "sampling_protocol",
        "raw_payload",
        "recommendation",
    }
)

PUBLIC_CASE_FIELDS = frozenset(
    {
        "case_id",
        "state",
        "model_ref",
        "severity_bracket",
        "cfe_id",
        "cve_ref",
        "advisory_id",
        "evidence_digests",
        "view",
    }
)


def can_view_full(case: CaseFile, actor: Optional[Actor]) -> bool:
    if actor is None:
        return False
    if actor.actor_id == SYSTEM_ACTOR_ID:
        return True
    if actor.actor_id in case.participant_ids():
        return True
    return bool(actor.roles & {"committee", "adjudicator"})


def embargo_view(
    case: CaseFile,
    actor: Optional[Actor],
    audit_payloads: Optional[dict[int, dict]] = None,
) -> Optional[dict]:
    """The case as the actor may see it; None means not-found-equivalent."""
    if can_view_full(case, actor):
        return full_view(case, audit_payloads)
    if case.state in PUBLIC_STATES:
        return public_view(case)
    return None


def full_view(case: CaseFile, audit_payloads: Optional[dict[int, dict]] = None) -> dict:
    doc = case.to_doc()
    doc["view"] = "full"
    if audit_payloads:
        for entry in doc["audit"]:
            payload = audit_payloads.get(entry["seq"])
            if payload is not None:
                entry["payload"] = payload
    return doc


def public_view(case: CaseFile) -> dict:
    doc = {
        "view": "public",
        "case_id": case.case_id,
        "state": case.state.value,
        "model_ref": case.model_ref.to_doc(),
        "evidence_digests": sorted(
            item.sealed_payload_digest for item in case.evidence if item.sealed_payload_digest
        ),
    }
    if case.severity is not None:
        doc["severity_bracket"] = case.severity.bracket
    if case.cfe_id is not None:
        doc["cfe_id"] = case.cfe_id
    if case.cve_ref is not None:
        doc["cve_ref"] = case.cve_ref
    if case.advisory_id is not None:
        doc["advisory_id"] = case.advisory_id
    return doc


def scan_for_embargoed_fields(tree) -> list[str]:
    """Key names from the embargoed set found anywhere in a document tree."""
    found: list[str] = []

    def walk(node, path: str):
        if isinstance(node, dict):
            for key, value in node.items():
                child = f"{path}/{key}"
                if key in EMBARGOED_FIELDS:
                    found.append(child)
                walk(value, child)
        elif isinstance(node, list):
            for i, item in enumerate(node):
                walk(item, f"{path}/{i}")

    walk(tree, "")
    return found
