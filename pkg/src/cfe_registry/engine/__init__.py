"""Role-guarded, auditable disclosure lifecycle for both tracks."""

from cfe_registry.engine.states import CaseState, TERMINAL_STATES, TRACKS
from cfe_registry.engine.actions import Action, transition_table_doc, rules_for
from cfe_registry.engine.casefile import AuditEvent, CaseFile
from cfe_registry.engine.core import (
    EngineContext,
    TransitionResult,
    apply_transition,
    attach_evidence,
    legal_actions,
    record_recommendation,
    replay_case,
    submit_report,
)
from cfe_registry.engine.views import EMBARGOED_FIELDS, embargo_view

__all__ = [
    "Action",
    "AuditEvent",
    "CaseFile",
    "CaseState",
    "EMBARGOED_FIELDS",
    "EngineContext",
    "TERMINAL_STATES",
    "TRACKS",
    "TransitionResult",
    "apply_transition",
    "attach_evidence",
    "embargo_view",
    "legal_actions",
    "record_recommendation",
    "replay_case",
    "rules_for",
    "submit_report",
    "transition_table_doc",
]
