"""The transition table: the one authority on who may move a case and where.

Exported as a machine-readable document that drives CLI help and console
forms, so adding a transition here needs no client change.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from cfe_registry.engine.states import CaseState, SYSTEM_ROLE

S = CaseState


class Action(str, Enum):
    SUBMIT = "submit"
    ACKNOWLEDGE = "acknowledge"
    REJECT = "reject"
    REASSIGN_TRACK = "reassign_track"
    WITHDRAW = "withdraw"
    CLOSE_OUT_OF_SCOPE = "close_out_of_scope"
    CLOSE_INVALID = "close_invalid"
    REQUEST_CFE = "request_cfe"
    ASSIGN_CFE = "assign_cfe"
    ESCALATE = "escalate"
    PANEL_ACCEPT = "panel_accept"
    PANEL_REJECT = "panel_reject"
    ADVANCE = "advance"
    PUBLISH = "publish"
    MARK_FIXED = "mark_fixed"
    CONFIRM = "confirm"
    DISPUTE = "dispute"
    REQUEST_CVE = "request_cve"
    ASSIGN_CVE = "assign_cve"
    APPEAL = "appeal"
    RESOLVE_APPEAL_ASSIGN = "resolve_appeal_assign"
    RESOLVE_APPEAL_REJECT = "resolve_appeal_reject"
    START_EMBARGO = "start_embargo"
    # state-preserving annotations (not part of the transition table)
    ATTACH_EVIDENCE = "attach_evidence"
    RECOMMEND = "recommend"


@dataclass(frozen=True)
class PayloadField:
    name: str
    kind: str  # string | number | string_list | object
    required: bool = False
    enum: Optional[tuple[str, ...]] = None

    def to_doc(self) -> dict:
        doc = {"name": self.name, "kind": self.kind, "required": self.required}
        if self.enum:
            doc["enum"] = list(self.enum)
        return doc


@dataclass(frozen=True)
class Rule:
    track: str
    state: CaseState
    action: Action
    roles: frozenset[str]
    target: CaseState
    payload: tuple[PayloadField, ...] = ()
    auto: bool = False  # applied by the engine itself right after the previous transition

    def to_doc(self) -> dict:
        return {
            "track": self.track,
            "from": self.state.value,
            "action": self.action.value,
            "roles": sorted(self.roles),
            "to": self.target.value,
            "payload": [f.to_doc() for f in self.payload],
            "auto": self.auto,
        }


def _f(name, kind="string", required=False, enum=None):
    return PayloadField(name=name, kind=kind, required=required, enum=tuple(enum) if enum else None)


_REASON = _f("reason", required=True)
_NOTE = _f("note")
_WITHDRAW_REASON = (_f("reason"),)

_SAFETY_RULES: tuple[Rule, ...] = (
    Rule("safety", S.SUBMITTED, Action.ACKNOWLEDGE, frozenset({"vendor"}), S.VENDOR_ACKNOWLEDGED,
         (_NOTE, _f("breadth", enum=("individual", "group", "societal")))),
    Rule("safety", S.SUBMITTED, Action.REJECT, frozenset({"vendor"}), S.VENDOR_REJECTED, (_REASON,)),
    Rule("safety", S.SUBMITTED, Action.REASSIGN_TRACK, frozenset({"vendor"}), S.VENDOR_TRIAGE,
         (_f("track", required=True, enum=("safety", "security")),)),
    Rule("safety", S.SUBMITTED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("safety", S.SUBMITTED, Action.CLOSE_OUT_OF_SCOPE, frozenset({SYSTEM_ROLE}), S.CLOSED_INVALID,
         (_f("matched_exclusion", required=True),)),
    Rule("safety", S.VENDOR_TRIAGE, Action.ACKNOWLEDGE, frozenset({"vendor"}), S.VENDOR_ACKNOWLEDGED,
         (_NOTE, _f("breadth", enum=("individual", "group", "societal")))),
    Rule("safety", S.VENDOR_TRIAGE, Action.REJECT, frozenset({"vendor"}), S.VENDOR_REJECTED, (_REASON,)),
    Rule("safety", S.VENDOR_TRIAGE, Action.CLOSE_INVALID, frozenset({"vendor"}), S.CLOSED_INVALID, (_REASON,)),
    Rule("safety", S.VENDOR_TRIAGE, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("safety", S.VENDOR_ACKNOWLEDGED, Action.REQUEST_CFE, frozenset({"vendor", "committee"}),
         S.CFE_REQUESTED, (_NOTE,)),
    Rule("safety", S.VENDOR_ACKNOWLEDGED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("safety", S.CFE_REQUESTED, Action.ASSIGN_CFE, frozenset({"committee"}), S.CFE_ASSIGNED,
         (_f("summary"), _f("affected_lineage", "string_list"), _f("affected_uses", "string_list"),
          _f("effective_guardrails", "string_list"))),
    Rule("safety", S.CFE_REQUESTED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("safety", S.VENDOR_REJECTED, Action.ESCALATE, frozenset({"reporter"}), S.ADJUDICATION, (_NOTE,)),
    Rule("safety", S.VENDOR_REJECTED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("safety", S.ADJUDICATION, Action.PANEL_ACCEPT, frozenset({"adjudicator"}), S.PANEL_ACCEPTED, (_NOTE,)),
    Rule("safety", S.ADJUDICATION, Action.PANEL_REJECT, frozenset({"adjudicator"}), S.PANEL_REJECTED, (_REASON,)),
    Rule("safety", S.ADJUDICATION, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("safety", S.PANEL_ACCEPTED, Action.ADVANCE, frozenset({SYSTEM_ROLE}), S.CFE_REQUESTED, (), auto=True),
    Rule("safety", S.CFE_ASSIGNED, Action.PUBLISH, frozenset({"vendor", "committee"}), S.PUBLISHED,
         (_f("advisory", "object", required=True), _f("links", "string_list"))),
    Rule("safety", S.PUBLISHED, Action.MARK_FIXED, frozenset({"vendor"}), S.FIXED,
         (_f("hex_statement_id", required=True), _f("remediating_commit", required=True))),
)

_SECURITY_RULES: tuple[Rule, ...] = (
    Rule("security", S.SUBMITTED, Action.CONFIRM, frozenset({"vendor"}), S.VENDOR_CONFIRMED,
         (_f("severity_label"),)),
    Rule("security", S.SUBMITTED, Action.DISPUTE, frozenset({"vendor"}), S.VENDOR_DISPUTED, (_REASON,)),
    Rule("security", S.SUBMITTED, Action.REASSIGN_TRACK, frozenset({"vendor"}), S.VENDOR_TRIAGE,
         (_f("track", required=True, enum=("safety", "security")),)),
    Rule("security", S.SUBMITTED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("security", S.VENDOR_TRIAGE, Action.CONFIRM, frozenset({"vendor"}), S.VENDOR_CONFIRMED,
         (_f("severity_label"),)),
    Rule("security", S.VENDOR_TRIAGE, Action.DISPUTE, frozenset({"vendor"}), S.VENDOR_DISPUTED, (_REASON,)),
    Rule("security", S.VENDOR_TRIAGE, Action.CLOSE_INVALID, frozenset({"vendor"}), S.CLOSED_INVALID, (_REASON,)),
    Rule("security", S.VENDOR_TRIAGE, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("security", S.VENDOR_CONFIRMED, Action.REQUEST_CVE, frozenset({"vendor"}), S.CVE_REQUESTED, (_NOTE,)),
    Rule("security", S.VENDOR_CONFIRMED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("security", S.CVE_REQUESTED, Action.ASSIGN_CVE, frozenset({"vendor", "committee"}), S.CVE_ASSIGNED,
         (_f("cve_ref"),)),
    Rule("security", S.CVE_REQUESTED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("security", S.VENDOR_DISPUTED, Action.APPEAL, frozenset({"reporter"}), S.CVE_PROGRAM_APPEAL, (_NOTE,)),
    Rule("security", S.VENDOR_DISPUTED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("security", S.CVE_PROGRAM_APPEAL, Action.RESOLVE_APPEAL_ASSIGN, frozenset({"committee"}),
         S.CVE_ASSIGNED, (_f("cve_ref"), _f("resolution"))),
    Rule("security", S.CVE_PROGRAM_APPEAL, Action.RESOLVE_APPEAL_REJECT, frozenset({"committee"}),
         S.CLOSED_INVALID, (_REASON,)),
    Rule("security", S.CVE_PROGRAM_APPEAL, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
    Rule("security", S.CVE_ASSIGNED, Action.START_EMBARGO, frozenset({"vendor", "committee"}), S.EMBARGOED,
         (_f("embargo_days", "number"),)),
    Rule("security", S.EMBARGOED, Action.PUBLISH, frozenset({"vendor", "committee"}), S.PUBLISHED,
         (_f("advisory", "object", required=True), _f("vex_ref", required=True), _f("links", "string_list"))),
    Rule("security", S.PUBLISHED, Action.MARK_FIXED, frozenset({"vendor"}), S.FIXED,
         (_f("remediating_commit", required=True),)),
)

_AMBIGUOUS_RULES: tuple[Rule, ...] = (
    Rule("ambiguous", S.SUBMITTED, Action.REASSIGN_TRACK, frozenset({"vendor"}), S.VENDOR_TRIAGE,
         (_f("track", required=True, enum=("safety", "security")),)),
    Rule("ambiguous", S.SUBMITTED, Action.WITHDRAW, frozenset({"reporter"}), S.WITHDRAWN, _WITHDRAW_REASON),
)

TRANSITION_RULES: tuple[Rule, ...] = _SAFETY_RULES + _SECURITY_RULES + _AMBIGUOUS_RULES

_INDEX: dict[tuple[str, CaseState, Action], Rule] = {
    (rule.track, rule.state, rule.action): rule for rule in TRANSITION_RULES
}

_BY_STATE: dict[tuple[str, CaseState], tuple[Rule, ...]] = {}
for _rule in TRANSITION_RULES:
    key = (_rule.track, _rule.state)
    _BY_STATE[key] = _BY_STATE.get(key, ()) + (_rule,)


def rule_for(track: str, state: CaseState, action: Action) -> Optional[Rule]:
    return _INDEX.get((track, state, action))


def rules_for(track: str, state: CaseState) -> tuple[Rule, ...]:
    return _BY_STATE.get((track, state), ())


def auto_rule_from(track: str, state: CaseState) -> Optional[Rule]:
    for rule in rules_for(track, state):
        if rule.auto:
            return rule
    return None


TABLE_VERSION = "1"


def transition_table_doc() -> dict:
    """Machine-readable transition table (drives CLI help and console forms)."""
    from cfe_registry.engine.states import TERMINAL_STATES, TRACKS

    return {
        "table_version": TABLE_VERSION,
        "tracks": list(TRACKS),
        "states": [state.value for state in CaseState],
        "terminal_states": sorted(state.value for state in TERMINAL_STATES),
        "transitions": [rule.to_doc() for rule in TRANSITION_RULES],
        "annotations": [
            {
                "action": Action.ATTACH_EVIDENCE.value,
                "roles": ["participant"],
                "payload": [
                    {"name": "n", "kind": "number", "required": True},
                    {"name": "k", "kind": "number", "required": True},
                    {"name": "sampling_protocol", "kind": "string", "required": False},
                    {"name": "raw_payload", "kind": "string", "required": False},
                ],
            },
            {
                "action": Action.RECOMMEND.value,
                "roles": ["adjudicator"],
                "payload": [
                    {"name": "threshold", "kind": "number", "required": False},
                    {"name": "alpha", "kind": "number", "required": False},
                ],
            },
        ],
    }
