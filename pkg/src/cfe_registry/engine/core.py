"""The lifecycle engine: a pure transition function over case files.

Every mutation is an audit event plus a payload; folding the recorded
events from scratch reproduces the exact case file, which is what the
registry's replay-on-startup and the audit tooling rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

from cfe_registry.domain.rules import Track, check_scope, classify_report, severity_bracket
from cfe_registry.domain.types import (
    Actor,
    EmbargoWindow,
    ModelCard,
    Report,
)
from cfe_registry.engine.actions import Action, Rule, auto_rule_from, rule_for, rules_for
from cfe_registry.engine.casefile import AuditEvent, CaseFile
from cfe_registry.engine.states import (
    CaseState,
    SYSTEM_ACTOR_ID,
    SYSTEM_ROLE,
    TERMINAL_STATES,
)
from cfe_registry.errors import (
    IllegalState,
    IllegalTransition,
    MissingIdentifier,
    PayloadInvalid,
    RoleNotPermitted,
)
from cfe_registry.formats.canonical import canonical_digest
from cfe_registry.formats.case_docs import parse_evidence, parse_report
from cfe_registry.formats.identifiers import CfeId, format_cfe_id
from cfe_registry.timeutil import add_days

SYSTEM_ACTOR = Actor(actor_id=SYSTEM_ACTOR_ID, display_name="registry", roles=frozenset())


@dataclass(frozen=True)
class EngineContext:
    clock: Callable[[], str]
    alloc_cfe: Callable[[], CfeId]
    alloc_advisory_id: Callable[[], str]
    assign_cve: Callable[[], str]
    embargo_days: float = 90.0


@dataclass(frozen=True)
class TransitionResult:
    case: CaseFile
    applied: tuple[tuple[AuditEvent, Optional[dict]], ...]


def effective_roles(case: CaseFile, actor: Actor) -> frozenset[str]:
    """Roles the actor may exercise on this specific case.

    Reporter/vendor powers belong to the case's own participants, not to
    anyone holding those roles globally. Committee/adjudicator roles are
    global but are stripped for the case's vendor (conflict-of-interest
    guard: those roles never co-occur with vendor on the same case).
    """
    if actor.actor_id == SYSTEM_ACTOR_ID:
        return frozenset({SYSTEM_ROLE})
    roles = set()
    is_vendor = actor.actor_id == case.participants.get("vendor")
    if actor.actor_id == case.participants.get("reporter"):
        roles.add("reporter")
    if is_vendor:
        roles.add("vendor")
    if not is_vendor:
        roles |= actor.roles & {"committee", "adjudicator"}
    return frozenset(roles)


def legal_actions(case: CaseFile, role: str) -> frozenset[Action]:
    """Exactly the actions whose (state, track, role) guard matches; empty for terminal states."""
    if case.state in TERMINAL_STATES:
        return frozenset()
    return frozenset(rule.action for rule in rules_for(case.track, case.state) if role in rule.roles)


def legal_actions_for_actor(case: CaseFile, actor: Actor) -> frozenset[Action]:
    actions: set[Action] = set()
    for role in effective_roles(case, actor):
        actions |= legal_actions(case, role)
    return frozenset(actions)


_KIND_CHECKS = {
    "string": lambda v: isinstance(v, str),
    "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "string_list": lambda v: isinstance(v, list) and all(isinstance(i, str) for i in v),
    "object": lambda v: isinstance(v, dict),
}


def validate_payload(rule: Rule, payload: Optional[dict]) -> dict:
    payload = dict(payload or {})
    known = {f.name for f in rule.payload}
    unknown = set(payload) - known
    if unknown:
        raise PayloadInvalid(f"unknown payload fields for {rule.action.value}: {sorted(unknown)}")
    for field_spec in rule.payload:
        if field_spec.name not in payload:
            if field_spec.required:
                raise PayloadInvalid(f"{rule.action.value} requires payload field {field_spec.name!r}")
            continue
        value = payload[field_spec.name]
        if not _KIND_CHECKS[field_spec.kind](value):
            raise PayloadInvalid(
                f"payload field {field_spec.name!r} must be {field_spec.kind}"
            )
        if field_spec.kind == "string" and field_spec.required and not str(value).strip():
            raise PayloadInvalid(f"payload field {field_spec.name!r} must be non-empty")
        if field_spec.enum and value not in field_spec.enum:
            raise PayloadInvalid(
                f"payload field {field_spec.name!r} must be one of {list(field_spec.enum)}"
            )
    return payload


def _enrich_payload(case: CaseFile, rule: Rule, payload: dict, ctx: EngineContext) -> dict:
    action = rule.action
    if action == Action.ASSIGN_CFE:
        payload["cfe_id"] = format_cfe_id(ctx.alloc_cfe())
        payload.setdefault("summary", "")
        payload.setdefault("affected_lineage", [case.model_ref.version])
        payload.setdefault("affected_uses", sorted(case.report.impact.categories))
        payload.setdefault("effective_guardrails", [])
    elif action == Action.PUBLISH:
        advisory = payload.get("advisory") or {}
        title = advisory.get("title")
        if not isinstance(title, str) or not title.strip():
            raise PayloadInvalid("publish requires advisory.title")
        body = advisory.get("body", "")
        if not isinstance(body, str):
            raise PayloadInvalid("advisory.body must be a string")
        if case.track == "safety" and case.cfe_id is None:
            raise MissingIdentifier("safety advisory requires an assigned CFE id")
        if case.track == "security" and case.cve_ref is None:
            raise MissingIdentifier("security advisory requires a CVE reference")
        payload["advisory_id"] = ctx.alloc_advisory_id()
    elif action in (Action.ASSIGN_CVE, Action.RESOLVE_APPEAL_ASSIGN):
        # a CNA vendor supplies its own id; otherwise the external program
        # partner client assigns one
        if not payload.get("cve_ref"):
            payload["cve_ref"] = ctx.assign_cve()
    return payload


def apply_transition(
    case: CaseFile,
    action: Action,
    actor: Actor,
    payload: Optional[dict],
    ctx: EngineContext,
) -> TransitionResult:
    roles = effective_roles(case, actor)
    rule = rule_for(case.track, case.state, action)
    if rule is None:
        # distinguish "not from this state" from "never yours to perform"
        role_has_action_somewhere = any(
            r.action == action and (roles & r.roles) for r in _track_rules(case.track)
        )
        if role_has_action_somewhere:
            raise IllegalTransition(case.state.value, action.value)
        raise RoleNotPermitted(
            f"actor {actor.actor_id!r} holds no role permitted to {action.value!r}"
        )
    if not roles & rule.roles:
        raise RoleNotPermitted(
            f"action {action.value!r} in state {case.state.value} requires roles "
            f"{sorted(rule.roles)}; actor {actor.actor_id!r} has {sorted(roles)}"
        )
    payload = validate_payload(rule, payload)
    payload = _enrich_payload(case, rule, payload, ctx)

    applied: list[tuple[AuditEvent, Optional[dict]]] = []
    current = case
    event = _build_event(current, rule, actor.actor_id, payload, ctx.clock())
    current = fold_event(current, event, payload)
    applied.append((event, payload or None))

    auto = auto_rule_from(current.track, current.state)
    while auto is not None:
        auto_event = _build_event(current, auto, SYSTEM_ACTOR_ID, {}, ctx.clock())
        current = fold_event(current, auto_event, {})
        applied.append((auto_event, None))
        auto = auto_rule_from(current.track, current.state)

    return TransitionResult(case=current, applied=tuple(applied))


def _track_rules(track: str) -> Iterable[Rule]:
    from cfe_registry.engine.actions import TRANSITION_RULES

    return (rule for rule in TRANSITION_RULES if rule.track == track)


def _build_event(case: CaseFile, rule: Rule, actor_id: str, payload: dict, now: str) -> AuditEvent:
    return AuditEvent(
        seq=case.version + 1,
        actor_id=actor_id,
        action=rule.action.value,
        from_state=case.state.value,
        to_state=rule.target.value,
        timestamp=now,
        payload_digest=canonical_digest(payload) if payload else None,
    )


def submit_report(
    report: Report,
    card: ModelCard,
    vendor_id: str,
    case_id: str,
    ctx: EngineContext,
) -> TransitionResult:
    """Open a case: classify, scope-check, open the embargo window.

    Vendor triage actions are available directly from Submitted, so intake
    needs no separate advancement step. An out-of-scope safety report is
    closed immediately with the matched exclusion on the audit trail.
    """
    track = classify_report(report, card)
    scope = check_scope(report, card)
    now = ctx.clock()
    severity_doc = None
    if report.impact.harm_categories:
        severity_doc = severity_bracket(report.impact.harm_categories, report.impact.breadth).to_doc()
    embargo = EmbargoWindow(
        starts_at=now,
        expires_at=add_days(now, ctx.embargo_days),
        participants=frozenset({report.reporter_id, vendor_id}),
    )
    payload: dict[str, Any] = {
        "case_id": case_id,
        "report": report.to_doc(),
        "track": track.value,
        "scope": scope.to_doc(),
        "vendor": vendor_id,
        "embargo": embargo.to_doc(),
        "severity": severity_doc,
    }
    event = AuditEvent(
        seq=1,
        actor_id=report.reporter_id,
        action=Action.SUBMIT.value,
        from_state=None,
        to_state=CaseState.SUBMITTED.value,
        timestamp=now,
        payload_digest=canonical_digest(payload),
    )
    case = fold_event(None, event, payload)
    applied: list[tuple[AuditEvent, Optional[dict]]] = [(event, payload)]

    if track == Track.SAFETY and not scope.in_scope:
        close_payload = {"matched_exclusion": scope.matched_exclusion}
        close_rule = rule_for("safety", CaseState.SUBMITTED, Action.CLOSE_OUT_OF_SCOPE)
        close_event = _build_event(case, close_rule, SYSTEM_ACTOR_ID, close_payload, ctx.clock())
        case = fold_event(case, close_event, close_payload)
        applied.append((close_event, close_payload))

    return TransitionResult(case=case, applied=tuple(applied))


def attach_evidence(case: CaseFile, actor: Actor, evidence_doc: dict, now: str) -> TransitionResult:
    """Record an evidence set (state-preserving audit entry)."""
    if case.state in TERMINAL_STATES or case.state == CaseState.PUBLISHED:
        raise IllegalState(f"evidence cannot be attached in state {case.state.value}")
    if actor.actor_id not in case.participant_ids():
        raise RoleNotPermitted("only case participants may attach evidence")
    evidence = parse_evidence(evidence_doc)
    if evidence.party != actor.actor_id:
        raise PayloadInvalid("evidence party must be the attaching actor")
    payload = {"evidence": evidence.to_doc()}
    event = AuditEvent(
        seq=case.version + 1,
        actor_id=actor.actor_id,
        action=Action.ATTACH_EVIDENCE.value,
        from_state=case.state.value,
        to_state=case.state.value,
        timestamp=now,
        payload_digest=canonical_digest(payload),
    )
    return TransitionResult(case=fold_event(case, event, payload), applied=((event, payload),))


def record_recommendation(case: CaseFile, actor: Actor, recommendation_doc: dict, now: str) -> TransitionResult:
    if case.state != CaseState.ADJUDICATION:
        raise IllegalState(f"recommendations are recorded during Adjudication, not {case.state.value}")
    if "adjudicator" not in effective_roles(case, actor):
        raise RoleNotPermitted("only adjudicators record recommendations")
    payload = {"recommendation": recommendation_doc}
    event = AuditEvent(
        seq=case.version + 1,
        actor_id=actor.actor_id,
        action=Action.RECOMMEND.value,
        from_state=case.state.value,
        to_state=case.state.value,
        timestamp=now,
        payload_digest=canonical_digest(payload),
    )
    return TransitionResult(case=fold_event(case, event, payload), applied=((event, payload),))


# --- event folding (the one reconstruction path) ---------------------------


def fold_event(case: Optional[CaseFile], event: AuditEvent, payload: Optional[dict]) -> CaseFile:
    payload = payload or {}
    if case is None:
        if event.action != Action.SUBMIT.value or event.seq != 1:
            raise IllegalState("case history must begin with a submit event")
        return _fold_submit(event, payload)
    if event.seq != case.version + 1:
        raise IllegalState(f"event seq {event.seq} does not extend version {case.version}")
    if event.from_state != case.state.value:
        raise IllegalState(
            f"event from_state {event.from_state!r} does not match case state {case.state.value!r}"
        )
    changes: dict[str, Any] = {
        "state": CaseState(event.to_state),
        "version": event.seq,
        "audit": case.audit + (event,),
    }
    action = event.action
    if action == Action.REASSIGN_TRACK.value:
        changes["track"] = payload["track"]
    elif action == Action.ACKNOWLEDGE.value and payload.get("breadth"):
        if case.report.impact.harm_categories:
            changes["severity"] = severity_bracket(
                case.report.impact.harm_categories, payload["breadth"]
            )
    elif action == Action.ASSIGN_CFE.value:
        changes["cfe_id"] = payload["cfe_id"]
    elif action in (Action.ASSIGN_CVE.value, Action.RESOLVE_APPEAL_ASSIGN.value):
        changes["cve_ref"] = payload["cve_ref"]
    elif action == Action.PUBLISH.value:
        changes["advisory_id"] = payload["advisory_id"]
    elif action == Action.START_EMBARGO.value and payload.get("embargo_days") is not None:
        changes["embargo"] = EmbargoWindow(
            starts_at=case.embargo.starts_at,
            expires_at=add_days(event.timestamp, float(payload["embargo_days"])),
            participants=case.embargo.participants,
        )
    elif action == Action.ATTACH_EVIDENCE.value:
        changes["evidence"] = case.evidence + (parse_evidence(payload["evidence"]),)
    return case.with_changes(**changes)


def _fold_submit(event: AuditEvent, payload: dict) -> CaseFile:
    report = parse_report(payload["report"])
    embargo_doc = payload["embargo"]
    embargo = EmbargoWindow(
        starts_at=embargo_doc["starts_at"],
        expires_at=embargo_doc["expires_at"],
        participants=frozenset(embargo_doc["participants"]),
    )
    severity = None
    if payload.get("severity"):
        sev = payload["severity"]
        severity = severity_bracket(frozenset(sev["harm_categories"]), sev["breadth"])
    evidence = (report.evidence,) if report.evidence is not None else ()
    return CaseFile(
        case_id=payload["case_id"],
        track=payload["track"],
        state=CaseState(event.to_state),
        report=report,
        model_ref=report.model_ref,
        participants={"reporter": report.reporter_id, "vendor": payload["vendor"]},
        version=1,
        audit=(event,),
        embargo=embargo,
        evidence=evidence,
        severity=severity,
    )


def replay_case(records: Iterable[tuple[AuditEvent, Optional[dict]]]) -> CaseFile:
    """Fold a case's full event history from scratch."""
    case: Optional[CaseFile] = None
    for event, payload in records:
        case = fold_event(case, event, payload)
    if case is None:
        raise IllegalState("empty case history")
    return case
