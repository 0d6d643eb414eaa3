"""The registry: in-memory state, event-sourced persistence, and every operation.

Single mutation path: each change becomes a log record appended durably
first, then folded into state by apply_record — the same function replay
uses at startup, so a rebuilt registry is field-for-field identical.
"""

from __future__ import annotations

import base64
import json
import secrets
import threading
from typing import Optional

from cfe_registry.adjudication.recommend import recommend
from cfe_registry.domain.rules import is_conformant
from cfe_registry.domain.types import (
    Actor,
    Advisory,
    CfeRecord,
    EvidenceSet,
    ModelCard,
    TaxonomyDescriptor,
)
from cfe_registry.engine.actions import Action, rules_for, transition_table_doc
from cfe_registry.engine.casefile import AuditEvent, CaseFile
from cfe_registry.engine.core import (
    EngineContext,
    apply_transition,
    attach_evidence,
    effective_roles,
    fold_event,
    legal_actions,
    record_recommendation,
    submit_report,
)
from cfe_registry.engine.states import CaseState, PUBLIC_STATES, TERMINAL_STATES
from cfe_registry.engine.views import embargo_view
from cfe_registry.errors import (
    AuthError,
    BadPageToken,
    CfeNotActionable,
    IllegalState,
    NotFoundError,
    PayloadInvalid,
    RoleNotPermitted,
    StaleVersion,
    StorageCorruption,
    UnknownModel,
)
from cfe_registry.exposure.rules import evaluate_exposure, lineage_reach, supersede
from cfe_registry.exposure.types import HexStatement, HexSubcomponent
from cfe_registry.formats.canonical import canonical_bytes, canonical_loads
from cfe_registry.formats.case_docs import parse_report, parse_taxonomy
from cfe_registry.formats.findings import finding_catalogue, has_errors
from cfe_registry.formats.hex_doc import parse_deployment_profile, parse_hex
from cfe_registry.formats.identifiers import CfeId, format_cfe_id, parse_cfe_id
from cfe_registry.formats.model_card import lint_model_card, parse_model_card
from cfe_registry.service.config import RegistryConfig
from cfe_registry.service.storage import BlobStore, EventLog, Outbox, SnapshotStore, record_digest
from cfe_registry.timeutil import MonotonicClock, now_ts, parse_ts

RE_REVIEW_DAYS = 365.0  # placeholder policy: published hazards get an annual re-review stamp


class Registry:
    def __init__(self, config: RegistryConfig):
        self.config = config
        self.clock = MonotonicClock()
        self.log = EventLog(config.data_dir, durable=config.durable_fsync)
        self.blobs = BlobStore(config.data_dir)
        self.snapshots = SnapshotStore(config.data_dir)
        self.outbox = Outbox(config.data_dir)
        self.lock = threading.RLock()

        # aggregates (mutated only inside apply_record)
        self.actors: dict[str, Actor] = {}
        self.tokens: dict[str, dict] = {}
        self.cards: dict[tuple[str, str], dict] = {}
        self.taxonomies: dict[tuple[str, str], TaxonomyDescriptor] = {}
        self.cases: dict[str, CaseFile] = {}
        self.case_payloads: dict[str, dict[int, dict]] = {}
        self.cfes: dict[str, CfeRecord] = {}
        self.advisories: dict[str, Advisory] = {}
        self.advisory_order: list[str] = []
        self.hex_statements: dict[str, HexStatement] = {}
        self.hex_effective: dict[tuple[str, str], str] = {}
        self.hex_by_cfe: dict[str, list[str]] = {}

        self.global_seq = 0
        self.next_case = 0
        self.next_advisory = 0
        self.next_hex = 0
        self.next_cve_stub = 0
        self.cfe_year_seq: dict[int, int] = {}

        self._notified = self.outbox.notified_case_ids()
        self._startup()

    # ------------------------------------------------------------------
    # startup / persistence
    # ------------------------------------------------------------------

    def _startup(self) -> None:
        records = self.log.read_all()
        start_seq = 0
        latest = self.snapshots.latest()
        if latest is not None:
            snap_seq, payload = latest
            self._load_snapshot(canonical_loads(payload))
            start_seq = snap_seq
        for record in records:
            if record["global_seq"] > start_seq:
                self.apply_record(record)
            self.global_seq = max(self.global_seq, record["global_seq"])
        self._heal_pending_auto()
        self.sweep_embargoes()

    def _heal_pending_auto(self) -> None:
        """Finish auto transitions interrupted by a crash between chained events."""
        from cfe_registry.engine.actions import auto_rule_from
        from cfe_registry.engine.core import _build_event

        for case_id in sorted(self.cases):
            case = self.cases[case_id]
            rule = auto_rule_from(case.track, case.state)
            while rule is not None:
                event = _build_event(case, rule, "system", {}, self.clock.now())
                self._append_case_record(case_id, event, None)
                case = self.cases[case_id]
                rule = auto_rule_from(case.track, case.state)

    def _record(self, kind: str, body: dict) -> dict:
        recorded_at = self.clock.now()
        seq = self.global_seq + 1
        return {
            "global_seq": seq,
            "kind": kind,
            "recorded_at": recorded_at,
            "body": body,
            "digest": record_digest(seq, kind, recorded_at, body),
        }

    def _append(self, kind: str, body: dict) -> dict:
        record = self._record(kind, body)
        self.log.append(record)
        self.apply_record(record)
        self.global_seq = record["global_seq"]
        if self.config.snapshot_every and self.global_seq % self.config.snapshot_every == 0:
            self.write_snapshot()
        return record

    def _append_case_record(self, case_id: str, event: AuditEvent, payload: Optional[dict]) -> dict:
        return self._append(
            "case", {"case_id": case_id, "event": event.to_doc(), "payload": payload}
        )

    def apply_record(self, record: dict) -> None:
        kind = record["kind"]
        body = record["body"]
        try:
            getattr(self, f"_apply_{kind}")(body)
        except AttributeError:
            raise StorageCorruption(f"unknown record kind {kind!r}")
        except StorageCorruption:
            raise
        except Exception as exc:
            raise StorageCorruption(f"record {record.get('global_seq')} failed to apply: {exc}")

    def _apply_actor(self, body: dict) -> None:
        actor = Actor(
            actor_id=body["actor_id"],
            display_name=body.get("display_name", ""),
            roles=frozenset(body.get("roles", [])),
        )
        self.actors[actor.actor_id] = actor

    def _apply_token(self, body: dict) -> None:
        self.tokens[body["token"]] = {
            "token_id": body["token_id"],
            "actor_id": body["actor_id"],
            "expires_at": body["expires_at"],
        }

    def _apply_card(self, body: dict) -> None:
        card = parse_model_card(body["card"])
        self.cards[(card.model_name, card.model_version)] = {"card": card, "owner": body["owner"]}

    def _apply_taxonomy(self, body: dict) -> None:
        descriptor = parse_taxonomy(body["descriptor"])
        self.taxonomies[(descriptor.id, descriptor.version)] = descriptor

    def _apply_hex(self, body: dict) -> None:
        statement = parse_hex(body["statement"])
        self.hex_statements[statement.statement_id] = statement
        cfe_key = format_cfe_id(statement.cfe_id)
        self.hex_effective[(cfe_key, statement.deployment_ref)] = statement.statement_id
        self.hex_by_cfe.setdefault(cfe_key, []).append(statement.statement_id)
        number = _trailing_number(statement.statement_id, "HEX-")
        if number is not None:
            self.next_hex = max(self.next_hex, number)

    def _apply_case(self, body: dict) -> None:
        case_id = body["case_id"]
        event_doc = body["event"]
        payload = body.get("payload")
        event = AuditEvent(
            seq=event_doc["seq"],
            actor_id=event_doc["actor_id"],
            action=event_doc["action"],
            from_state=event_doc["from_state"],
            to_state=event_doc["to_state"],
            timestamp=event_doc["timestamp"],
            payload_digest=event_doc.get("payload_digest"),
        )
        case = fold_event(self.cases.get(case_id), event, payload)
        self.cases[case_id] = case
        if payload:
            self.case_payloads.setdefault(case_id, {})[event.seq] = payload
        action = event.action

        if action == Action.SUBMIT.value:
            number = _trailing_number(case_id, "C-")
            if number is not None:
                self.next_case = max(self.next_case, number)
        elif action == Action.ASSIGN_CFE.value:
            cfe_id = parse_cfe_id(payload["cfe_id"])
            # default summary is built from public fields only; report
            # narrative is embargoed content and must never leak into the record
            harms = ", ".join(sorted(case.report.impact.harm_categories)) or "security impact"
            placeholder = f"{case.model_ref.name}@{case.model_ref.version}: {harms}"
            record = CfeRecord(
                cfe_id=cfe_id,
                case_id=case_id,
                model_ref=case.model_ref,
                summary=payload.get("summary") or placeholder,
                status="reserved",
                severity=case.severity,
                affected_lineage=frozenset(payload.get("affected_lineage", [])),
                affected_uses=frozenset(payload.get("affected_uses", [])),
                remediating_commits=frozenset(),
                effective_guardrails=frozenset(payload.get("effective_guardrails", [])),
                reserved_at=event.timestamp,
            )
            self.cfes[payload["cfe_id"]] = record
            seq = self.cfe_year_seq.get(cfe_id.year, 0)
            self.cfe_year_seq[cfe_id.year] = max(seq, cfe_id.sequence)
        elif action in (Action.ASSIGN_CVE.value, Action.RESOLVE_APPEAL_ASSIGN.value):
            number = _trailing_number(payload.get("cve_ref", ""), "CVE-STUB-")
            if number is not None:
                self.next_cve_stub = max(self.next_cve_stub, number)
        elif action == Action.PUBLISH.value:
            self._apply_publish(case, event, payload)
        elif action == Action.MARK_FIXED.value:
            if case.cfe_id is not None and case.cfe_id in self.cfes:
                record = self.cfes[case.cfe_id]
                self.cfes[case.cfe_id] = CfeRecord(
                    cfe_id=record.cfe_id,
                    case_id=record.case_id,
                    model_ref=record.model_ref,
                    summary=record.summary,
                    status="fixed",
                    severity=record.severity,
                    affected_lineage=record.affected_lineage,
                    affected_uses=record.affected_uses,
                    remediating_commits=record.remediating_commits
                    | {payload["remediating_commit"]},
                    effective_guardrails=record.effective_guardrails,
                    reserved_at=record.reserved_at,
                    published_at=record.published_at,
                    re_review_at=record.re_review_at,
                    advisory_id=record.advisory_id,
                )

    def _apply_publish(self, case: CaseFile, event: AuditEvent, payload: dict) -> None:
        from cfe_registry.timeutil import add_days

        advisory_body = payload["advisory"]
        advisory = Advisory(
            advisory_id=payload["advisory_id"],
            case_id=case.case_id,
            model_ref=case.model_ref,
            title=advisory_body["title"],
            body=advisory_body.get("body", ""),
            published_at=event.timestamp,
            cfe_id=parse_cfe_id(case.cfe_id) if case.cfe_id else None,
            cve_ref=case.cve_ref,
            severity_bracket=case.severity.bracket if case.severity else None,
            links=tuple(payload.get("links", [])),
        )
        self.advisories[advisory.advisory_id] = advisory
        self.advisory_order.append(advisory.advisory_id)
        number = _trailing_number(advisory.advisory_id, "ADV-")
        if number is not None:
            self.next_advisory = max(self.next_advisory, number)
        if case.cfe_id is not None and case.cfe_id in self.cfes:
            record = self.cfes[case.cfe_id]
            self.cfes[case.cfe_id] = CfeRecord(
                cfe_id=record.cfe_id,
                case_id=record.case_id,
                model_ref=record.model_ref,
                summary=record.summary,
                status="published",
                severity=record.severity,
                affected_lineage=record.affected_lineage,
                affected_uses=record.affected_uses,
                remediating_commits=record.remediating_commits,
                effective_guardrails=record.effective_guardrails,
                reserved_at=record.reserved_at,
                published_at=event.timestamp,
                re_review_at=add_days(event.timestamp, RE_REVIEW_DAYS),
                advisory_id=advisory.advisory_id,
            )

    # ------------------------------------------------------------------
    # snapshots
    # ------------------------------------------------------------------

    def export_snapshot(self) -> bytes:
        """Canonical serialization of the full registry state."""
        with self.lock:
            doc = {
                "snapshot_version": "1",
                "global_seq": self.global_seq,
                "actors": [self.actors[k].to_doc() for k in sorted(self.actors)],
                "tokens": [
                    {"token": token, **self.tokens[token]} for token in sorted(self.tokens)
                ],
                "cards": [
                    {"owner": self.cards[key]["owner"], "card": self.cards[key]["card"].to_doc()}
                    for key in sorted(self.cards)
                ],
                "taxonomies": [self.taxonomies[k].to_doc() for k in sorted(self.taxonomies)],
                "cases": [
                    {
                        "case_id": case_id,
                        "records": [
                            {
                                "event": event.to_doc(),
                                "payload": self.case_payloads.get(case_id, {}).get(event.seq),
                            }
                            for event in self.cases[case_id].audit
                        ],
                    }
                    for case_id in sorted(self.cases)
                ],
                "hex_statements": [
                    self.hex_statements[k].to_doc() for k in sorted(self.hex_statements)
                ],
                "advisory_order": list(self.advisory_order),
            }
            return canonical_bytes(doc)

    def write_snapshot(self) -> None:
        self.snapshots.write(self.global_seq, self.export_snapshot())

    def _load_snapshot(self, doc: dict) -> None:
        for actor in doc.get("actors", []):
            self._apply_actor(actor)
        for token in doc.get("tokens", []):
            self._apply_token(token)
        for card in doc.get("cards", []):
            self._apply_card(card)
        for descriptor in doc.get("taxonomies", []):
            self._apply_taxonomy({"descriptor": descriptor})
        for case_entry in doc.get("cases", []):
            for rec in case_entry["records"]:
                self._apply_case(
                    {"case_id": case_entry["case_id"], "event": rec["event"], "payload": rec["payload"]}
                )
        for statement in doc.get("hex_statements", []):
            self._apply_hex({"statement": statement, "recorded_by": "snapshot"})
        self.advisory_order = list(doc.get("advisory_order", self.advisory_order))
        self.global_seq = doc.get("global_seq", self.global_seq)

    # ------------------------------------------------------------------
    # auth and admin
    # ------------------------------------------------------------------

    def check_admin(self, token: Optional[str]) -> None:
        if not self.config.admin_token or not token or not secrets.compare_digest(
            token, self.config.admin_token
        ):
            raise AuthError("admin token required")

    def authenticate(self, token: Optional[str]) -> Actor:
        if not token:
            raise AuthError("bearer token required")
        info = self.tokens.get(token)
        if info is None:
            raise AuthError("unknown token")
        if parse_ts(info["expires_at"]) <= parse_ts(now_ts()):
            raise AuthError("token expired")
        actor = self.actors.get(info["actor_id"])
        if actor is None:
            raise AuthError("token maps to unknown actor")
        return actor

    def authenticate_optional(self, token: Optional[str]) -> Optional[Actor]:
        if not token:
            return None
        return self.authenticate(token)

    def issue_token(
        self,
        actor_id: str,
        display_name: str,
        roles: list[str],
        ttl_days: Optional[float] = None,
    ) -> dict:
        if actor_id == "system":
            raise PayloadInvalid("actor id 'system' is reserved")
        with self.lock:
            self._append(
                "actor",
                {"actor_id": actor_id, "display_name": display_name, "roles": sorted(set(roles))},
            )
            token = secrets.token_urlsafe(32)
            ttl = ttl_days if ttl_days is not None else self.config.token_ttl_days
            body = {
                "token_id": f"tok-{self.global_seq + 1}",
                "token": token,
                "actor_id": actor_id,
                "expires_at": _add_days_ts(self.clock.now(), ttl),
            }
            self._append("token", body)
            return {k: body[k] for k in ("token_id", "token", "actor_id", "expires_at")}

    # ------------------------------------------------------------------
    # cards and taxonomies
    # ------------------------------------------------------------------

    def lint_card_bytes(self, data: bytes) -> tuple[ModelCard, list]:
        card = parse_model_card(data)
        descriptor = self.taxonomies.get((card.taxonomy_ref.id, card.taxonomy_ref.version))
        findings = lint_model_card(
            card, taxonomy=descriptor, license_allowlist=frozenset(self.config.license_allowlist)
        )
        return card, findings

    def register_card(self, owner: Actor, data: bytes, dry_run: bool = False) -> dict:
        if "vendor" not in owner.roles:
            raise RoleNotPermitted("registering model cards requires the vendor role")
        card, findings = self.lint_card_bytes(data)
        registered = False
        if not dry_run and not has_errors(findings):
            with self.lock:
                existing = self.cards.get((card.model_name, card.model_version))
                if existing is not None and existing["owner"] != owner.actor_id:
                    raise RoleNotPermitted(
                        f"card {card.model_name}@{card.model_version} is owned by another vendor"
                    )
                self._append("card", {"owner": owner.actor_id, "card": card.to_doc()})
                registered = True
        return {
            "model": {"name": card.model_name, "version": card.model_version},
            "registered": registered,
            "findings": [f.to_doc() for f in findings],
        }

    def get_card(self, name: str, version: str) -> ModelCard:
        entry = self.cards.get((name, version))
        if entry is None:
            raise NotFoundError(f"no model card for {name}@{version}")
        return entry["card"]

    def register_taxonomy(self, actor: Actor, data: bytes) -> dict:
        if not actor.roles & {"vendor", "committee"}:
            raise RoleNotPermitted("registering taxonomies requires vendor or committee role")
        descriptor = parse_taxonomy(data)
        with self.lock:
            self._append(
                "taxonomy", {"registered_by": actor.actor_id, "descriptor": descriptor.to_doc()}
            )
        return {
            "id": descriptor.id,
            "version": descriptor.version,
            "conformant": is_conformant(descriptor, frozenset(self.config.license_allowlist)),
        }

    def get_taxonomy(self, tax_id: str, version: str) -> TaxonomyDescriptor:
        descriptor = self.taxonomies.get((tax_id, version))
        if descriptor is None:
            raise NotFoundError(f"no taxonomy descriptor {tax_id}@{version}")
        return descriptor

    # ------------------------------------------------------------------
    # engine context
    # ------------------------------------------------------------------

    def _ctx(self) -> EngineContext:
        def alloc_cfe() -> CfeId:
            # peek only: apply_record is the single bump point, so a failure
            # between allocation and the durable append leaves no gap
            year = int(self.clock.now()[:4])
            return CfeId(year=year, sequence=self.cfe_year_seq.get(year, 0) + 1)

        def alloc_advisory() -> str:
            self.next_advisory += 1
            return f"ADV-{self.next_advisory}"

        def assign_cve() -> str:
            self.next_cve_stub += 1
            return f"CVE-STUB-{self.next_cve_stub}"

        return EngineContext(
            clock=self.clock.now,
            alloc_cfe=alloc_cfe,
            alloc_advisory_id=alloc_advisory,
            assign_cve=assign_cve,
            embargo_days=self.config.embargo_days,
        )

    # ------------------------------------------------------------------
    # cases
    # ------------------------------------------------------------------

    def submit_report(self, reporter: Actor, data: bytes) -> dict:
        if "reporter" not in reporter.roles:
            raise RoleNotPermitted("submitting reports requires the reporter role")
        report = parse_report(data)
        if report.reporter_id != reporter.actor_id:
            raise PayloadInvalid("report.reporter_id must match the authenticated actor")
        entry = self.cards.get((report.model_ref.name, report.model_ref.version))
        if entry is None:
            raise UnknownModel(
                f"model {report.model_ref.name}@{report.model_ref.version} is not registered"
            )
        with self.lock:
            self.next_case += 1
            case_id = f"C-{self.next_case}"
            result = submit_report(report, entry["card"], entry["owner"], case_id, self._ctx())
            for event, payload in result.applied:
                self._append_case_record(case_id, event, payload)
            self.sweep_embargoes()
            return self.case_view(case_id, reporter)

    def _visible_case(self, case_id: str, actor: Optional[Actor]) -> CaseFile:
        case = self.cases.get(case_id)
        if case is None:
            raise NotFoundError(f"no case {case_id}")
        view = embargo_view(case, actor)
        if view is None:
            # existence is not disclosed pre-publication
            raise NotFoundError(f"no case {case_id}")
        return case

    def case_view(self, case_id: str, actor: Optional[Actor]) -> dict:
        self.sweep_embargoes()
        case = self._visible_case(case_id, actor)
        return embargo_view(case, actor, self.case_payloads.get(case_id, {}))

    def list_cases(self, actor: Optional[Actor]) -> list[dict]:
        """Every case visible to the actor (public views only, for anonymity)."""
        self.sweep_embargoes()
        views = []
        for case_id in sorted(self.cases, key=lambda c: _trailing_number(c, "C-") or 0):
            view = embargo_view(self.cases[case_id], actor)
            if view is not None:
                views.append(view)
        return views

    def case_actions(self, case_id: str, actor: Actor) -> dict:
        case = self._visible_case(case_id, actor)
        actions: set[str] = set()
        for role in effective_roles(case, actor):
            actions |= {a.value for a in legal_actions(case, role)}
        details = []
        for rule in rules_for(case.track, case.state):
            if rule.action.value in actions:
                details.append(
                    {
                        "action": rule.action.value,
                        "to": rule.target.value,
                        "payload": [f.to_doc() for f in rule.payload],
                    }
                )
        details.sort(key=lambda d: d["action"])
        return {"case_id": case_id, "version": case.version, "actions": details}

    def apply_case_transition(
        self,
        case_id: str,
        actor: Actor,
        action: str,
        payload: Optional[dict],
        expected_version: int,
    ) -> dict:
        try:
            action_enum = Action(action)
        except ValueError:
            raise PayloadInvalid(f"unknown action {action!r}")
        with self.lock:
            case = self._visible_case(case_id, actor)
            if case.version != expected_version:
                raise StaleVersion(expected_version, case.version)
            # role checks run first; cross-aggregate checks (which only guard
            # allocation-free actions) run before anything is persisted
            result = apply_transition(case, action_enum, actor, payload, self._ctx())
            self._validate_registry_payload(case, action_enum, payload or {})
            for event, event_payload in result.applied:
                self._append_case_record(case_id, event, event_payload)
        return self.case_view(case_id, actor)

    def _validate_registry_payload(self, case: CaseFile, action: Action, payload: dict) -> None:
        if action == Action.MARK_FIXED and case.track == "safety":
            statement_id = payload.get("hex_statement_id")
            statement = self.hex_statements.get(statement_id or "")
            if statement is None:
                raise PayloadInvalid(f"hex statement {statement_id!r} is not recorded")
            if format_cfe_id(statement.cfe_id) != case.cfe_id:
                raise PayloadInvalid("hex statement references a different CFE")
            if statement.status != "fixed":
                raise PayloadInvalid("mark_fixed requires a HEX statement with status fixed")

    def attach_case_evidence(
        self,
        case_id: str,
        actor: Actor,
        n: int,
        k: int,
        sampling_protocol: str = "",
        raw_payload: Optional[str] = None,
    ) -> dict:
        with self.lock:
            case = self._visible_case(case_id, actor)
            digest = ""
            if raw_payload is not None:
                digest = self.blobs.put(raw_payload.encode("utf-8"))
            evidence_doc = {
                "party": actor.actor_id,
                "n": n,
                "k": k,
                "sampling_protocol": sampling_protocol,
                "sealed_payload_digest": digest,
            }
            result = attach_evidence(case, actor, evidence_doc, self.clock.now())
            for event, payload in result.applied:
                self._append_case_record(case_id, event, payload)
        return self.case_view(case_id, actor)

    def adjudicate_case(
        self,
        case_id: str,
        actor: Actor,
        threshold: Optional[float] = None,
        alpha: Optional[float] = None,
    ) -> dict:
        with self.lock:
            case = self._visible_case(case_id, actor)
            if "adjudicator" not in effective_roles(case, actor):
                raise RoleNotPermitted("adjudication requires the adjudicator role")
            tau = threshold if threshold is not None else self._card_threshold(case)
            a = alpha if alpha is not None else self.config.alpha
            if case.state != CaseState.ADJUDICATION:
                raise IllegalState(f"case is in {case.state.value}, not Adjudication")
            submitter = _latest_evidence(case, case.participants["reporter"])
            if submitter is None:
                raise IllegalState("no submitter evidence attached")
            vendor = _latest_evidence(case, case.participants["vendor"])
            recommendation = recommend(submitter, vendor, tau, a)
            doc = recommendation.to_doc()
            result = record_recommendation(case, actor, doc, self.clock.now())
            for event, payload in result.applied:
                self._append_case_record(case_id, event, payload)
            return {"case_id": case_id, "recommendation": doc, "version": self.cases[case_id].version}

    def _card_threshold(self, case: CaseFile) -> float:
        entry = self.cards.get((case.model_ref.name, case.model_ref.version))
        if entry is not None:
            for record in entry["card"].evaluation_data:
                rate = record.outputs.get("tolerated_violation_rate")
                if rate is not None:
                    return float(rate)
        return self.config.threshold

    # ------------------------------------------------------------------
    # CFE and HEX
    # ------------------------------------------------------------------

    def cfe_view(self, cfe_text: str, actor: Optional[Actor]) -> dict:
        record = self.cfes.get(cfe_text)
        if record is None:
            raise NotFoundError(f"no CFE record {cfe_text}")
        if record.status == "reserved":
            case = self.cases.get(record.case_id)
            if case is None or embargo_view(case, actor) is None or not _is_privileged(case, actor):
                raise NotFoundError(f"no CFE record {cfe_text}")
        return record.to_doc()

    def cfe_hex_index(self, cfe_text: str, actor: Optional[Actor]) -> list[dict]:
        self.cfe_view(cfe_text, actor)  # visibility check
        return [self.hex_statements[sid].to_doc() for sid in self.hex_by_cfe.get(cfe_text, [])]

    def evaluate_hex(
        self,
        actor: Actor,
        cfe_text: str,
        profile_doc: Optional[dict] = None,
        profile_docs: Optional[list[dict]] = None,
        lineage_graph: Optional[dict[str, str]] = None,
        record: bool = True,
    ) -> list[dict]:
        cfe = self.cfes.get(cfe_text)
        if cfe is None:
            raise NotFoundError(f"no CFE record {cfe_text}")
        docs = list(profile_docs or [])
        if profile_doc is not None:
            docs.insert(0, profile_doc)
        if not docs:
            raise PayloadInvalid("at least one deployment profile is required")
        profiles = [parse_deployment_profile(doc) for doc in docs]
        with self.lock:
            statements = []
            reach = lineage_reach(cfe, lineage_graph) if lineage_graph else None
            for profile in profiles:
                self.next_hex += 1
                statement = evaluate_exposure(
                    cfe,
                    profile,
                    statement_id=f"HEX-{self.next_hex}",
                    issued_at=self.clock.now(),
                    reach=reach,
                )
                statement = self._link_supersession(statement)
                statements.append(statement)
                if record:
                    self._append(
                        "hex", {"recorded_by": actor.actor_id, "statement": statement.to_doc()}
                    )
        return [s.to_doc() for s in statements]

    def _link_supersession(self, statement: HexStatement) -> HexStatement:
        key = (format_cfe_id(statement.cfe_id), statement.deployment_ref)
        previous_id = self.hex_effective.get(key)
        if previous_id is None:
            return statement
        from dataclasses import replace

        return replace(statement, supersedes=previous_id)

    def assert_hex(
        self,
        actor: Actor,
        cfe_text: str,
        deployment_ref: str,
        subcomponent: dict,
        status: str,
        justification: Optional[str] = None,
        impact_statement: Optional[str] = None,
        action_statement: Optional[str] = None,
    ) -> dict:
        cfe = self.cfes.get(cfe_text)
        if cfe is None:
            raise NotFoundError(f"no CFE record {cfe_text}")
        if cfe.status == "reserved":
            raise CfeNotActionable(f"CFE {cfe_text} is not yet published")
        case = self.cases.get(cfe.case_id)
        if case is None or actor.actor_id != case.participants.get("vendor"):
            raise RoleNotPermitted("only the case vendor may assert HEX statements")
        with self.lock:
            self.next_hex += 1
            statement_id = f"HEX-{self.next_hex}"
            issued_at = self.clock.now()
            sub = HexSubcomponent(
                commit=subcomponent.get("commit", ""),
                lifecycle_stage=subcomponent.get("lifecycle_stage", "inference"),
                source=subcomponent.get("source", ""),
            )
            key = (cfe_text, deployment_ref)
            previous_id = self.hex_effective.get(key)
            if previous_id is not None:
                statement = supersede(
                    self.hex_statements[previous_id],
                    status,
                    statement_id=statement_id,
                    issued_at=issued_at,
                    justification=justification,
                    impact_statement=impact_statement,
                    action_statement=action_statement,
                    subcomponent=sub,
                )
            else:
                statement = HexStatement(
                    statement_id=statement_id,
                    cfe_id=cfe.cfe_id,
                    deployment_ref=deployment_ref,
                    subcomponent=sub,
                    status=status,
                    issued_at=issued_at,
                    justification=justification,
                    impact_statement=impact_statement,
                    action_statement=action_statement,
                )
            self._append("hex", {"recorded_by": actor.actor_id, "statement": statement.to_doc()})
            return statement.to_doc()

    # ------------------------------------------------------------------
    # public database and advisory feed
    # ------------------------------------------------------------------

    def export_public_db(self) -> dict:
        public_cfes = [
            self.cfes[key]
            for key in sorted(self.cfes)
            if self.cfes[key].status in ("published", "fixed")
        ]
        advisory_ids = [rec.advisory_id for rec in public_cfes if rec.advisory_id]
        security_advisories = [
            aid
            for aid in self.advisory_order
            if self.advisories[aid].cfe_id is None
        ]
        all_advisories = advisory_ids + [a for a in security_advisories if a not in advisory_ids]
        return {
            "kind": "public_db",
            "as_of_seq": self.global_seq,
            "cfes": [rec.to_doc() for rec in public_cfes],
            "advisories": [
                self.advisories[aid].to_doc() for aid in sorted(all_advisories)
            ],
            "hex_statements": {
                format_cfe_id(rec.cfe_id): [
                    self.hex_statements[sid].to_doc()
                    for sid in self.hex_by_cfe.get(format_cfe_id(rec.cfe_id), [])
                ]
                for rec in public_cfes
            },
        }

    def advisory_feed(self, page_token: Optional[str] = None, page_size: Optional[int] = None) -> dict:
        size = page_size or self.config.page_size
        before = None
        if page_token:
            try:
                decoded = json.loads(base64.urlsafe_b64decode(page_token.encode("ascii")))
                before = int(decoded["before"])
            except Exception:
                raise BadPageToken(f"unintelligible page token {page_token!r}")
        ordered = list(reversed(self.advisory_order))  # newest first
        if before is not None:
            ordered = [aid for aid in ordered if _advisory_number(aid) < before]
        page = ordered[:size]
        next_token = None
        if len(ordered) > size and page:
            next_token = base64.urlsafe_b64encode(
                canonical_bytes({"before": _advisory_number(page[-1])})
            ).decode("ascii")
        return {
            "advisories": [self.advisories[aid].to_doc() for aid in page],
            "next_page_token": next_token,
        }

    # ------------------------------------------------------------------
    # embargo sweep
    # ------------------------------------------------------------------

    def sweep_embargoes(self) -> int:
        """Write committee notifications for expired, still-unpublished embargoes."""
        emitted = 0
        now = parse_ts(now_ts())
        committee = sorted(
            actor_id for actor_id, actor in self.actors.items() if "committee" in actor.roles
        )
        for case_id in sorted(self.cases):
            case = self.cases[case_id]
            if case_id in self._notified or case.embargo is None:
                continue
            if case.state in TERMINAL_STATES or case.state in PUBLIC_STATES:
                continue
            if parse_ts(case.embargo.expires_at) <= now:
                self.outbox.write(
                    {
                        "kind": "embargo_expired",
                        "case_id": case_id,
                        "expires_at": case.embargo.expires_at,
                        "notified_at": now_ts(),
                        "recipients": committee,
                    }
                )
                self._notified.add(case_id)
                emitted += 1
        return emitted

    # ------------------------------------------------------------------
    # meta
    # ------------------------------------------------------------------

    def meta_transition_table(self) -> dict:
        return transition_table_doc()

    def meta_finding_catalogue(self) -> dict:
        return finding_catalogue()

    def close(self) -> None:
        self.log.close()


def _trailing_number(text: str, prefix: str) -> Optional[int]:
    if not text.startswith(prefix):
        return None
    tail = text[len(prefix):]
    return int(tail) if tail.isdigit() else None


def _advisory_number(advisory_id: str) -> int:
    return _trailing_number(advisory_id, "ADV-") or 0


def _latest_evidence(case: CaseFile, party: str) -> Optional[EvidenceSet]:
    for item in reversed(case.evidence):
        if item.party == party:
            return item
    return None


def _is_privileged(case: CaseFile, actor: Optional[Actor]) -> bool:
    if actor is None:
        return False
    return actor.actor_id in case.participant_ids() or bool(
        actor.roles & {"committee", "adjudicator"}
    )


def _add_days_ts(ts: str, days: float) -> str:
    from cfe_registry.timeutil import add_days

    return add_days(ts, days)
