"""HEX statement documents: tolerant parsing (unknown fields ignored), strict emission."""

from __future__ import annotations

from typing import Optional

from cfe_registry.domain import vocab
from cfe_registry.errors import IdSyntaxError
from cfe_registry.exposure.types import DeploymentProfile, HexStatement, HexSubcomponent
from cfe_registry.formats.canonical import canonical_bytes
from cfe_registry.formats.findings import FindingCode
from cfe_registry.formats.identifiers import CfeId, parse_cfe_id
from cfe_registry.formats.reader import TreeReader, finish, open_document
from cfe_registry.domain.types import UseStatement


def _read_cfe_id(reader: TreeReader, key: str = "cfe_id") -> Optional[CfeId]:
    text = reader.require_str(key)
    if not text:
        return None
    try:
        return parse_cfe_id(text)
    except IdSyntaxError as exc:
        reader.flag(FindingCode.INVALID_IDENTIFIER, str(exc), f"{reader.path}/{key}")
        return None


def parse_hex(data: bytes | str | dict) -> HexStatement:
    root = open_document(data)

    statement_id = root.require_str("statement_id")
    cfe_id = _read_cfe_id(root)
    deployment_ref = root.require_str("deployment_ref")
    issued_at = root.require_str("issued_at")
    supersedes = root.optional("supersedes", str)
    action_statement = root.optional("action_statement", str)

    subcomponent = None
    sub = root.section("subcomponent")
    if sub is not None:
        commit = sub.require_str("commit")
        stage = sub.token("lifecycle_stage", vocab.LIFECYCLE_STAGES, FindingCode.UNKNOWN_LIFECYCLE_STAGE)
        source = sub.optional("source", str, "") or ""
        if commit and stage:
            subcomponent = HexSubcomponent(commit=commit, lifecycle_stage=stage, source=source)

    status = root.token("status", vocab.HEX_STATUSES, FindingCode.UNKNOWN_STATUS)
    justification = root.optional("justification", str)
    impact_statement = root.optional("impact_statement", str)

    if justification is not None and justification not in vocab.HEX_JUSTIFICATIONS:
        root.flag(
            FindingCode.UNKNOWN_JUSTIFICATION,
            f"justification {justification!r} outside {sorted(vocab.HEX_JUSTIFICATIONS)}",
            "/justification",
        )
        justification = None
    if status == "unaffected" and justification is None:
        root.flag(
            FindingCode.JUSTIFICATION_REQUIRED,
            "status unaffected requires a justification token",
            "/justification",
        )
    if status is not None and status != "unaffected" and justification is not None:
        root.flag(
            FindingCode.JUSTIFICATION_NOT_ALLOWED,
            f"status {status!r} must not carry a justification",
            "/justification",
        )
    if status == "affected" and not impact_statement:
        root.flag(
            FindingCode.IMPACT_STATEMENT_REQUIRED,
            "status affected requires an impact statement",
            "/impact_statement",
        )
    if status is not None and status != "affected" and impact_statement is not None:
        root.flag(
            FindingCode.IMPACT_STATEMENT_NOT_ALLOWED,
            f"status {status!r} must not carry an impact statement",
            "/impact_statement",
        )

    return finish(
        root,
        lambda: HexStatement(
            statement_id=statement_id,
            cfe_id=cfe_id,
            deployment_ref=deployment_ref,
            subcomponent=subcomponent,
            status=status,
            issued_at=issued_at,
            justification=justification,
            impact_statement=impact_statement,
            action_statement=action_statement,
            supersedes=supersedes,
        ),
    )


def emit_hex(statement: HexStatement) -> bytes:
    return canonical_bytes(statement.to_doc())


def parse_deployment_profile(data: bytes | str | dict) -> DeploymentProfile:
    root = open_document(data)

    deployment_ref = root.require_str("deployment_ref")
    model_commit = root.require_str("model_commit")

    declared_use = None
    use = root.section("declared_use")
    if use is not None:
        who = use.require_str("who")
        what = use.require_str("what")
        how = use.require_str("how")
        if who and what and how:
            declared_use = UseStatement(who=who, what=what, how=how)
        else:
            use.flag(FindingCode.INCOMPLETE_USE_STATEMENT, "declared_use needs who/what/how")

    use_categories = frozenset(root.str_list("use_categories", required=False))
    guardrails = frozenset(root.str_list("guardrails", required=False))
    tuning_lineage = tuple(root.str_list("tuning_lineage", required=False))

    return finish(
        root,
        lambda: DeploymentProfile(
            deployment_ref=deployment_ref,
            model_commit=model_commit,
            declared_use=declared_use,
            use_categories=use_categories,
            guardrails=guardrails,
            tuning_lineage=tuning_lineage,
        ),
    )
