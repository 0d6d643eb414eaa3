"""Model card parsing, emission, and the lint pass."""

from __future__ import annotations

from typing import Optional

from cfe_registry.domain import vocab
from cfe_registry.domain.rules import validate_taxonomy
from cfe_registry.domain.types import (
    EvaluationRecord,
    Exclusion,
    GovernanceInfo,
    ModelCard,
    ReferenceEntry,
    TaxonomyDescriptor,
    TaxonomyRef,
    UseStatement,
)
from cfe_registry.formats.canonical import canonical_bytes
from cfe_registry.formats.findings import Finding, FindingCode
from cfe_registry.formats.reader import TreeReader, finish, open_document


def _read_use_statement(reader: TreeReader) -> Optional[UseStatement]:
    clauses = {}
    complete = True
    for clause in ("who", "what", "how"):
        value = reader.optional(clause, str)
        if value is None or value.strip() == "":
            reader.flag(
                FindingCode.INCOMPLETE_USE_STATEMENT,
                f"use statement lacks a non-empty {clause!r} clause",
                f"{reader.path}/{clause}",
            )
            complete = False
        else:
            clauses[clause] = value
    return UseStatement(**clauses) if complete else None


def _read_outputs(reader: TreeReader) -> dict[str, float]:
    raw = reader.optional("outputs", dict, {})
    outputs: dict[str, float] = {}
    for name, value in (raw or {}).items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            reader.flag(
                FindingCode.INVALID_FIELD_TYPE,
                f"metric {name!r} must be numeric",
                f"{reader.path}/outputs/{name}",
            )
        else:
            outputs[name] = float(value)
    return outputs


def parse_model_card(data: bytes | str | dict) -> ModelCard:
    """Parse and validate; on schema violations raises SchemaError listing all of them."""
    root = open_document(data)

    schema_version = root.require_str("schema_version")

    model_name = ""
    model_version = ""
    lineage: list[str] = []
    model = root.section("model")
    if model is not None:
        model_name = model.require_str("name")
        model_version = model.require_str("version")
        lineage = model.str_list("lineage")
        if model_version and (not lineage or lineage[-1] != model_version):
            model.flag(
                FindingCode.VERSION_NOT_IN_LINEAGE,
                "model.version must be the last element of model.lineage",
                f"{model.path}/lineage",
            )

    uses = []
    use_readers = root.sections("intent_and_use")
    if isinstance(root.tree, dict) and root.tree.get("intent_and_use") == []:
        root.flag(
            FindingCode.EMPTY_INTENT_AND_USE,
            "intent_and_use must contain at least one use statement",
            "/intent_and_use",
        )
    for reader in use_readers:
        use = _read_use_statement(reader)
        if use is not None:
            uses.append(use)

    exclusions: list[Exclusion] = []
    exclusions_declared = False
    scope = root.section("scope")
    if scope is not None:
        declared = scope.require("exclusions_declared", bool)
        exclusions_declared = bool(declared)
        if declared is False:
            scope.flag(
                FindingCode.EXCLUSIONS_NOT_DECLARED,
                "exclusions_declared must be true; declare an empty list for no exclusions",
                f"{scope.path}/exclusions_declared",
            )
        for ex_reader in scope.sections("exclusions"):
            category = ex_reader.require_str("category")
            note = ex_reader.optional("note", str, "") or ""
            if category:
                exclusions.append(Exclusion(category=category, note=note))

    evaluations = []
    for ev_reader in root.sections("evaluation_data"):
        evaluations.append(
            EvaluationRecord(
                framework_id=ev_reader.optional("framework_id", str, "") or "",
                framework_version=ev_reader.optional("framework_version", str, "") or "",
                dataset_ref=ev_reader.optional("dataset_ref", str, "") or "",
                outputs=_read_outputs(ev_reader),
                reproducible=bool(ev_reader.optional("reproducible", bool, False)),
            )
        )

    governance = GovernanceInfo()
    gov = root.section("governance")
    if gov is not None:
        governance = GovernanceInfo(
            security_report_channel=gov.optional("security_report_channel", str, "") or "",
            safety_report_channel=gov.optional("safety_report_channel", str, "") or "",
            methodology=gov.optional("methodology", str, "") or "",
            contact=gov.optional("contact", str, "") or "",
        )
        if not governance.has_channel():
            gov.flag(
                FindingCode.NO_GOVERNANCE_CHANNEL,
                "governance must name a security_report_channel or safety_report_channel",
            )

    taxonomy_ref = TaxonomyRef(id="", version="")
    tax = root.section("taxonomy_ref")
    if tax is not None:
        taxonomy_ref = TaxonomyRef(id=tax.require_str("id"), version=tax.require_str("version"))

    references: Optional[list[ReferenceEntry]] = None
    if isinstance(root.tree, dict) and "references" in root.tree:
        references = []
        for ref_reader in root.sections("references"):
            kind = ref_reader.token("kind", vocab.REFERENCE_KINDS, FindingCode.UNKNOWN_REFERENCE_KIND)
            uri = ref_reader.require_str("uri")
            digest = ref_reader.optional("digest", str, "") or ""
            if kind and uri:
                references.append(ReferenceEntry(kind=kind, uri=uri, digest=digest))

    return finish(
        root,
        lambda: ModelCard(
            schema_version=schema_version,
            model_name=model_name,
            model_version=model_version,
            lineage=tuple(lineage),
            intent_and_use=tuple(uses),
            exclusions_declared=exclusions_declared,
            scope_exclusions=tuple(exclusions),
            evaluation_data=tuple(evaluations),
            governance=governance,
            taxonomy_ref=taxonomy_ref,
            references=tuple(references) if references is not None else None,
        ),
    )


def emit_model_card(card: ModelCard) -> bytes:
    return canonical_bytes(card.to_doc())


def lint_model_card(
    card: ModelCard,
    taxonomy: Optional[TaxonomyDescriptor] = None,
    license_allowlist: frozenset[str] = vocab.DEFAULT_LICENSE_ALLOWLIST,
) -> list[Finding]:
    """Advisory findings beyond schema validity.

    Taxonomy conformance is only checked when the referenced descriptor is
    supplied (the service resolves it from its registered descriptors; the
    offline linter takes it as an optional input).
    """
    findings: list[Finding] = []
    for i, record in enumerate(card.evaluation_data):
        if record.framework_id and not record.outputs:
            findings.append(
                Finding(
                    code=FindingCode.EVAL_WITHOUT_OUTPUTS,
                    path=f"/evaluation_data/{i}",
                    message=f"framework {record.framework_id!r} named but no outputs reported",
                )
            )
    if not card.governance.safety_report_channel:
        findings.append(
            Finding(
                code=FindingCode.NO_SAFETY_CHANNEL,
                path="/governance/safety_report_channel",
                message="no safety report channel declared",
            )
        )
    if not card.references:
        findings.append(
            Finding(
                code=FindingCode.NO_REFERENCES,
                path="/references",
                message="no AIBOM, safety audit, or security audit references",
            )
        )
    if taxonomy is not None:
        violations = validate_taxonomy(taxonomy, license_allowlist)
        if violations:
            params = ", ".join(sorted(v.code.value for v in violations))
            findings.append(
                Finding(
                    code=FindingCode.NONCONFORMANT_TAXONOMY,
                    path="/taxonomy_ref",
                    message=f"taxonomy {taxonomy.id}@{taxonomy.version} is nonconformant: {params}",
                )
            )
    return findings
