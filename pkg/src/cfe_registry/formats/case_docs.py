"""Parsers and emitters for reports, evidence, taxonomy descriptors, CFE records, advisories."""

from __future__ import annotations

from typing import Optional

from cfe_registry.domain import vocab
from cfe_registry.domain.types import (
    Advisory,
    CfeRecord,
    EvidenceSet,
    ImpactClaim,
    ModelRef,
    Report,
    Severity,
    TaxonomyDescriptor,
    bracket_for,
)
from cfe_registry.formats.canonical import canonical_bytes
from cfe_registry.formats.findings import FindingCode
from cfe_registry.formats.hex_doc import _read_cfe_id
from cfe_registry.formats.reader import TreeReader, finish, open_document


def _read_model_ref(root: TreeReader, key: str = "model") -> Optional[ModelRef]:
    section = root.section(key)
    if section is None:
        return None
    name = section.require_str("name")
    version = section.require_str("version")
    if name and version:
        return ModelRef(name=name, version=version)
    return None


def _read_harm_categories(reader: TreeReader, key: str = "harm_categories") -> frozenset[str]:
    tags = reader.str_list(key, required=False)
    valid = []
    for i, tag in enumerate(tags):
        if tag not in vocab.HARM_CATEGORIES:
            reader.flag(
                FindingCode.UNKNOWN_HARM_CATEGORY,
                f"unknown harm category {tag!r}",
                f"{reader.path}/{key}/{i}",
            )
        else:
            valid.append(tag)
    return frozenset(valid)


def parse_evidence(data: bytes | str | dict) -> EvidenceSet:
    root = open_document(data)
    party = root.require_str("party")
    n = root.require("n", int)
    k = root.require("k", int)
    protocol = root.optional("sampling_protocol", str, "") or ""
    digest = root.optional("sealed_payload_digest", str, "") or ""
    if n is not None and n < 1:
        root.flag(FindingCode.INVALID_FIELD_VALUE, "n must be >= 1", "/n")
        n = None
    if k is not None and k < 0:
        root.flag(FindingCode.INVALID_FIELD_VALUE, "k must be >= 0", "/k")
        k = None
    if n is not None and k is not None and k > n:
        root.flag(FindingCode.K_EXCEEDS_N, f"k={k} exceeds n={n}", "/k")
    return finish(
        root,
        lambda: EvidenceSet(party=party, n=n, k=k, sampling_protocol=protocol, sealed_payload_digest=digest),
    )


def _read_impact(root: TreeReader) -> Optional[ImpactClaim]:
    impact = root.section("impact")
    if impact is None:
        return None
    confidentiality = bool(impact.optional("confidentiality_loss", bool, False))
    integrity = bool(impact.optional("integrity_loss", bool, False))
    availability = bool(impact.optional("availability_loss", bool, False))
    harms = _read_harm_categories(impact)
    categories = frozenset(impact.str_list("categories", required=False))
    within = impact.optional("within_declared_use", bool, True)
    breadth = impact.token("breadth", frozenset(vocab.BREADTHS), FindingCode.UNKNOWN_BREADTH, required=False)
    if not (confidentiality or integrity or availability or harms):
        impact.flag(
            FindingCode.INVALID_FIELD_VALUE,
            "impact must set at least one CIA flag or harm category",
        )
        return None
    return ImpactClaim(
        confidentiality_loss=confidentiality,
        integrity_loss=integrity,
        availability_loss=availability,
        harm_categories=harms,
        categories=categories,
        within_declared_use=bool(within) if within is not None else True,
        breadth=breadth or "individual",
    )


def parse_report(data: bytes | str | dict) -> Report:
    root = open_document(data)
    reporter_id = root.require_str("reporter_id")
    model_ref = _read_model_ref(root)
    claimed_track = root.token("claimed_track", vocab.CLAIMED_TRACKS, FindingCode.UNKNOWN_TRACK)
    impact = _read_impact(root)
    narrative = root.optional("narrative", str, "") or ""
    reported_at = root.require_str("reported_at")
    evidence = None
    if isinstance(root.tree, dict) and root.tree.get("evidence") is not None:
        evidence_tree = root.require("evidence", dict)
        if evidence_tree is not None:
            sub = TreeReader(evidence_tree, root.findings, "/evidence")
            party = sub.optional("party", str, "") or reporter_id
            n = sub.require("n", int)
            k = sub.require("k", int)
            protocol = sub.optional("sampling_protocol", str, "") or ""
            digest = sub.optional("sealed_payload_digest", str, "") or ""
            if n is not None and k is not None:
                if n < 1 or k < 0 or k > n:
                    sub.flag(FindingCode.K_EXCEEDS_N, f"need 0 <= k <= n, n >= 1; got k={k} n={n}")
                else:
                    evidence = EvidenceSet(
                        party=party, n=n, k=k, sampling_protocol=protocol, sealed_payload_digest=digest
                    )
    return finish(
        root,
        lambda: Report(
            reporter_id=reporter_id,
            model_ref=model_ref,
            claimed_track=claimed_track,
            impact=impact,
            narrative=narrative,
            reported_at=reported_at,
            evidence=evidence,
        ),
    )


def emit_report(report: Report) -> bytes:
    return canonical_bytes(report.to_doc())


def parse_taxonomy(data: bytes | str | dict) -> TaxonomyDescriptor:
    root = open_document(data)
    tax_id = root.require_str("id")
    version = root.require_str("version")
    license_id = root.require_str("license_id")
    open_dev = root.require("open_development", bool)
    extensible = root.require("extensible", bool)
    raw = root.require("publishes_raw_responses", bool)
    notes = root.optional("cultural_scope_notes", str, "") or ""
    benchmark_uri = root.optional("benchmark_integration_uri", str)
    return finish(
        root,
        lambda: TaxonomyDescriptor(
            id=tax_id,
            version=version,
            license_id=license_id,
            open_development=bool(open_dev),
            extensible=bool(extensible),
            publishes_raw_responses=bool(raw),
            cultural_scope_notes=notes,
            benchmark_integration_uri=benchmark_uri,
        ),
    )


def emit_taxonomy(descriptor: TaxonomyDescriptor) -> bytes:
    return canonical_bytes(descriptor.to_doc())


def _read_severity(root: TreeReader, key: str = "severity") -> Optional[Severity]:
    raw = root.optional(key, dict)
    if raw is None:
        return None
    reader = TreeReader(raw, root.findings, f"{root.path}/{key}")
    harms = _read_harm_categories(reader)
    breadth = reader.token("breadth", frozenset(vocab.BREADTHS), FindingCode.UNKNOWN_BREADTH)
    bracket = reader.token("bracket", frozenset(vocab.BRACKETS), FindingCode.UNKNOWN_BRACKET)
    if not harms or breadth is None or bracket is None:
        if not harms:
            reader.flag(FindingCode.INVALID_FIELD_VALUE, "severity requires harm categories")
        return None
    expected = bracket_for(harms, breadth)
    if bracket != expected:
        reader.flag(
            FindingCode.INVALID_FIELD_VALUE,
            f"bracket {bracket!r} does not match mapping table ({expected!r})",
            f"{reader.path}/bracket",
        )
        return None
    return Severity(harm_categories=harms, breadth=breadth, bracket=bracket)


def parse_cfe_record(data: bytes | str | dict) -> CfeRecord:
    root = open_document(data)
    cfe_id = _read_cfe_id(root)
    case_id = root.require_str("case_id")
    model_ref = _read_model_ref(root)
    summary = root.optional("summary", str, "") or ""
    status = root.token("status", vocab.CFE_STATUSES, FindingCode.UNKNOWN_CFE_STATUS)
    severity = _read_severity(root)
    affected_lineage = frozenset(root.str_list("affected_lineage", required=False))
    affected_uses = frozenset(root.str_list("affected_uses", required=False))
    remediating = frozenset(root.str_list("remediating_commits", required=False))
    guardrails = frozenset(root.str_list("effective_guardrails", required=False))
    reserved_at = root.require_str("reserved_at")
    published_at = root.optional("published_at", str)
    re_review_at = root.optional("re_review_at", str)
    advisory_id = root.optional("advisory_id", str)
    return finish(
        root,
        lambda: CfeRecord(
            cfe_id=cfe_id,
            case_id=case_id,
            model_ref=model_ref,
            summary=summary,
            status=status,
            severity=severity,
            affected_lineage=affected_lineage,
            affected_uses=affected_uses,
            remediating_commits=remediating,
            effective_guardrails=guardrails,
            reserved_at=reserved_at,
            published_at=published_at,
            re_review_at=re_review_at,
            advisory_id=advisory_id,
        ),
    )


def emit_cfe_record(record: CfeRecord) -> bytes:
    return canonical_bytes(record.to_doc())


def parse_advisory(data: bytes | str | dict) -> Advisory:
    root = open_document(data)
    advisory_id = root.require_str("advisory_id")
    case_id = root.require_str("case_id")
    model_ref = _read_model_ref(root)
    title = root.require_str("title")
    body = root.optional("body", str, "") or ""
    published_at = root.require_str("published_at")
    cfe_id = None
    if isinstance(root.tree, dict) and root.tree.get("cfe_id") is not None:
        cfe_id = _read_cfe_id(root)
    cve_ref = root.optional("cve_ref", str)
    bracket = root.token("severity_bracket", frozenset(vocab.BRACKETS), FindingCode.UNKNOWN_BRACKET, required=False)
    links = tuple(root.str_list("links", required=False))
    if cfe_id is None and not cve_ref:
        root.flag(
            FindingCode.MISSING_REQUIRED_FIELD,
            "advisory must reference a cfe_id or cve_ref",
            "/cfe_id",
        )
    return finish(
        root,
        lambda: Advisory(
            advisory_id=advisory_id,
            case_id=case_id,
            model_ref=model_ref,
            title=title,
            body=body,
            published_at=published_at,
            cfe_id=cfe_id,
            cve_ref=cve_ref,
            severity_bracket=bracket,
            links=links,
        ),
    )


def emit_advisory(advisory: Advisory) -> bytes:
    return canonical_bytes(advisory.to_doc())
