"""Parsing, validation, linting, and deterministic serialization of registry documents."""

from cfe_registry.formats.canonical import (
    CanonicalDocument,
    DOCUMENT_KINDS,
    canonical_bytes,
    canonical_digest,
    canonical_loads,
    serialize_canonical,
)
from cfe_registry.formats.findings import Finding, FindingCode, finding_catalogue
from cfe_registry.formats.identifiers import CfeId, format_cfe_id, parse_cfe_id

__all__ = [
    "CanonicalDocument",
    "DOCUMENT_KINDS",
    "CfeId",
    "Finding",
    "FindingCode",
    "canonical_bytes",
    "canonical_digest",
    "canonical_loads",
    "finding_catalogue",
    "format_cfe_id",
    "parse_cfe_id",
    "serialize_canonical",
]
