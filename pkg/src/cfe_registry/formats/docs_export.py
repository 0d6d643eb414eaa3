"""Published schema documents for every registry document kind.

Run `python -m cfe_registry.formats.docs_export <output-dir>` to (re)write
the docs tree; a test keeps the committed files in sync with the code.
"""

from __future__ import annotations

import sys
from pathlib import Path

from cfe_registry.domain import vocab
from cfe_registry.engine.actions import transition_table_doc
from cfe_registry.formats.findings import finding_catalogue

_USE_STATEMENT = {
    "type": "object",
    "required": ["who", "what", "how"],
    "properties": {
        "who": {"type": "string", "minLength": 1},
        "what": {"type": "string", "minLength": 1},
        "how": {"type": "string", "minLength": 1, "description": "efficacy statement"},
    },
}

_SEVERITY = {
    "type": "object",
    "required": ["harm_categories", "breadth", "bracket"],
    "properties": {
        "harm_categories": {
            "type": "array",
            "minItems": 1,
            "items": {"enum": sorted(vocab.HARM_CATEGORIES)},
        },
        "breadth": {"enum": list(vocab.BREADTHS)},
        "bracket": {
            "enum": list(vocab.BRACKETS),
            "description": "max(harm row, breadth column) per the severity mapping table",
        },
    },
}

MODEL_CARD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://cfe-registry.dev/schemas/model_card.schema.json",
    "title": "Model card",
    "type": "object",
    "required": [
        "schema_version",
        "model",
        "intent_and_use",
        "scope",
        "evaluation_data",
        "governance",
        "taxonomy_ref",
    ],
    "properties": {
        "schema_version": {"type": "string"},
        "model": {
            "type": "object",
            "required": ["name", "version", "lineage"],
            "properties": {
                "name": {"type": "string", "minLength": 1},
                "version": {"type": "string", "minLength": 1},
                "lineage": {
                    "type": "array",
                    "items": {"type": "string"},
                    "description": "parent commits oldest first; version must be the last element",
                },
            },
        },
        "intent_and_use": {"type": "array", "minItems": 1, "items": _USE_STATEMENT},
        "scope": {
            "type": "object",
            "required": ["exclusions_declared", "exclusions"],
            "properties": {
                "exclusions_declared": {"const": True},
                "exclusions": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["category"],
                        "properties": {
                            "category": {"type": "string", "minLength": 1},
                            "note": {"type": "string"},
                        },
                    },
                },
            },
        },
        "evaluation_data": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "framework_id": {"type": "string"},
                    "framework_version": {"type": "string"},
                    "dataset_ref": {"type": "string"},
                    "outputs": {"type": "object", "additionalProperties": {"type": "number"}},
                    "reproducible": {"type": "boolean"},
                },
            },
        },
        "governance": {
            "type": "object",
            "properties": {
                "security_report_channel": {"type": "string"},
                "safety_report_channel": {"type": "string"},
                "methodology": {"type": "string"},
                "contact": {"type": "string"},
            },
            "anyOf": [
                {"required": ["security_report_channel"]},
                {"required": ["safety_report_channel"]},
            ],
        },
        "taxonomy_ref": {
            "type": "object",
            "required": ["id", "version"],
            "properties": {"id": {"type": "string"}, "version": {"type": "string"}},
        },
        "references": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "uri"],
                "properties": {
                    "kind": {"enum": sorted(vocab.REFERENCE_KINDS)},
                    "uri": {"type": "string", "minLength": 1},
                    "digest": {"type": "string"},
                },
            },
        },
    },
}

TAXONOMY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://cfe-registry.dev/schemas/taxonomy_descriptor.schema.json",
    "title": "Taxonomy descriptor",
    "type": "object",
    "required": [
        "id",
        "version",
        "license_id",
        "open_development",
        "extensible",
        "publishes_raw_responses",
    ],
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "version": {"type": "string", "minLength": 1},
        "license_id": {"type": "string", "minLength": 1},
        "open_development": {"type": "boolean"},
        "extensible": {"type": "boolean"},
        "publishes_raw_responses": {"type": "boolean"},
        "cultural_scope_notes": {"type": "string"},
        "benchmark_integration_uri": {"type": "string"},
    },
    "description": (
        "Conformant iff license_id is in the deployment's permissive allowlist, "
        "extensible is true, and publishes_raw_responses is false."
    ),
}

CFE_RECORD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://cfe-registry.dev/schemas/cfe_record.schema.json",
    "title": "CFE record",
    "type": "object",
    "required": ["cfe_id", "case_id", "model", "status", "reserved_at"],
    "properties": {
        "cfe_id": {"type": "string", "pattern": "^CFE-\\d{4}-\\d{4,}$"},
        "case_id": {"type": "string"},
        "model": {
            "type": "object",
            "required": ["name", "version"],
            "properties": {"name": {"type": "string"}, "version": {"type": "string"}},
        },
        "summary": {"type": "string"},
        "status": {"enum": sorted(vocab.CFE_STATUSES)},
        "severity": {"oneOf": [_SEVERITY, {"type": "null"}]},
        "affected_lineage": {"type": "array", "items": {"type": "string"}},
        "affected_uses": {"type": "array", "items": {"type": "string"}},
        "remediating_commits": {"type": "array", "items": {"type": "string"}},
        "effective_guardrails": {"type": "array", "items": {"type": "string"}},
        "reserved_at": {"type": "string"},
        "published_at": {"type": ["string", "null"]},
        "re_review_at": {"type": ["string", "null"]},
        "advisory_id": {"type": ["string", "null"]},
    },
}

HEX_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://cfe-registry.dev/schemas/hex_statement.schema.json",
    "title": "HEX statement",
    "type": "object",
    "required": ["statement_id", "cfe_id", "deployment_ref", "subcomponent", "status", "issued_at"],
    "properties": {
        "statement_id": {"type": "string"},
        "cfe_id": {"type": "string", "pattern": "^CFE-\\d{4}-\\d{4,}$"},
        "deployment_ref": {"type": "string", "minLength": 1},
        "subcomponent": {
            "type": "object",
            "required": ["commit", "lifecycle_stage"],
            "properties": {
                "commit": {"type": "string", "minLength": 1},
                "lifecycle_stage": {"enum": sorted(vocab.LIFECYCLE_STAGES)},
                "source": {"type": "string"},
            },
        },
        "status": {"enum": sorted(vocab.HEX_STATUSES)},
        "justification": {"enum": sorted(vocab.HEX_JUSTIFICATIONS)},
        "impact_statement": {"type": "string"},
        "action_statement": {"type": "string"},
        "issued_at": {"type": "string"},
        "supersedes": {"type": "string"},
    },
    "allOf": [
        {
            "if": {"properties": {"status": {"const": "unaffected"}}},
            "then": {"required": ["justification"]},
            "else": {"not": {"required": ["justification"]}},
        },
        {
            "if": {"properties": {"status": {"const": "affected"}}},
            "then": {"required": ["impact_statement"]},
            "else": {"not": {"required": ["impact_statement"]}},
        },
    ],
    "description": "Unknown fields are ignored on input and never emitted.",
}

ADVISORY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://cfe-registry.dev/schemas/advisory.schema.json",
    "title": "Advisory",
    "type": "object",
    "required": ["advisory_id", "case_id", "model", "title", "published_at"],
    "properties": {
        "advisory_id": {"type": "string"},
        "case_id": {"type": "string"},
        "model": {
            "type": "object",
            "required": ["name", "version"],
            "properties": {"name": {"type": "string"}, "version": {"type": "string"}},
        },
        "title": {"type": "string", "minLength": 1},
        "body": {"type": "string"},
        "published_at": {"type": "string"},
        "cfe_id": {"type": ["string", "null"], "pattern": "^CFE-\\d{4}-\\d{4,}$"},
        "cve_ref": {"type": ["string", "null"]},
        "severity_bracket": {"enum": list(vocab.BRACKETS) + [None]},
        "links": {"type": "array", "items": {"type": "string"}},
    },
    "anyOf": [{"required": ["cfe_id"]}, {"required": ["cve_ref"]}],
}

SCHEMAS = {
    "model_card": MODEL_CARD_SCHEMA,
    "taxonomy_descriptor": TAXONOMY_SCHEMA,
    "cfe_record": CFE_RECORD_SCHEMA,
    "hex_statement": HEX_SCHEMA,
    "advisory": ADVISORY_SCHEMA,
}


def category_vocabulary_doc() -> dict:
    return {
        "description": (
            "Seeded controlled vocabulary for category tags used in scope "
            "exclusions, report claims, CFE affected uses, and deployment "
            "declared uses. Matching is exact string equality; deployments "
            "may extend the list."
        ),
        "tags": list(vocab.SEEDED_CATEGORY_TAGS),
        "default_license_allowlist": sorted(vocab.DEFAULT_LICENSE_ALLOWLIST),
    }


def export_docs(root: str | Path) -> list[Path]:
    root = Path(root)
    schema_dir = root / "schemas"
    schema_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for kind, schema in SCHEMAS.items():
        path = schema_dir / f"{kind}.schema.json"
        path.write_bytes(_pretty(schema))
        written.append(path)
    for name, doc in (
        ("finding_catalogue.json", finding_catalogue()),
        ("transition_table.json", transition_table_doc()),
        ("category_vocabulary.json", category_vocabulary_doc()),
    ):
        path = root / name
        path.write_bytes(_pretty(doc))
        written.append(path)
    return written


def _pretty(doc) -> bytes:
    import json

    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False).encode("utf-8") + b"\n"


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "docs"
    for path in export_docs(target):
        print(path)
