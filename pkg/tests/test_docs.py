import json
import random
from pathlib import Path

import jsonschema
import pytest

from cfe_registry.formats.docs_export import SCHEMAS, export_docs

from generators import GENERATORS

DOCS = Path(__file__).resolve().parent.parent / "docs"


def test_committed_docs_in_sync_with_code(tmp_path):
    export_docs(tmp_path)
    fresh = sorted(p.relative_to(tmp_path) for p in tmp_path.rglob("*.json"))
    committed = sorted(p.relative_to(DOCS) for p in DOCS.rglob("*.json"))
    assert fresh == committed
    for rel in fresh:
        assert (tmp_path / rel).read_bytes() == (DOCS / rel).read_bytes(), f"{rel} is stale"


@pytest.mark.parametrize("kind", sorted(GENERATORS))
def test_generated_documents_validate_against_published_schema(kind):
    schema = SCHEMAS[kind]
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    rng = random.Random(hash(kind) % 2**32)
    for _ in range(200):
        doc = GENERATORS[kind](rng)
        errors = [e.message for e in validator.iter_errors(doc)]
        assert not errors, errors[:3]


def test_schema_rejects_missing_scope():
    validator = jsonschema.Draft202012Validator(SCHEMAS["model_card"])
    doc = GENERATORS["model_card"](random.Random(1))
    del doc["scope"]
    assert any("scope" in e.message for e in validator.iter_errors(doc))
