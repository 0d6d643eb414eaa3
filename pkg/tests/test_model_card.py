import json
import random

import pytest

from cfe_registry.domain.types import EvaluationRecord, TaxonomyDescriptor
from cfe_registry.errors import DocumentSyntaxError, SchemaError
from cfe_registry.formats.canonical import canonical_loads
from cfe_registry.formats.findings import FindingCode, finding_catalogue
from cfe_registry.formats.model_card import emit_model_card, lint_model_card, parse_model_card

from conftest import make_card
from generators import gen_model_card

MINIMAL = {
    "schema_version": "1.0",
    "model": {"name": "tiny", "version": "v1", "lineage": ["v1"]},
    "intent_and_use": [{"who": "devs", "what": "autocomplete", "how": "suggestions free of secrets"}],
    "scope": {"exclusions_declared": True, "exclusions": []},
    "evaluation_data": [],
    "governance": {"security_report_channel": "mailto:sec@example.com"},
    "taxonomy_ref": {"id": "t", "version": "1"},
}


def test_minimal_valid_card_parses():
    card = parse_model_card(json.dumps(MINIMAL))
    assert card.model_name == "tiny"
    assert card.exclusions_declared
    assert card.references is None


def test_missing_scope_section():
    doc = {k: v for k, v in MINIMAL.items() if k != "scope"}
    with pytest.raises(SchemaError) as exc:
        parse_model_card(json.dumps(doc))
    assert [(f.code, f.path) for f in exc.value.findings] == [
        (FindingCode.MISSING_REQUIRED_FIELD, "/scope")
    ]


def test_use_statement_without_how():
    doc = json.loads(json.dumps(MINIMAL))
    doc["intent_and_use"] = [{"who": "devs", "what": "autocomplete"}]
    with pytest.raises(SchemaError) as exc:
        parse_model_card(json.dumps(doc))
    assert [f.code for f in exc.value.findings] == [FindingCode.INCOMPLETE_USE_STATEMENT]


def test_malformed_bytes_raise_syntax_error():
    with pytest.raises(DocumentSyntaxError):
        parse_model_card(b"{nope")


@pytest.mark.parametrize(
    "mutate,expected",
    [
        (lambda d: d.pop("schema_version"), FindingCode.MISSING_REQUIRED_FIELD),
        (lambda d: d["scope"].update(exclusions_declared=False), FindingCode.EXCLUSIONS_NOT_DECLARED),
        (lambda d: d.update(intent_and_use=[]), FindingCode.EMPTY_INTENT_AND_USE),
        (lambda d: d.update(governance={}), FindingCode.NO_GOVERNANCE_CHANNEL),
        (lambda d: d["model"].update(lineage=["x"]), FindingCode.VERSION_NOT_IN_LINEAGE),
        (lambda d: d.update(references=[{"kind": "blog", "uri": "https://x"}]), FindingCode.UNKNOWN_REFERENCE_KIND),
        (lambda d: d["model"].update(name=7), FindingCode.INVALID_FIELD_TYPE),
    ],
)
def test_single_defects_reported(mutate, expected):
    doc = json.loads(json.dumps(MINIMAL))
    mutate(doc)
    with pytest.raises(SchemaError) as exc:
        parse_model_card(json.dumps(doc))
    assert expected in {f.code for f in exc.value.findings}


def test_error_completeness_reports_all_injected_defects():
    """k independent defects produce k findings, not just the first."""
    doc = json.loads(json.dumps(MINIMAL))
    del doc["scope"]
    doc["intent_and_use"] = [{"who": "devs", "what": "autocomplete"}]
    doc["governance"] = {}
    doc["model"]["lineage"] = ["other"]
    with pytest.raises(SchemaError) as exc:
        parse_model_card(json.dumps(doc))
    codes = sorted(f.code.value for f in exc.value.findings)
    assert codes == [
        "INCOMPLETE_USE_STATEMENT",
        "MISSING_REQUIRED_FIELD",
        "NO_GOVERNANCE_CHANNEL",
        "VERSION_NOT_IN_LINEAGE",
    ]


def test_round_trip_identity_generated_cards():
    rng = random.Random(11)
    for _ in range(250):
        doc = gen_model_card(rng)
        card = parse_model_card(json.dumps(doc))
        again = parse_model_card(emit_model_card(card))
        assert again == card
        assert canonical_loads(emit_model_card(again)) == canonical_loads(emit_model_card(card))


# -- lint ---------------------------------------------------------------------


def test_eval_without_outputs_is_error_finding():
    card = make_card(evaluation=(EvaluationRecord(framework_id="bench", outputs={}),))
    findings = lint_model_card(card)
    assert FindingCode.EVAL_WITHOUT_OUTPUTS in {f.code for f in findings}
    assert all(f.severity == "error" for f in findings if f.code == FindingCode.EVAL_WITHOUT_OUTPUTS)


def test_fully_populated_card_lints_clean():
    card = make_card(evaluation=(EvaluationRecord(framework_id="bench", outputs={"score": 0.9}),))
    taxonomy = TaxonomyDescriptor(
        id="open-hazards",
        version="1",
        license_id="CC-BY-4.0",
        open_development=True,
        extensible=True,
        publishes_raw_responses=False,
    )
    assert lint_model_card(card, taxonomy) == []


def test_missing_safety_channel_is_warning():
    card = make_card(safety_channel="")
    findings = lint_model_card(card)
    match = [f for f in findings if f.code == FindingCode.NO_SAFETY_CHANNEL]
    assert len(match) == 1 and match[0].severity == "warning"


def test_no_references_is_warning():
    card = make_card(references=())
    findings = lint_model_card(card)
    match = [f for f in findings if f.code == FindingCode.NO_REFERENCES]
    assert len(match) == 1 and match[0].severity == "warning"


def test_nonconformant_taxonomy_is_error():
    card = make_card()
    taxonomy = TaxonomyDescriptor(
        id="open-hazards",
        version="1",
        license_id="Proprietary-EULA",
        open_development=False,
        extensible=False,
        publishes_raw_responses=True,
    )
    findings = lint_model_card(card, taxonomy)
    match = [f for f in findings if f.code == FindingCode.NONCONFORMANT_TAXONOMY]
    assert len(match) == 1 and match[0].severity == "error"


def test_finding_catalogue_is_stable_and_complete():
    catalogue = finding_catalogue()
    codes = {entry["code"] for entry in catalogue["findings"]}
    assert codes == {code.value for code in FindingCode}
    assert all(entry["severity"] in ("error", "warning") for entry in catalogue["findings"])
    assert catalogue["catalogue_version"] == "1"
