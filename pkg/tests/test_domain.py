from itertools import combinations

import pytest

from cfe_registry.domain import vocab
from cfe_registry.domain.rules import (
    Track,
    check_scope,
    classify_report,
    severity_bracket,
    validate_taxonomy,
)
from cfe_registry.domain.types import ImpactClaim, Severity, TaxonomyDescriptor, UseStatement
from cfe_registry.errors import EmptyHarmSet, UnknownModel
from cfe_registry.formats.findings import FindingCode

from conftest import make_card, make_report

BRACKET_RANK = {"low": 0, "medium": 1, "high": 2, "critical": 3}


# -- classify_report ---------------------------------------------------------


def test_cia_only_routes_to_security():
    report = make_report(harms=frozenset(), cia=("c",), categories=frozenset({"pii_exposure"}))
    assert classify_report(report, make_card()) is Track.SECURITY


def test_harms_only_routes_to_safety():
    report = make_report(harms=frozenset({"bias_in_decision_making"}))
    assert classify_report(report, make_card()) is Track.SAFETY


def test_mixed_claim_is_ambiguous():
    report = make_report(harms=frozenset({"harmful_content"}), cia=("i",))
    assert classify_report(report, make_card()) is Track.AMBIGUOUS


def test_unresolvable_model_ref_raises():
    report = make_report(model=("other", "v9"))
    with pytest.raises(UnknownModel):
        classify_report(report, make_card())


def test_classification_partition_exhaustive():
    """All 2^3 x 2^7 flag combinations: total, deterministic, correctly partitioned."""
    card = make_card()
    harm_list = sorted(vocab.HARM_CATEGORIES)
    for cia_bits in range(8):
        cia = tuple(flag for flag, bit in zip("cia", (4, 2, 1)) if cia_bits & bit)
        for harm_bits in range(2 ** len(harm_list)):
            harms = frozenset(h for i, h in enumerate(harm_list) if harm_bits & (1 << i))
            if not cia and not harms:
                with pytest.raises(ValueError):
                    make_report(harms=harms, cia=cia)
                continue
            report = make_report(harms=harms, cia=cia)
            track = classify_report(report, card)
            assert track is classify_report(report, card)  # deterministic
            if cia and not harms:
                assert track is Track.SECURITY
            elif harms and not cia:
                assert track is Track.SAFETY
            else:
                assert track is Track.AMBIGUOUS


# -- check_scope -------------------------------------------------------------


def test_declared_exclusion_matches():
    card = make_card(exclusions=("prompt_injection",))
    report = make_report(
        harms=frozenset({"harmful_content"}), categories=frozenset({"prompt_injection"})
    )
    verdict = check_scope(report, card)
    assert not verdict.in_scope
    assert verdict.matched_exclusion == "prompt_injection"


def test_empty_exclusion_list_always_in_scope():
    card = make_card()
    for harms in combinations(sorted(vocab.HARM_CATEGORIES), 2):
        report = make_report(harms=frozenset(harms))
        assert check_scope(report, card).in_scope


def test_undeclared_use_without_cia_is_out_of_scope():
    report = make_report(harms=frozenset({"harmful_content"}), within_use=False, categories=frozenset())
    verdict = check_scope(report, make_card())
    assert not verdict.in_scope
    assert verdict.matched_exclusion == vocab.UNDECLARED_USE


def test_undeclared_use_with_cia_stays_in_scope():
    report = make_report(harms=frozenset(), cia=("c",), within_use=False, categories=frozenset())
    assert check_scope(report, make_card()).in_scope


def test_exclusion_match_wins_over_undeclared_use():
    card = make_card(exclusions=("nsfw_generation",))
    report = make_report(
        harms=frozenset({"harmful_content"}),
        categories=frozenset({"nsfw_generation"}),
        within_use=False,
    )
    assert check_scope(report, card).matched_exclusion == "nsfw_generation"


# -- severity_bracket --------------------------------------------------------


def test_table_maximum():
    assert severity_bracket({"loss_of_life"}, "societal").bracket == "critical"


def test_table_minimum_row():
    assert severity_bracket({"economic_disruption"}, "individual").bracket == "low"


def test_injury_group_is_high():
    # frozen from the mapping table: max(row(injury)=high, col(group)=medium)
    assert severity_bracket({"physical_or_mental_injury"}, "group").bracket == "high"


def test_empty_harm_set_rejected():
    with pytest.raises(EmptyHarmSet):
        severity_bracket(set(), "group")


def _all_harm_subsets():
    harm_list = sorted(vocab.HARM_CATEGORIES)
    for bits in range(1, 2 ** len(harm_list)):
        yield frozenset(h for i, h in enumerate(harm_list) if bits & (1 << i))


def test_monotone_in_breadth_and_harms_exhaustive():
    """Enlarging the harm set or the breadth never lowers the bracket (<= 3 * 2^7 inputs)."""
    for harms in _all_harm_subsets():
        previous = -1
        for breadth in vocab.BREADTHS:
            rank = BRACKET_RANK[severity_bracket(harms, breadth).bracket]
            assert rank >= previous
            previous = rank
        for extra in sorted(vocab.HARM_CATEGORIES - harms):
            for breadth in vocab.BREADTHS:
                assert (
                    BRACKET_RANK[severity_bracket(harms | {extra}, breadth).bracket]
                    >= BRACKET_RANK[severity_bracket(harms, breadth).bracket]
                )


def test_severity_type_rejects_inconsistent_bracket():
    with pytest.raises(ValueError):
        Severity(
            harm_categories=frozenset({"loss_of_life"}), breadth="societal", bracket="low"
        )


# -- validate_taxonomy -------------------------------------------------------


def _descriptor(**overrides):
    base = dict(
        id="open-hazards",
        version="1",
        license_id="CC-BY-4.0",
        open_development=True,
        extensible=True,
        publishes_raw_responses=False,
        cultural_scope_notes="global scope",
    )
    base.update(overrides)
    return TaxonomyDescriptor(**base)


def test_conformant_descriptor_yields_no_findings():
    assert validate_taxonomy(_descriptor()) == []


def test_raw_responses_flagged():
    findings = validate_taxonomy(_descriptor(publishes_raw_responses=True))
    assert [f.code for f in findings] == [FindingCode.RAW_RESPONSES_PUBLISHED]


def test_nonpermissive_license_flagged():
    findings = validate_taxonomy(_descriptor(license_id="Proprietary-EULA"))
    assert [f.code for f in findings] == [FindingCode.NON_PERMISSIVE_LICENSE]


def test_one_finding_per_violated_parameter():
    findings = validate_taxonomy(
        _descriptor(license_id="Proprietary-EULA", extensible=False, publishes_raw_responses=True)
    )
    assert {f.code for f in findings} == {
        FindingCode.NON_PERMISSIVE_LICENSE,
        FindingCode.NOT_EXTENSIBLE,
        FindingCode.RAW_RESPONSES_PUBLISHED,
    }


def test_use_statement_requires_all_clauses():
    with pytest.raises(ValueError):
        UseStatement(who="users", what="generate", how="  ")


def test_impact_claim_requires_some_flag():
    with pytest.raises(ValueError):
        ImpactClaim()
