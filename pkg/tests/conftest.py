from __future__ import annotations

import pytest

from cfe_registry.domain.types import (
    Actor,
    EvaluationRecord,
    Exclusion,
    GovernanceInfo,
    ImpactClaim,
    ModelCard,
    ModelRef,
    ReferenceEntry,
    Report,
    TaxonomyRef,
    UseStatement,
)
from cfe_registry.engine.core import EngineContext
from cfe_registry.formats.identifiers import CfeId
from cfe_registry.timeutil import MonotonicClock


def make_card(
    name="demo",
    version="v1",
    lineage=("c0", "v1"),
    exclusions=(),
    safety_channel="mailto:safety@example.com",
    security_channel="mailto:security@example.com",
    references=(ReferenceEntry(kind="safety_audit", uri="https://example.com/audit"),),
    evaluation=(),
) -> ModelCard:
    return ModelCard(
        schema_version="1.0",
        model_name=name,
        model_version=version,
        lineage=tuple(lineage),
        intent_and_use=(
            UseStatement(
                who="analysts",
                what="summarize documents",
                how="summaries free of demographic bias and safe for work",
            ),
        ),
        exclusions_declared=True,
        scope_exclusions=tuple(Exclusion(category=c) for c in exclusions),
        evaluation_data=tuple(evaluation),
        governance=GovernanceInfo(
            security_report_channel=security_channel, safety_report_channel=safety_channel
        ),
        taxonomy_ref=TaxonomyRef(id="open-hazards", version="1"),
        references=tuple(references) if references else None,
    )


def make_report(
    reporter="alice",
    model=("demo", "v1"),
    harms=frozenset({"bias_in_decision_making"}),
    cia=(),
    categories=frozenset({"demographic_bias"}),
    within_use=True,
    breadth="group",
    evidence=None,
) -> Report:
    return Report(
        reporter_id=reporter,
        model_ref=ModelRef(*model),
        claimed_track="unknown",
        impact=ImpactClaim(
            confidentiality_loss="c" in cia,
            integrity_loss="i" in cia,
            availability_loss="a" in cia,
            harm_categories=frozenset(harms),
            categories=frozenset(categories),
            within_declared_use=within_use,
            breadth=breadth,
        ),
        narrative="observed hazardous behavior",
        reported_at="2025-06-01T00:00:00.000000Z",
        evidence=evidence,
    )


class FakeAllocators:
    def __init__(self, year=2025):
        self.year = year
        self.cfe = 0
        self.advisory = 0
        self.cve = 0

    def alloc_cfe(self) -> CfeId:
        self.cfe += 1
        return CfeId(self.year, self.cfe)

    def alloc_advisory(self) -> str:
        self.advisory += 1
        return f"ADV-{self.advisory}"

    def assign_cve(self) -> str:
        self.cve += 1
        return f"CVE-STUB-{self.cve}"


@pytest.fixture
def engine_ctx():
    clock = MonotonicClock()
    alloc = FakeAllocators()
    return EngineContext(
        clock=clock.now,
        alloc_cfe=alloc.alloc_cfe,
        alloc_advisory_id=alloc.alloc_advisory,
        assign_cve=alloc.assign_cve,
        embargo_days=90.0,
    )


VENDOR = Actor(actor_id="vendor-1", display_name="Acme", roles=frozenset({"vendor"}))
REPORTER = Actor(actor_id="alice", display_name="Alice", roles=frozenset({"reporter"}))
COMMITTEE = Actor(actor_id="carol", display_name="Carol", roles=frozenset({"committee"}))
ADJUDICATOR = Actor(actor_id="judy", display_name="Judy", roles=frozenset({"adjudicator"}))
CONSUMER = Actor(actor_id="conny", display_name="Conny", roles=frozenset({"consumer"}))
OUTSIDER = Actor(actor_id="mallory", display_name="Mallory", roles=frozenset({"public"}))
