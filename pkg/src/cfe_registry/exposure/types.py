"""HEX statement and deployment profile value objects."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from cfe_registry.domain import vocab
from cfe_registry.domain.types import UseStatement, _require
from cfe_registry.formats.identifiers import CfeId, format_cfe_id


@dataclass(frozen=True)
class HexSubcomponent:
    commit: str
    lifecycle_stage: str
    source: str = ""

    def __post_init__(self):
        _require(self.commit.strip() != "", "subcomponent commit is empty")
        _require(
            self.lifecycle_stage in vocab.LIFECYCLE_STAGES,
            f"unknown lifecycle stage {self.lifecycle_stage!r}",
        )

    def to_doc(self) -> dict:
        return {"commit": self.commit, "lifecycle_stage": self.lifecycle_stage, "source": self.source}


@dataclass(frozen=True)
class HexStatement:
    statement_id: str
    cfe_id: CfeId
    deployment_ref: str
    subcomponent: HexSubcomponent
    status: str
    issued_at: str
    justification: Optional[str] = None
    impact_statement: Optional[str] = None
    action_statement: Optional[str] = None
    supersedes: Optional[str] = None

    def __post_init__(self):
        _require(self.status in vocab.HEX_STATUSES, f"unknown HEX status {self.status!r}")
        if self.status == "unaffected":
            _require(self.justification is not None, "status unaffected requires a justification")
            _require(
                self.justification in vocab.HEX_JUSTIFICATIONS,
                f"unknown justification {self.justification!r}",
            )
        else:
            _require(self.justification is None, "only status unaffected carries a justification")
        if self.status == "affected":
            _require(bool(self.impact_statement), "status affected requires an impact statement")
        else:
            _require(self.impact_statement is None, "only status affected carries an impact statement")

    def to_doc(self) -> dict:
        doc = {
            "statement_id": self.statement_id,
            "cfe_id": format_cfe_id(self.cfe_id),
            "deployment_ref": self.deployment_ref,
            "subcomponent": self.subcomponent.to_doc(),
            "status": self.status,
            "issued_at": self.issued_at,
        }
        if self.justification is not None:
            doc["justification"] = self.justification
        if self.impact_statement is not None:
            doc["impact_statement"] = self.impact_statement
        if self.action_statement is not None:
            doc["action_statement"] = self.action_statement
        if self.supersedes is not None:
            doc["supersedes"] = self.supersedes
        return doc


@dataclass(frozen=True)
class DeploymentProfile:
    deployment_ref: str
    model_commit: str
    declared_use: UseStatement
    use_categories: frozenset[str] = frozenset()
    guardrails: frozenset[str] = frozenset()
    tuning_lineage: tuple[str, ...] = ()

    def __post_init__(self):
        _require(self.model_commit.strip() != "", "model_commit is empty")
        _require(self.deployment_ref.strip() != "", "deployment_ref is empty")

    def to_doc(self) -> dict:
        return {
            "deployment_ref": self.deployment_ref,
            "model_commit": self.model_commit,
            "declared_use": self.declared_use.to_doc(),
            "use_categories": sorted(self.use_categories),
            "guardrails": sorted(self.guardrails),
            "tuning_lineage": list(self.tuning_lineage),
        }
