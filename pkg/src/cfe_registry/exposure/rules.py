"""Exposure derivation for deployments against a CFE record.

Status rules are evaluated in a fixed precedence order (lineage > use >
tuning > guardrails) so the strongest non-applicability claim wins and every
(cfe, deployment) pair has one canonical answer.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional

from cfe_registry.domain.types import CfeRecord
from cfe_registry.errors import CfeNotActionable, CyclicLineage, SupersedeOrderViolation
from cfe_registry.exposure.types import DeploymentProfile, HexStatement, HexSubcomponent
from cfe_registry.timeutil import parse_ts

ACTIONABLE_STATUSES = frozenset({"published", "fixed", "under_investigation"})

AFFECTED = "affected"
REMEDIATED = "remediated"
CLEAN = "clean"

Reach = Callable[[str], str]


def _membership_reach(cfe: CfeRecord) -> Reach:
    def reach(commit: str) -> str:
        return AFFECTED if commit in cfe.affected_lineage else CLEAN

    return reach


def _derive(cfe: CfeRecord, profile: DeploymentProfile, reach: Reach) -> tuple[str, Optional[str], Optional[str], HexSubcomponent]:
    if cfe.status not in ACTIONABLE_STATUSES:
        raise CfeNotActionable(f"CFE {cfe.cfe_id} has status {cfe.status!r}")

    verdicts = {commit: reach(commit) for commit in (profile.model_commit, *profile.tuning_lineage)}
    affected_commits = [c for c, v in verdicts.items() if v == AFFECTED]
    hazard_in_lineage = bool(affected_commits)
    remediated = (
        any(v == REMEDIATED for v in verdicts.values())
        or any(t in cfe.remediating_commits for t in profile.tuning_lineage)
    )

    affected_tunes = [t for t in profile.tuning_lineage if verdicts[t] == AFFECTED]
    if affected_tunes and profile.model_commit not in affected_commits:
        subcomponent = HexSubcomponent(
            commit=affected_tunes[0], lifecycle_stage="fine_tuning", source=profile.deployment_ref
        )
    elif hazard_in_lineage:
        subcomponent = HexSubcomponent(
            commit=profile.model_commit, lifecycle_stage="training", source=profile.deployment_ref
        )
    else:
        subcomponent = HexSubcomponent(
            commit=profile.model_commit, lifecycle_stage="inference", source=profile.deployment_ref
        )

    # (1) hazard absent from the deployment's whole commit lineage
    if not hazard_in_lineage and not remediated:
        return "unaffected", "hazard_not_in_model_lineage", None, subcomponent
    # (2) none of the deployment's declared uses are affected uses
    matched_uses = sorted(profile.use_categories & cfe.affected_uses)
    if not matched_uses:
        return "unaffected", "model_use_not_approved", None, subcomponent
    # (3) a remediating commit lies on the deployment's lineage path
    if remediated:
        if cfe.status == "fixed":
            return "fixed", None, None, subcomponent
        return "unaffected", "tuned_out", None, subcomponent
    # (4) a vendor-asserted effective guardrail is deployed
    if profile.guardrails & cfe.effective_guardrails:
        return "unaffected", "guardrails_in_place", None, subcomponent
    # (5) the hazard itself is still being investigated
    if cfe.status == "under_investigation":
        return "under_investigation", None, None, subcomponent
    # (6) exposed
    impact = "deployment use matches affected use: " + ", ".join(matched_uses)
    return "affected", None, impact, subcomponent


def evaluate_exposure(
    cfe: CfeRecord,
    profile: DeploymentProfile,
    statement_id: str = "HEX-0",
    issued_at: str = "1970-01-01T00:00:00.000000Z",
    reach: Optional[Reach] = None,
) -> HexStatement:
    status, justification, impact, subcomponent = _derive(
        cfe, profile, reach if reach is not None else _membership_reach(cfe)
    )
    return HexStatement(
        statement_id=statement_id,
        cfe_id=cfe.cfe_id,
        deployment_ref=profile.deployment_ref,
        subcomponent=subcomponent,
        status=status,
        issued_at=issued_at,
        justification=justification,
        impact_statement=impact,
    )


def lineage_reach(cfe: CfeRecord, lineage_graph: dict[str, str]) -> Reach:
    """Reach verdicts over the child->parent lineage forest.

    Per-node recurrence: an introducing commit is affected; a remediating
    commit is remediated when the hazard sits at or above it, clean
    otherwise; every other commit inherits its parent's verdict. A commit
    reintroducing the hazard below a remediation is affected again.
    """
    _check_acyclic(lineage_graph)
    memo: dict[str, str] = {}

    def verdict_of(commit: str, parent_verdict: str) -> str:
        if commit in cfe.remediating_commits:
            if commit in cfe.affected_lineage or parent_verdict in (AFFECTED, REMEDIATED):
                return REMEDIATED
            return CLEAN
        if commit in cfe.affected_lineage:
            return AFFECTED
        return parent_verdict

    def reach(commit: str) -> str:
        chain: list[str] = []
        current: Optional[str] = commit
        while current is not None and current not in memo:
            chain.append(current)
            current = lineage_graph.get(current)
        verdict = memo.get(current, CLEAN) if current is not None else CLEAN
        for node in reversed(chain):
            verdict = verdict_of(node, verdict)
            memo[node] = verdict
        return memo.get(commit, verdict)

    return reach


def _check_acyclic(lineage_graph: dict[str, str]) -> None:
    seen_done: set[str] = set()
    for start in lineage_graph:
        if start in seen_done:
            continue
        path: set[str] = set()
        current: Optional[str] = start
        while current is not None and current not in seen_done:
            if current in path:
                raise CyclicLineage(f"lineage cycle through {current!r}")
            path.add(current)
            current = lineage_graph.get(current)
        seen_done.update(path)


def hex_for_variants(
    cfe: CfeRecord,
    lineage_graph: dict[str, str],
    profiles: Iterable[DeploymentProfile],
    statement_ids: Optional[Iterable[str]] = None,
    issued_at: str = "1970-01-01T00:00:00.000000Z",
) -> list[HexStatement]:
    """One statement per profile, with hazard inheritance across variants."""
    reach = lineage_reach(cfe, lineage_graph)
    profiles = list(profiles)
    ids = list(statement_ids) if statement_ids is not None else [f"HEX-{i}" for i in range(len(profiles))]
    return [
        evaluate_exposure(cfe, profile, statement_id=sid, issued_at=issued_at, reach=reach)
        for profile, sid in zip(profiles, ids)
    ]


def supersede(
    old: HexStatement,
    new_status: str,
    statement_id: str,
    issued_at: str,
    justification: Optional[str] = None,
    impact_statement: Optional[str] = None,
    action_statement: Optional[str] = None,
    subcomponent: Optional[HexSubcomponent] = None,
) -> HexStatement:
    if parse_ts(issued_at) <= parse_ts(old.issued_at):
        raise SupersedeOrderViolation(
            f"new statement must be issued strictly after {old.issued_at}"
        )
    return HexStatement(
        statement_id=statement_id,
        cfe_id=old.cfe_id,
        deployment_ref=old.deployment_ref,
        subcomponent=subcomponent if subcomponent is not None else old.subcomponent,
        status=new_status,
        issued_at=issued_at,
        justification=justification,
        impact_statement=impact_statement,
        action_statement=action_statement,
        supersedes=old.statement_id,
    )
