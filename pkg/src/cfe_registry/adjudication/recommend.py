"""Panel recommendation logic.

Takes the contested case's evidence and produces advice; it never moves the
case itself — the human adjudicator applies the transition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from cfe_registry.adjudication.stats import BiasVerdict, ValidityVerdict, bias_test, validity_check
from cfe_registry.domain.types import EvidenceSet
from cfe_registry.errors import IllegalState

ACCEPT = "accept"
REJECT = "reject"
REQUEST_VENDOR_DATA = "request_vendor_data"
FLAG_BIASED = "flag_biased"


@dataclass(frozen=True)
class Recommendation:
    decision: str
    threshold: float
    alpha: float
    evidence_used: str  # vendor | pooled | none
    validity: Optional[ValidityVerdict] = None
    bias: Optional[BiasVerdict] = None

    def to_doc(self) -> dict:
        return {
            "decision": self.decision,
            "threshold": self.threshold,
            "alpha": self.alpha,
            "evidence_used": self.evidence_used,
            "validity": self.validity.to_doc() if self.validity else None,
            "bias": self.bias.to_doc() if self.bias else None,
        }


def _latest_for(evidence: list[EvidenceSet], party: str) -> Optional[EvidenceSet]:
    for item in reversed(evidence):
        if item.party == party:
            return item
    return None


def recommend(
    submitter: EvidenceSet,
    vendor: Optional[EvidenceSet],
    threshold: float,
    alpha: float,
) -> Recommendation:
    if vendor is None:
        return Recommendation(
            decision=REQUEST_VENDOR_DATA,
            threshold=threshold,
            alpha=alpha,
            evidence_used="none",
        )
    bias = bias_test(submitter, vendor, alpha)
    vendor_validity = validity_check(vendor, threshold, alpha)
    if bias.biased and bias.direction == "submitter_higher" and not vendor_validity.supported:
        return Recommendation(
            decision=FLAG_BIASED,
            threshold=threshold,
            alpha=alpha,
            evidence_used="vendor",
            validity=vendor_validity,
            bias=bias,
        )
    # vendor counter-samples are the corrective for submitter bias: use them
    # alone when the pair is unbiased, otherwise pool both sides
    if bias.biased:
        pooled = EvidenceSet(party="pooled", n=submitter.n + vendor.n, k=submitter.k + vendor.k)
        validity = validity_check(pooled, threshold, alpha)
        evidence_used = "pooled"
    else:
        validity = vendor_validity
        evidence_used = "vendor"
    return Recommendation(
        decision=ACCEPT if validity.supported else REJECT,
        threshold=threshold,
        alpha=alpha,
        evidence_used=evidence_used,
        validity=validity,
        bias=bias,
    )


def adjudicate(case, threshold: float, alpha: float) -> Recommendation:
    """Recommendation for a case under adjudication.

    `case` supplies state, the evidence list, and the participant map; the
    newest evidence set per party is the operative one.
    """
    if case.state != "Adjudication":
        raise IllegalState(f"case is in {case.state}, not Adjudication")
    submitter = _latest_for(list(case.evidence), case.participants["reporter"])
    if submitter is None:
        raise IllegalState("no submitter evidence attached")
    vendor = _latest_for(list(case.evidence), case.participants["vendor"])
    return recommend(submitter, vendor, threshold, alpha)
