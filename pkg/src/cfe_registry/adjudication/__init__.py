"""Statistical kernel for the adjudication panel: exact bounds and bias tests."""

from cfe_registry.adjudication.stats import (
    BiasVerdict,
    ValidityVerdict,
    bias_test,
    validity_check,
    violation_rate_lower_bound,
)
from cfe_registry.adjudication.recommend import Recommendation, adjudicate

__all__ = [
    "BiasVerdict",
    "Recommendation",
    "ValidityVerdict",
    "adjudicate",
    "bias_test",
    "validity_check",
    "violation_rate_lower_bound",
]
