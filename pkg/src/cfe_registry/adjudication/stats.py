"""Exact statistics over violation counts.

Desk-scale n makes exact methods cheap, so nothing here is asymptotic: the
one-sided lower confidence bound comes from bisecting the exact binomial
tail, and the bias test is Fisher's exact test with integer-exact tie
handling. No special-function libraries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from cfe_registry.domain.types import EvidenceSet
from cfe_registry.errors import DomainError

_BISECT_TOL = 1e-13


def _check_counts(k: int, n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or not isinstance(k, int) or isinstance(k, bool):
        raise DomainError("k and n must be integers")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise DomainError(f"k must satisfy 0 <= k <= n, got k={k} n={n}")


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def binomial_tail(k: int, n: int, p: float) -> float:
    """P(X >= k) for X ~ Binomial(n, p), by direct summation.

    The first term is computed in log space, the rest by the pmf ratio
    recurrence, so the sum stays stable for small p and large n.
    """
    if k <= 0:
        return 1.0
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    log_term = (
        math.lgamma(n + 1)
        - math.lgamma(k + 1)
        - math.lgamma(n - k + 1)
        + k * math.log(p)
        + (n - k) * math.log1p(-p)
    )
    term = math.exp(log_term)
    total = term
    ratio = p / (1.0 - p)
    for j in range(k, n):
        term *= (n - j) / (j + 1) * ratio
        total += term
    return min(total, 1.0)


def violation_rate_lower_bound(k: int, n: int, alpha: float) -> float:
    """One-sided exact lower confidence bound on the violation rate.

    Zero when no violations were observed; otherwise the unique p solving
    P(X >= k | Binomial(n, p)) = alpha. Monotone nondecreasing in k and
    nonincreasing in alpha.
    """
    _check_counts(k, n)
    _check_alpha(alpha)
    if k == 0:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > _BISECT_TOL:
        mid = (lo + hi) / 2.0
        if binomial_tail(k, n, mid) < alpha:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class ValidityVerdict:
    lower_bound: float
    threshold: float
    alpha: float
    supported: bool

    def to_doc(self) -> dict:
        return {
            "lower_bound": self.lower_bound,
            "threshold": self.threshold,
            "alpha": self.alpha,
            "supported": self.supported,
        }


def validity_check(evidence: EvidenceSet, threshold: float, alpha: float) -> ValidityVerdict:
    """Supported iff the exact lower bound strictly exceeds the claimed threshold."""
    if not 0 <= threshold < 1:
        raise DomainError(f"threshold must lie in [0, 1), got {threshold}")
    lower = violation_rate_lower_bound(evidence.k, evidence.n, alpha)
    return ValidityVerdict(
        lower_bound=lower,
        threshold=threshold,
        alpha=alpha,
        supported=lower > threshold,
    )


@dataclass(frozen=True)
class BiasVerdict:
    p_value: float
    alpha: float
    biased: bool
    direction: str  # submitter_higher | vendor_higher | none

    def to_doc(self) -> dict:
        return {
            "p_value": self.p_value,
            "alpha": self.alpha,
            "biased": self.biased,
            "direction": self.direction,
        }


def fisher_exact_two_sided(k: int, n: int, k2: int, n2: int) -> float:
    """Two-sided Fisher exact p over the 2x2 table (k, n-k; k2, n2-k2).

    Sums the probability of every table (margins fixed) no more likely than
    the observed one. Probabilities share the denominator C(N, n), so the
    "no more likely" comparison is done on exact integer numerators; floats
    appear only in the final division.
    """
    _check_counts(k, n)
    _check_counts(k2, n2)
    total = n + n2
    successes = k + k2
    lo = max(0, n - (total - successes))
    hi = min(n, successes)
    numerators = [
        math.comb(successes, x) * math.comb(total - successes, n - x) for x in range(lo, hi + 1)
    ]
    observed = numerators[k - lo]
    numerator_sum = sum(v for v in numerators if v <= observed)
    return numerator_sum / math.comb(total, n)


def bias_test(submitter: EvidenceSet, vendor: EvidenceSet, alpha: float) -> BiasVerdict:
    _check_alpha(alpha)
    p_value = fisher_exact_two_sided(submitter.k, submitter.n, vendor.k, vendor.n)
    cross_sub = submitter.k * vendor.n
    cross_ven = vendor.k * submitter.n
    if cross_sub > cross_ven:
        direction = "submitter_higher"
    elif cross_sub < cross_ven:
        direction = "vendor_higher"
    else:
        direction = "none"
    return BiasVerdict(p_value=p_value, alpha=alpha, biased=p_value < alpha, direction=direction)
