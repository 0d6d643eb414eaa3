import math

import pytest
from hypothesis import given, settings, strategies as st

from cfe_registry.adjudication.stats import (
    bias_test,
    binomial_tail,
    fisher_exact_two_sided,
    validity_check,
    violation_rate_lower_bound,
)
from cfe_registry.domain.types import EvidenceSet
from cfe_registry.errors import DomainError

from oracles import fisher_oracle, lower_bound_oracle

# Frozen from the exact-rational bisection oracle in oracles.py.
LB_3_10_005 = 0.0872644339141503
LB_35_100_005 = 0.27075446181155555


# -- violation_rate_lower_bound ------------------------------------------------


def test_zero_violations_bound_is_zero():
    assert violation_rate_lower_bound(0, 20, 0.05) == 0.0


def test_single_trial_closed_form():
    # P(X >= 1 | Binomial(1, p)) = p, so the bound equals alpha exactly
    assert violation_rate_lower_bound(1, 1, 0.05) == pytest.approx(0.05, abs=1e-12)


def test_all_violations_closed_form():
    assert violation_rate_lower_bound(20, 20, 0.05) == pytest.approx(0.05 ** (1 / 20), abs=1e-9)
    assert violation_rate_lower_bound(20, 20, 0.05) == pytest.approx(0.8609, abs=5e-5)


def test_intermediate_value_matches_oracle():
    assert violation_rate_lower_bound(3, 10, 0.05) == pytest.approx(LB_3_10_005, abs=1e-9)


@pytest.mark.parametrize(
    "k,n,alpha",
    [(-1, 10, 0.05), (11, 10, 0.05), (0, 0, 0.05), (1, 10, 0.0), (1, 10, 1.0), (1, 10, -3)],
)
def test_domain_errors(k, n, alpha):
    with pytest.raises(DomainError):
        violation_rate_lower_bound(k, n, alpha)


def test_against_oracle_small_grid():
    for n in (1, 2, 5, 9, 17, 30):
        for k in range(n + 1):
            for alpha in (0.01, 0.05, 0.1):
                ours = violation_rate_lower_bound(k, n, alpha)
                assert 0.0 <= ours <= 1.0
                assert ours == pytest.approx(lower_bound_oracle(k, n, alpha), abs=1e-9)


def test_monotone_in_k_and_alpha():
    # The bound solves tail(p) = alpha with tail increasing in p, so it is
    # nondecreasing in k and in alpha (shrinking alpha = more confidence =
    # a more conservative, lower bound; k=n=1 gives bound = alpha exactly).
    for n in (5, 12, 33):
        previous = -1.0
        for k in range(n + 1):
            bound = violation_rate_lower_bound(k, n, 0.05)
            assert bound >= previous
            previous = bound
        for k in (1, n // 2 or 1, n):
            assert violation_rate_lower_bound(k, n, 0.01) <= violation_rate_lower_bound(k, n, 0.05)
            assert violation_rate_lower_bound(k, n, 0.05) <= violation_rate_lower_bound(k, n, 0.10)


def test_binomial_tail_matches_direct_sum():
    for n in (4, 16):
        for k in range(n + 1):
            for p in (0.01, 0.3, 0.77):
                direct = sum(
                    math.comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(k, n + 1)
                )
                assert binomial_tail(k, n, p) == pytest.approx(direct, abs=1e-12)


# -- validity_check --------------------------------------------------------------


def test_supported_when_bound_exceeds_threshold():
    verdict = validity_check(EvidenceSet("s", 20, 20), threshold=0.01, alpha=0.05)
    assert verdict.supported and verdict.lower_bound == pytest.approx(0.8609, abs=5e-5)


def test_zero_violations_never_supported():
    verdict = validity_check(EvidenceSet("s", 1000, 0), threshold=0.01, alpha=0.05)
    assert not verdict.supported and verdict.lower_bound == 0.0


def test_boundary_is_strict():
    verdict = validity_check(EvidenceSet("s", 1, 1), threshold=0.05, alpha=0.05)
    assert verdict.lower_bound == pytest.approx(0.05, abs=1e-12)
    assert not verdict.supported


def test_threshold_domain_checked():
    with pytest.raises(DomainError):
        validity_check(EvidenceSet("s", 10, 1), threshold=1.0, alpha=0.05)


# -- bias_test --------------------------------------------------------------------


def test_extreme_bias_detected():
    verdict = bias_test(EvidenceSet("s", 5, 5), EvidenceSet("v", 100, 0), alpha=0.05)
    assert verdict.p_value == pytest.approx(1 / math.comb(105, 5), abs=1e-20)
    assert verdict.p_value == pytest.approx(1.0e-8, abs=5e-9)
    assert verdict.biased and verdict.direction == "submitter_higher"


def test_identical_tables_not_biased():
    verdict = bias_test(EvidenceSet("s", 10, 3), EvidenceSet("v", 10, 3), alpha=0.05)
    assert verdict.p_value == 1.0
    assert not verdict.biased and verdict.direction == "none"


def test_no_violations_anywhere():
    verdict = bias_test(EvidenceSet("s", 10, 0), EvidenceSet("v", 10, 0), alpha=0.05)
    assert verdict.p_value == 1.0
    assert not verdict.biased and verdict.direction == "none"


def test_moderate_difference_not_biased():
    verdict = bias_test(EvidenceSet("s", 100, 40), EvidenceSet("v", 100, 35), alpha=0.05)
    assert verdict.p_value == pytest.approx(0.559205122295941, abs=1e-12)
    assert not verdict.biased


def test_symmetry_p_value_and_direction_flip():
    a, b = EvidenceSet("s", 20, 9), EvidenceSet("v", 20, 2)
    forward = bias_test(a, b, 0.05)
    backward = bias_test(b, a, 0.05)
    assert forward.p_value == pytest.approx(backward.p_value, abs=1e-15)
    assert forward.direction == "submitter_higher"
    assert backward.direction == "vendor_higher"


def test_against_enumeration_oracle_exhaustive_small():
    for n in range(1, 9):
        for n2 in range(1, 9):
            for k in range(n + 1):
                for k2 in range(n2 + 1):
                    ours = fisher_exact_two_sided(k, n, k2, n2)
                    assert 0.0 <= ours <= 1.0
                    assert ours == pytest.approx(fisher_oracle(k, n, k2, n2), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=60),
    st.integers(min_value=1, max_value=60),
    st.data(),
)
def test_against_enumeration_oracle_random_margins(n, n2, data):
    k = data.draw(st.integers(min_value=0, max_value=n))
    k2 = data.draw(st.integers(min_value=0, max_value=n2))
    assert fisher_exact_two_sided(k, n, k2, n2) == pytest.approx(
        fisher_oracle(k, n, k2, n2), abs=1e-12
    )
