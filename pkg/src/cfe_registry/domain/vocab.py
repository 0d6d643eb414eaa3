"""Closed enumerations and the seeded controlled vocabularies.

Category tags are matched by exact string equality everywhere (scope
exclusions, report claims, CFE affected uses, deployment declared uses);
free text alongside them is informational only. The seeded list below is
documentation, not an enforced closed set.
"""

from __future__ import annotations

HARM_CATEGORIES = frozenset(
    {
        "loss_of_life",
        "physical_or_mental_injury",
        "social_disruption",
        "economic_disruption",
        "environmental_harm",
        "bias_in_decision_making",
        "harmful_content",
    }
)

BREADTHS = ("individual", "group", "societal")

BRACKETS = ("low", "medium", "high", "critical")

ROLES = frozenset({"reporter", "vendor", "committee", "adjudicator", "consumer", "public"})

REFERENCE_KINDS = frozenset({"aibom", "safety_audit", "security_audit", "other"})

CLAIMED_TRACKS = frozenset({"security", "safety", "unknown"})

CFE_STATUSES = frozenset({"reserved", "published", "under_investigation", "fixed"})

HEX_STATUSES = frozenset({"affected", "unaffected", "fixed", "under_investigation"})

HEX_JUSTIFICATIONS = frozenset(
    {
        "model_use_not_approved",
        "guardrails_in_place",
        "tuned_out",
        "hazard_not_in_model_lineage",
    }
)

LIFECYCLE_STAGES = frozenset({"development", "training", "fine_tuning", "inference"})

# Scope verdict tag for reports outside the card's declared use with no CIA claim.
UNDECLARED_USE = "undeclared_use"

# Seeded category-tag vocabulary; deployments may extend it.
SEEDED_CATEGORY_TAGS = (
    "prompt_injection",
    "jailbreak",
    "multilingual_output",
    "nsfw_generation",
    "demographic_bias",
    "misinformation",
    "pii_exposure",
    "self_harm_content",
    "violence_incitement",
    "copyright_output",
    "medical_advice",
    "code_generation",
)

DEFAULT_LICENSE_ALLOWLIST = frozenset(
    {
        "CC-BY-4.0",
        "CC-BY-SA-4.0",
        "CC0-1.0",
        "MIT",
        "Apache-2.0",
        "CDLA-Permissive-2.0",
    }
)
