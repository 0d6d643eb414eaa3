"""Case states across the shared, safety, and security tracks."""

from __future__ import annotations

from enum import Enum


class CaseState(str, Enum):
    # shared
    SUBMITTED = "Submitted"
    CLOSED_INVALID = "ClosedInvalid"
    WITHDRAWN = "Withdrawn"
    VENDOR_TRIAGE = "VendorTriage"
    PUBLISHED = "Published"
    FIXED = "Fixed"
    # safety track
    VENDOR_ACKNOWLEDGED = "VendorAcknowledged"
    CFE_REQUESTED = "CfeRequested"
    CFE_ASSIGNED = "CfeAssigned"
    VENDOR_REJECTED = "VendorRejected"
    ADJUDICATION = "Adjudication"
    PANEL_ACCEPTED = "PanelAccepted"
    PANEL_REJECTED = "PanelRejected"
    # security track
    VENDOR_CONFIRMED = "VendorConfirmed"
    CVE_REQUESTED = "CveRequested"
    CVE_ASSIGNED = "CveAssigned"
    VENDOR_DISPUTED = "VendorDisputed"
    CVE_PROGRAM_APPEAL = "CveProgramAppeal"
    EMBARGOED = "Embargoed"


TERMINAL_STATES = frozenset(
    {CaseState.CLOSED_INVALID, CaseState.WITHDRAWN, CaseState.PANEL_REJECTED, CaseState.FIXED}
)

TRACKS = ("safety", "security", "ambiguous")

# states in which a non-participant may see the public fields of a case
PUBLIC_STATES = frozenset({CaseState.PUBLISHED, CaseState.FIXED})

SYSTEM_ACTOR_ID = "system"
SYSTEM_ROLE = "system"
