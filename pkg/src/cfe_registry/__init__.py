"""Coordinated-disclosure registry for AI models.

Dual-track (security/safety) intake, CFE identifier workflow with an
adjudication panel, extended model cards with a linter, exact statistical
validity checks on hazard evidence, HEX exposure statements, embargoed case
handling, and a public advisory database.
"""

__version__ = "0.1.0"
