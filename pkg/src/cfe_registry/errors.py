"""Exception hierarchy shared across the registry."""

from __future__ import annotations


class RegistryError(Exception):
    """Base class; `code` is a stable machine identifier for API/CLI mapping."""

    code = "registry_error"


class DocumentSyntaxError(RegistryError):
    """Input is not well-formed UTF-8 JSON."""

    code = "syntax_error"


class SchemaError(RegistryError):
    """Document parsed but violates its schema; carries every finding, not just the first."""

    code = "schema_error"

    def __init__(self, findings):
        self.findings = list(findings)
        summary = "; ".join(f"{f.code}@{f.path}" for f in self.findings)
        super().__init__(f"schema violations: {summary}")


class IdSyntaxError(RegistryError):
    code = "id_syntax_error"


class UnsupportedValue(RegistryError):
    """Value cannot be canonically serialized (non-finite number, unknown type)."""

    code = "unsupported_value"


class UnknownModel(RegistryError):
    code = "unknown_model"


class EmptyHarmSet(RegistryError):
    code = "empty_harm_set"


class DomainError(RegistryError):
    """Statistical-kernel precondition violation (k, n, alpha out of range)."""

    code = "domain_error"


class IllegalTransition(RegistryError):
    code = "illegal_transition"

    def __init__(self, state, action):
        self.state = state
        self.action = action
        super().__init__(f"action {action!r} is not legal in state {state!r}")


class RoleNotPermitted(RegistryError):
    code = "role_not_permitted"


class StaleVersion(RegistryError):
    code = "stale_version"

    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected version {expected}, case is at {actual}")


class PayloadInvalid(RegistryError):
    code = "payload_invalid"


class IllegalState(RegistryError):
    code = "illegal_state"


class MissingIdentifier(RegistryError):
    code = "missing_identifier"


class CfeNotActionable(RegistryError):
    """CFE is still reserved/unpublished; exposure cannot be evaluated against it."""

    code = "cfe_not_actionable"


class CyclicLineage(RegistryError):
    code = "cyclic_lineage"


class SupersedeOrderViolation(RegistryError):
    code = "supersede_order_violation"


class ConfigError(RegistryError):
    code = "config_error"


class StorageCorruption(RegistryError):
    """Event-log digest or sequence mismatch detected during replay."""

    code = "storage_corruption"


class BadPageToken(RegistryError):
    code = "bad_page_token"


class NotFoundError(RegistryError):
    code = "not_found"


class AuthError(RegistryError):
    code = "auth_error"
