"""Tree reader used by every document parser.

Walks a decoded JSON tree, accumulating findings with document-pointer paths
instead of failing on the first defect, so parse errors always list every
violation present.
"""

from __future__ import annotations

from typing import Any, Optional

from cfe_registry.errors import SchemaError
from cfe_registry.formats.canonical import canonical_loads
from cfe_registry.formats.findings import Finding, FindingCode, has_errors

_MISSING = object()


class TreeReader:
    def __init__(self, tree: Any, findings: Optional[list[Finding]] = None, path: str = ""):
        self.tree = tree
        self.findings = findings if findings is not None else []
        self.path = path

    # -- finding helpers -------------------------------------------------

    def flag(self, code: FindingCode, message: str, path: Optional[str] = None) -> None:
        self.findings.append(Finding(code=code, path=path if path is not None else self.path or "/", message=message))

    def _child_path(self, key) -> str:
        return f"{self.path}/{key}"

    # -- typed accessors --------------------------------------------------

    def _get(self, key: str):
        if not isinstance(self.tree, dict):
            return _MISSING
        return self.tree.get(key, _MISSING)

    def require(self, key: str, kind: type, message: str = "") -> Any:
        value = self._get(key)
        if value is _MISSING:
            self.flag(
                FindingCode.MISSING_REQUIRED_FIELD,
                message or f"required field {key!r} is missing",
                self._child_path(key),
            )
            return None
        return self._typed(key, value, kind)

    def optional(self, key: str, kind: type, default: Any = None) -> Any:
        value = self._get(key)
        if value is _MISSING or value is None:
            return default
        return self._typed(key, value, kind)

    def _typed(self, key: str, value: Any, kind: type) -> Any:
        # bool is an int subtype in Python; keep the JSON types distinct
        if kind is int and isinstance(value, bool):
            value = None
        elif kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, kind):
            self.flag(
                FindingCode.INVALID_FIELD_TYPE,
                f"field {key!r} must be {kind.__name__}, got {type(value).__name__}",
                self._child_path(key),
            )
            return None
        return value

    def require_str(self, key: str, allow_empty: bool = False) -> str:
        value = self.require(key, str)
        if value is None:
            return ""
        if not allow_empty and value.strip() == "":
            self.flag(
                FindingCode.INVALID_FIELD_VALUE,
                f"field {key!r} must be non-empty",
                self._child_path(key),
            )
            return ""
        return value

    def token(self, key: str, allowed: frozenset[str], code: FindingCode, required: bool = True) -> Optional[str]:
        value = self.require(key, str) if required else self.optional(key, str)
        if value is None:
            return None
        if value not in allowed:
            self.flag(code, f"{key!r} value {value!r} outside {sorted(allowed)}", self._child_path(key))
            return None
        return value

    def str_list(self, key: str, required: bool = True) -> list[str]:
        raw = self.require(key, list) if required else self.optional(key, list, [])
        items: list[str] = []
        if raw is None:
            return items
        for i, item in enumerate(raw):
            if not isinstance(item, str):
                self.flag(
                    FindingCode.INVALID_FIELD_TYPE,
                    f"element {i} of {key!r} must be str",
                    f"{self._child_path(key)}/{i}",
                )
            else:
                items.append(item)
        return items

    def section(self, key: str, required: bool = True) -> Optional["TreeReader"]:
        value = self.require(key, dict) if required else self.optional(key, dict)
        if value is None:
            return None
        return TreeReader(value, self.findings, self._child_path(key))

    def sections(self, key: str, required: bool = True) -> list["TreeReader"]:
        raw = self.require(key, list) if required else self.optional(key, list, [])
        readers: list[TreeReader] = []
        if raw is None:
            return readers
        base = self._child_path(key)
        for i, item in enumerate(raw):
            if not isinstance(item, dict):
                self.flag(
                    FindingCode.INVALID_FIELD_TYPE,
                    f"element {i} of {key!r} must be an object",
                    f"{base}/{i}",
                )
            else:
                readers.append(TreeReader(item, self.findings, f"{base}/{i}"))
        return readers


def open_document(data: bytes | str | dict) -> TreeReader:
    tree = canonical_loads(data) if isinstance(data, (bytes, str)) else data
    reader = TreeReader(tree)
    if not isinstance(tree, dict):
        reader.flag(FindingCode.INVALID_FIELD_TYPE, "document root must be an object", "/")
    return reader


def finish(reader: TreeReader, build):
    """Raise SchemaError when any error-severity finding exists, else build()."""
    if has_errors(reader.findings):
        raise SchemaError(reader.findings)
    return build()
