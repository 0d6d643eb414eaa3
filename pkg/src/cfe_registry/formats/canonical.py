"""Canonical JSON: the single interchange encoding for every registry document.

Canonical form: UTF-8, object keys sorted lexicographically by codepoint, no
insignificant whitespace, shortest round-trip number rendering (Python repr
semantics), no NaN/Infinity. Semantically identical trees serialize to
identical bytes, so content digests are stable.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Any

from cfe_registry.errors import DocumentSyntaxError, UnsupportedValue

DOCUMENT_KINDS = frozenset(
    {"model_card", "cfe_record", "hex_statement", "taxonomy_descriptor", "advisory"}
)

DIGEST_ALGORITHM = "sha256"


def _check_tree(value: Any, path: str) -> None:
    if value is None or isinstance(value, (str, bool)):
        return
    if isinstance(value, int):
        return
    if isinstance(value, float):
        if not math.isfinite(value):
            raise UnsupportedValue(f"non-finite number at {path}")
        return
    if isinstance(value, list):
        for i, item in enumerate(value):
            _check_tree(item, f"{path}/{i}")
        return
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise UnsupportedValue(f"non-string map key at {path}: {key!r}")
            _check_tree(item, f"{path}/{key}")
        return
    raise UnsupportedValue(f"unsupported value type at {path}: {type(value).__name__}")


def canonical_dumps(tree: Any) -> str:
    _check_tree(tree, "")
    return json.dumps(
        tree,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )


def canonical_bytes(tree: Any) -> bytes:
    return canonical_dumps(tree).encode("utf-8")


def canonical_loads(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"not valid UTF-8: {exc}") from exc
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"malformed JSON: {exc}") from exc


def canonical_digest(tree: Any) -> str:
    """Content digest of the canonical bytes, prefixed with the algorithm id."""
    digest = hashlib.sha256(canonical_bytes(tree)).hexdigest()
    return f"{DIGEST_ALGORITHM}:{digest}"


@dataclass(frozen=True)
class CanonicalDocument:
    kind: str
    body: Any

    def __post_init__(self):
        if self.kind not in DOCUMENT_KINDS:
            raise UnsupportedValue(f"unknown document kind: {self.kind!r}")


def serialize_canonical(doc: CanonicalDocument) -> bytes:
    return canonical_bytes(doc.body)
