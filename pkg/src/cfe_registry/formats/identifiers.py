"""CFE identifier grammar: CFE-<year>-<seq>, seq zero-padded to at least 4 digits."""

from __future__ import annotations

import re
from dataclasses import dataclass

from cfe_registry.errors import IdSyntaxError

_CFE_RE = re.compile(r"^CFE-(\d{4})-(\d{4,})$")


@dataclass(frozen=True, order=True)
class CfeId:
    year: int
    sequence: int

    def __post_init__(self):
        if not 1000 <= self.year <= 9999:
            raise IdSyntaxError(f"year must have 4 digits: {self.year}")
        if self.sequence < 1:
            raise IdSyntaxError(f"sequence must be >= 1: {self.sequence}")

    def __str__(self) -> str:
        return format_cfe_id(self)


def format_cfe_id(cfe: CfeId) -> str:
    return f"CFE-{cfe.year:04d}-{cfe.sequence:04d}"


def parse_cfe_id(text: str) -> CfeId:
    match = _CFE_RE.match(text)
    if not match:
        raise IdSyntaxError(f"not a CFE identifier: {text!r}")
    year_text, seq_text = match.groups()
    # past 4 digits the sequence carries no leading zeros (one canonical spelling)
    if len(seq_text) > 4 and seq_text[0] == "0":
        raise IdSyntaxError(f"non-canonical zero padding: {text!r}")
    sequence = int(seq_text)
    if sequence < 1:
        raise IdSyntaxError(f"sequence must be >= 1: {text!r}")
    return CfeId(year=int(year_text), sequence=sequence)
