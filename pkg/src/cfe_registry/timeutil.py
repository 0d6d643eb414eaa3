"""Timestamp helpers.

All registry timestamps are UTC ISO-8601 strings with microsecond precision
and a trailing Z, e.g. "2025-06-01T12:00:00.000000Z". Fixed width keeps
lexicographic and chronological order identical.
"""

from __future__ import annotations

import threading
from datetime import datetime, timedelta, timezone

TS_FORMAT = "%Y-%m-%dT%H:%M:%S.%fZ"


def format_ts(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime(TS_FORMAT)


def parse_ts(text: str) -> datetime:
    return datetime.strptime(text, TS_FORMAT).replace(tzinfo=timezone.utc)


def now_ts() -> str:
    return format_ts(datetime.now(timezone.utc))


def add_days(ts: str, days: float) -> str:
    return format_ts(parse_ts(ts) + timedelta(days=days))


class MonotonicClock:
    """Wall clock that never repeats a timestamp.

    Consecutive events in a fast test run can land on the same wall-clock
    microsecond; this bumps by 1us so issued_at/audit orderings stay strict.
    """

    def __init__(self):
        self._last = datetime.min.replace(tzinfo=timezone.utc)
        self._lock = threading.Lock()

    def now(self) -> str:
        with self._lock:
            current = datetime.now(timezone.utc)
            if current <= self._last:
                current = self._last + timedelta(microseconds=1)
            self._last = current
            return format_ts(current)
