"""Trace data model and log ingestion.

Two JSONL inputs describe a recorded host session: an API-call event log
(one intercepted function call per line) and a netstat counter log (one
cumulative counter snapshot per line). Parsing validates field domains,
and :func:`merge_session` combines both streams into a single
time-ordered :class:`Session` that downstream signal extraction consumes.

Timestamps are relative seconds from session start, not wall-clock, so
fixtures stay reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, TextIO


class TraceError(ValueError):
    """Base class for trace ingestion failures."""


class LogParseError(TraceError):
    """A log line is structurally broken (bad JSON, missing field).

    ``line`` is the 1-based line number of the offending input line.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(TraceError):
    """A log line or record violates a field-domain or ordering rule."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class Category(str, Enum):
    """Intercepted API-call category."""

    COMMUNICATION = "communication"
    FILE = "file"
    REGISTRY = "registry"
    KEYBOARD = "keyboard"


class Direction(str, Enum):
    """Traffic direction of a communication call ("none" otherwise)."""

    OUTGOING = "out"
    INCOMING = "in"
    NONE = "none"


@dataclass(frozen=True, slots=True)
class FunctionCallEvent:
    """One intercepted API call.

    Only communication calls carry a direction; everything else is
    ``Direction.NONE``.
    """

    t: float
    pid: int
    proc: str
    fn: str
    cat: Category
    dir: Direction

    def __post_init__(self) -> None:
        if not (isinstance(self.t, (int, float)) and math.isfinite(self.t)):
            raise ValidationError(f"event time must be a finite number, got {self.t!r}")
        if self.t < 0:
            raise ValidationError(f"event time must be >= 0, got {self.t}")
        if self.dir is not Direction.NONE and self.cat is not Category.COMMUNICATION:
            raise ValidationError(
                f"direction {self.dir.value!r} requires category 'communication', got {self.cat.value!r}"
            )


@dataclass(frozen=True, slots=True)
class NetstatSnapshot:
    """Cumulative network counters observed at one instant.

    du/fca/rst are the destination-unreachable, failed-connection-attempt
    and reset-connection counters; pkts_sent is the cumulative sent-packet
    counter. All are non-negative and cumulative since host boot, so the
    deltas between consecutive snapshots carry the signal.
    """

    t: float
    du: int
    fca: int
    rst: int
    pkts_sent: int

    def __post_init__(self) -> None:
        if not (isinstance(self.t, (int, float)) and math.isfinite(self.t)):
            raise ValidationError(f"snapshot time must be a finite number, got {self.t!r}")
        if self.t < 0:
            raise ValidationError(f"snapshot time must be >= 0, got {self.t}")
        for name in ("du", "fca", "rst", "pkts_sent"):
            value = getattr(self, name)
            if value < 0:
                raise ValidationError(f"counter {name} must be >= 0, got {value}")


@dataclass(frozen=True)
class Session:
    """A merged, time-ordered recording of one monitored host session.

    ``duration`` is the number of whole seconds the session spans; every
    event and snapshot timestamp lies in [0, duration].
    """

    events: tuple[FunctionCallEvent, ...]
    snapshots: tuple[NetstatSnapshot, ...]
    duration: int


_EVENT_FIELDS = ("t", "pid", "proc", "fn", "cat", "dir")
_NETSTAT_FIELDS = ("t", "du", "fca", "rst", "pkts_sent")


def _json_object(raw: str, line_no: int) -> dict:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise LogParseError(f"invalid JSON: {exc.msg}", line_no) from exc
    if not isinstance(obj, dict):
        raise LogParseError("expected a JSON object", line_no)
    return obj


def _number(obj: dict, field: str, line_no: int) -> float:
    value = obj[field]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"field {field!r} must be a number, got {value!r}", line_no)
    return float(value)


def _integer(obj: dict, field: str, line_no: int) -> int:
    value = obj[field]
    if isinstance(value, bool):
        raise ValidationError(f"field {field!r} must be an integer, got {value!r}", line_no)
    if isinstance(value, float):
        if not value.is_integer():
            raise ValidationError(f"field {field!r} must be integral, got {value!r}", line_no)
        value = int(value)
    if not isinstance(value, int):
        raise ValidationError(f"field {field!r} must be an integer, got {value!r}", line_no)
    return value


def _string(obj: dict, field: str, line_no: int) -> str:
    value = obj[field]
    if not isinstance(value, str) or not value:
        raise ValidationError(f"field {field!r} must be a non-empty string, got {value!r}", line_no)
    return value


def parse_event_log(stream: Iterable[str] | TextIO) -> list[FunctionCallEvent]:
    """Parse a JSONL API-call log into events, preserving file order.

    Each line must be a JSON object with fields t, pid, proc, fn, cat and
    dir. Blank lines are skipped. Raises :class:`LogParseError` for broken
    lines and :class:`ValidationError` for out-of-domain values; both carry
    the offending line number.
    """
    events: list[FunctionCallEvent] = []
    for line_no, raw in enumerate(stream, start=1):
        raw = raw.strip()
        if not raw:
            continue
        obj = _json_object(raw, line_no)
        missing = [f for f in _EVENT_FIELDS if f not in obj]
        if missing:
            raise LogParseError(f"missing field(s) {', '.join(missing)}", line_no)
        cat_raw = _string(obj, "cat", line_no)
        try:
            cat = Category(cat_raw)
        except ValueError:
            raise ValidationError(f"unknown category {cat_raw!r}", line_no) from None
        dir_raw = _string(obj, "dir", line_no)
        try:
            direction = Direction(dir_raw)
        except ValueError:
            raise ValidationError(f"unknown direction {dir_raw!r}", line_no) from None
        try:
            event = FunctionCallEvent(
                t=_number(obj, "t", line_no),
                pid=_integer(obj, "pid", line_no),
                proc=_string(obj, "proc", line_no),
                fn=_string(obj, "fn", line_no),
                cat=cat,
                dir=direction,
            )
        except ValidationError as exc:
            raise ValidationError(str(exc), line_no) from None
        events.append(event)
    return events


def parse_netstat_log(stream: Iterable[str] | TextIO) -> list[NetstatSnapshot]:
    """Parse a JSONL netstat counter log into snapshots.

    Lines must be JSON objects with fields t, du, fca, rst and pkts_sent,
    strictly increasing in t (duplicate or backward timestamps are
    rejected). Counters must be non-negative integers.
    """
    snapshots: list[NetstatSnapshot] = []
    for line_no, raw in enumerate(stream, start=1):
        raw = raw.strip()
        if not raw:
            continue
        obj = _json_object(raw, line_no)
        missing = [f for f in _NETSTAT_FIELDS if f not in obj]
        if missing:
            raise LogParseError(f"missing field(s) {', '.join(missing)}", line_no)
        try:
            snap = NetstatSnapshot(
                t=_number(obj, "t", line_no),
                du=_integer(obj, "du", line_no),
                fca=_integer(obj, "fca", line_no),
                rst=_integer(obj, "rst", line_no),
                pkts_sent=_integer(obj, "pkts_sent", line_no),
            )
        except ValidationError as exc:
            raise ValidationError(str(exc), line_no) from None
        if snapshots:
            prev_t = snapshots[-1].t
            if snap.t == prev_t:
                raise ValidationError(f"duplicate snapshot timestamp t={snap.t}", line_no)
            if snap.t < prev_t:
                raise ValidationError(
                    f"snapshot timestamps must increase, got t={snap.t} after t={prev_t}", line_no
                )
        snapshots.append(snap)
    return snapshots


def merge_session(
    events: Iterable[FunctionCallEvent],
    snapshots: Iterable[NetstatSnapshot],
) -> Session:
    """Combine both logs into one time-ordered session.

    Events are stably sorted by timestamp (input order breaks ties);
    snapshots must already be strictly increasing. The session duration is
    the max timestamp over both streams rounded up, never less than 1.
    """
    events = list(events)
    snapshots = list(snapshots)
    if not events and not snapshots:
        raise ValidationError("empty session")
    for prev, cur in zip(snapshots, snapshots[1:]):
        if cur.t <= prev.t:
            raise ValidationError(
                f"snapshot timestamps must increase, got t={cur.t} after t={prev.t}"
            )
    events.sort(key=lambda ev: ev.t)
    max_t = max(
        (ev.t for ev in events),
        default=0.0,
    )
    if snapshots:
        max_t = max(max_t, snapshots[-1].t)
    duration = max(1, math.ceil(max_t))
    return Session(events=tuple(events), snapshots=tuple(snapshots), duration=duration)


def format_event_line(event: FunctionCallEvent) -> str:
    """Serialize one event to its canonical JSONL form."""
    return json.dumps(
        {
            "t": float(event.t),
            "pid": event.pid,
            "proc": event.proc,
            "fn": event.fn,
            "cat": event.cat.value,
            "dir": event.dir.value,
        },
        separators=(",", ":"),
    )


def format_snapshot_line(snapshot: NetstatSnapshot) -> str:
    """Serialize one snapshot to its canonical JSONL form."""
    return json.dumps(
        {
            "t": float(snapshot.t),
            "du": snapshot.du,
            "fca": snapshot.fca,
            "rst": snapshot.rst,
            "pkts_sent": snapshot.pkts_sent,
        },
        separators=(",", ":"),
    )


def write_event_log(events: Iterable[FunctionCallEvent], fh: TextIO) -> None:
    for event in events:
        fh.write(format_event_line(event) + "\n")


def write_netstat_log(snapshots: Iterable[NetstatSnapshot], fh: TextIO) -> None:
    for snapshot in snapshots:
        fh.write(format_snapshot_line(snapshot) + "\n")
