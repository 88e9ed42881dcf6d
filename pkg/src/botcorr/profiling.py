"""Per-process API-call frequency profiles and suspect attribution.

The most active process (by raw call count) is named as the suspect when
the session-level analysis flags any sensitivity value as malicious; a
benign session names nobody.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, TextIO

from .correlation import AnalysisResult, Verdict
from .trace import FunctionCallEvent


@dataclass(frozen=True, slots=True)
class ProcessProfile:
    """Call frequency of one (pid, proc) pair within a session."""

    pid: int
    proc: str
    call_count: int
    share: float


def profile_processes(events: Sequence[FunctionCallEvent]) -> list[ProcessProfile]:
    """Count calls per (pid, proc), most active first.

    Ties are broken by process name then pid so the ordering is
    deterministic. ``share`` is the fraction of all session events.
    """
    counts = Counter((ev.pid, ev.proc) for ev in events)
    total = sum(counts.values())
    profiles = [
        ProcessProfile(pid=pid, proc=proc, call_count=count, share=count / total)
        for (pid, proc), count in counts.items()
    ]
    profiles.sort(key=lambda p: (-p.call_count, p.proc, p.pid))
    return profiles


def attribute_suspect(
    profiles: Sequence[ProcessProfile],
    results: Sequence[AnalysisResult],
) -> ProcessProfile | None:
    """Name the top-frequency process iff any sweep verdict is malicious."""
    if not profiles:
        return None
    if not any(r.verdict is Verdict.MALICIOUS for r in results):
        return None
    return profiles[0]


def write_profiles_csv(profiles: Sequence[ProcessProfile], fh: TextIO) -> None:
    """Write profiles as ``pid,proc,call_count,share`` CSV."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("pid", "proc", "call_count", "share"))
    for p in profiles:
        writer.writerow((p.pid, p.proc, p.call_count, repr(p.share)))
