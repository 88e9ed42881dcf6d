"""Assembles the end-to-end analysis report.

The report is a plain JSON-ready dict: session summary, per-signal
timeline statistics, the SV sweep results, per-process call frequencies,
the attributed suspect (if any) and the configuration that produced it
all. Numbers are fixed to four decimal places so identical inputs render
byte-identical reports.
"""

from __future__ import annotations

import json
from typing import Sequence

from .correlation import AnalysisResult, EngineConfig
from .profiling import ProcessProfile
from .signals import ExtractionConfig, SignalRecord
from .trace import Session


def _num(value: float) -> int | float:
    value = float(value)
    if value.is_integer():
        return int(value)
    return round(value, 4)


def _signal_stats(values: Sequence[float]) -> dict:
    return {
        "min": _num(min(values)),
        "mean": _num(sum(values) / len(values)),
        "max": _num(max(values)),
    }


def result_dict(result: AnalysisResult) -> dict:
    return {
        "sv": _num(result.sv),
        "af": _num(result.af),
        "corr_f": _num(result.corr_f),
        "acv": _num(result.acv),
        "verdict": result.verdict.value,
    }


def profile_dict(profile: ProcessProfile) -> dict:
    return {
        "pid": profile.pid,
        "proc": profile.proc,
        "call_count": profile.call_count,
        "share": _num(profile.share),
    }


def build_report(
    session: Session,
    timeline: Sequence[SignalRecord],
    results: Sequence[AnalysisResult],
    profiles: Sequence[ProcessProfile],
    suspect: ProcessProfile | None,
    extraction: ExtractionConfig,
    engine: EngineConfig,
) -> dict:
    """Build the full JSON-ready analysis report."""
    return {
        "session": {
            "duration": session.duration,
            "events": len(session.events),
            "snapshots": len(session.snapshots),
        },
        "signals": {
            "s1": _signal_stats([r.s1 for r in timeline]),
            "s2": _signal_stats([r.s2 for r in timeline]),
            "s3": _signal_stats([r.s3 for r in timeline]),
        },
        "results": [result_dict(r) for r in results],
        "profiles": [profile_dict(p) for p in profiles],
        "suspect": profile_dict(suspect) if suspect is not None else None,
        "config": {
            "sv_list": [_num(sv) for sv in engine.sv_list],
            "threshold": _num(engine.threshold),
            "n_s3": _num(extraction.n_s3),
            "s3_mode": engine.s3_mode,
            "window": engine.window,
        },
    }


def render_report(report: dict) -> str:
    """Render a report dict to its canonical JSON text."""
    return json.dumps(report, indent=2) + "\n"
