"""botcorr - behavioral-correlation detection of P2P-bot-like host activity.

Pipeline: parse recorded API-call and netstat logs into a
:class:`~botcorr.trace.Session`, extract three normalized per-second
danger signals, threshold and correlate them across a sensitivity sweep,
and attribute the verdict to the most call-active process.

The sklearn-style estimators :class:`~botcorr.signals.SignalExtractor`
and :class:`~botcorr.correlation.BotDetector` wrap the functional core so
the pipeline composes with the wider scikit-learn ecosystem.
"""

from .correlation import (
    ACV_MAX,
    DEFAULT_SV_SWEEP,
    DEFAULT_THRESHOLD,
    AnalysisResult,
    BotDetector,
    EngineConfig,
    ThresholdedRecord,
    Verdict,
    acv,
    analyze,
    anomaly_factor,
    classify_acv,
    correlation_factor,
    threshold_signals,
)
from .profiling import ProcessProfile, attribute_suspect, profile_processes
from .report import build_report, render_report
from .scenarios import Lcg64, ScenarioKind, ScenarioSpec, generate_scenario
from .signals import (
    S3_SCALE,
    DangerBand,
    ExtractionConfig,
    SignalExtractor,
    SignalRecord,
    build_signal_timeline,
    classify_rate,
    compute_s1,
    compute_s2,
    compute_s3,
    rate_signal,
    read_timeline_csv,
    timeline_to_array,
    write_timeline_csv,
)
from .trace import (
    Category,
    Direction,
    FunctionCallEvent,
    LogParseError,
    NetstatSnapshot,
    Session,
    TraceError,
    ValidationError,
    merge_session,
    parse_event_log,
    parse_netstat_log,
)

__version__ = "0.1.0"

__all__ = [
    "ACV_MAX",
    "DEFAULT_SV_SWEEP",
    "DEFAULT_THRESHOLD",
    "S3_SCALE",
    "AnalysisResult",
    "BotDetector",
    "Category",
    "DangerBand",
    "Direction",
    "EngineConfig",
    "ExtractionConfig",
    "FunctionCallEvent",
    "Lcg64",
    "LogParseError",
    "NetstatSnapshot",
    "ProcessProfile",
    "ScenarioKind",
    "ScenarioSpec",
    "Session",
    "SignalExtractor",
    "SignalRecord",
    "ThresholdedRecord",
    "TraceError",
    "ValidationError",
    "Verdict",
    "acv",
    "analyze",
    "anomaly_factor",
    "attribute_suspect",
    "build_report",
    "build_signal_timeline",
    "classify_acv",
    "classify_rate",
    "compute_s1",
    "compute_s2",
    "compute_s3",
    "correlation_factor",
    "generate_scenario",
    "merge_session",
    "parse_event_log",
    "parse_netstat_log",
    "profile_processes",
    "rate_signal",
    "render_report",
    "threshold_signals",
    "timeline_to_array",
    "write_timeline_csv",
    "read_timeline_csv",
]
