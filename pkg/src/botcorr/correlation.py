"""Signal thresholding, anomaly/correlation factors and the ACV verdict.

For a sensitivity value SV, every second of the signal timeline is turned
into three bits (signal > SV) plus a correlation bit set only when all
three fire together. Aggregating over the session:

* anomaly factor      AF    = sum of all bits / (3 * n)
* correlation factor  CorrF = sum of correlation bits / n
* anomaly correlation ACV   = AF * exp(CorrF), bounded by e =~ 2.71828

A session is flagged malicious when ACV * 100 reaches the detection
threshold (default 50). The s3 bit has two interpretations: ``literal``
(s3 > SV, dangerous when call gaps look *normal*-high) and ``inverted``
((100 - s3) > SV, dangerous when gaps are short); both are provided and
``literal`` is the default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .signals import SIGNAL_MAX, SignalRecord

S3Mode = str
S3_MODES = ("literal", "inverted")

ACV_MAX = math.e


class Verdict(str, Enum):
    MALICIOUS = "malicious"
    BENIGN = "benign"


@dataclass(frozen=True, slots=True)
class ThresholdedRecord:
    """Per-second signal bits for one sensitivity value."""

    sec: int
    x_s1: int
    x_s2: int
    x_s3: int
    corr: int


@dataclass(frozen=True, slots=True)
class AnalysisResult:
    """AF, CorrF, ACV and the verdict for one sensitivity value."""

    sv: float
    af: float
    corr_f: float
    acv: float
    verdict: Verdict


DEFAULT_SV_SWEEP = (10.0, 20.0, 30.0, 40.0, 50.0)
DEFAULT_THRESHOLD = 50.0


@dataclass(frozen=True)
class EngineConfig:
    """Correlation-engine tunables.

    sv_list: sensitivity values to sweep, each in (0, 100).
    threshold: detection threshold T compared against ACV * 100.
    s3_mode: "literal" or "inverted" s3 bit semantics.
    window: optional rolling-window length in seconds (step 1); the
        window with the highest ACV decides the session. None analyzes
        the whole session at once.
    """

    sv_list: tuple[float, ...] = DEFAULT_SV_SWEEP
    threshold: float = DEFAULT_THRESHOLD
    s3_mode: S3Mode = "literal"
    window: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "sv_list", tuple(float(sv) for sv in self.sv_list))
        if not self.sv_list:
            raise ValueError("sv_list must not be empty")
        for sv in self.sv_list:
            if not 0.0 < sv < 100.0:
                raise ValueError(f"sensitivity values must be in (0, 100), got {sv}")
        if not 0.0 < self.threshold < 100.0:
            raise ValueError(f"threshold must be in (0, 100), got {self.threshold}")
        if self.s3_mode not in S3_MODES:
            raise ValueError(f"s3_mode must be one of {S3_MODES}, got {self.s3_mode!r}")
        if self.window is not None and self.window < 1:
            raise ValueError(f"window must be >= 1 seconds, got {self.window}")


def threshold_signals(
    timeline: Sequence[SignalRecord],
    sv: float,
    s3_mode: S3Mode = "literal",
) -> list[ThresholdedRecord]:
    """Binarize every second of the timeline against a sensitivity value.

    x_s1/x_s2 are 1 when the signal strictly exceeds SV. In literal mode
    x_s3 = 1 when s3 > SV; in inverted mode x_s3 = 1 when (100 - s3) > SV.
    corr is 1 only when all three bits are 1.
    """
    if not timeline:
        raise ValueError("empty signal timeline")
    if not 0.0 < sv < 100.0:
        raise ValueError(f"sensitivity value must be in (0, 100), got {sv}")
    if s3_mode not in S3_MODES:
        raise ValueError(f"s3_mode must be one of {S3_MODES}, got {s3_mode!r}")
    records = []
    for rec in timeline:
        x1 = 1 if rec.s1 > sv else 0
        x2 = 1 if rec.s2 > sv else 0
        s3_value = rec.s3 if s3_mode == "literal" else SIGNAL_MAX - rec.s3
        x3 = 1 if s3_value > sv else 0
        corr = 1 if x1 == 1 and x2 == 1 and x3 == 1 else 0
        records.append(ThresholdedRecord(sec=rec.sec, x_s1=x1, x_s2=x2, x_s3=x3, corr=corr))
    return records


def anomaly_factor(records: Sequence[ThresholdedRecord]) -> float:
    """Fraction of all signal bits set over the session: sum(bits) / (3n)."""
    if not records:
        raise ValueError("empty record list")
    total = sum(r.x_s1 + r.x_s2 + r.x_s3 for r in records)
    return total / (3 * len(records))


def correlation_factor(records: Sequence[ThresholdedRecord]) -> float:
    """Fraction of seconds where all three bits fire together: sum(corr) / n."""
    if not records:
        raise ValueError("empty record list")
    return sum(r.corr for r in records) / len(records)


def acv(af: float, corr_f: float) -> float:
    """Anomaly correlation value AF * exp(CorrF), at most e =~ 2.71828."""
    return af * math.exp(corr_f)


def classify_acv(value: float, threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    """Verdict for an ACV: malicious when ACV * 100 reaches the threshold."""
    return Verdict.MALICIOUS if value * 100.0 >= threshold else Verdict.BENIGN


def _best_window(records: list[ThresholdedRecord], window: int | None) -> tuple[float, float]:
    """(AF, CorrF) of the highest-ACV rolling window (whole session if None).

    Ties go to the earliest window so results stay deterministic.
    """
    n = len(records)
    if window is None or window >= n:
        return anomaly_factor(records), correlation_factor(records)
    best: tuple[float, float] | None = None
    best_acv = -1.0
    for start in range(0, n - window + 1):
        chunk = records[start : start + window]
        af = anomaly_factor(chunk)
        cf = correlation_factor(chunk)
        value = acv(af, cf)
        if value > best_acv:
            best_acv = value
            best = (af, cf)
    assert best is not None
    return best


def analyze(
    timeline: Sequence[SignalRecord],
    cfg: EngineConfig | None = None,
) -> list[AnalysisResult]:
    """Run the full SV sweep over a timeline.

    For each sensitivity value in ``cfg.sv_list`` (in order): threshold the
    signals, compute AF/CorrF/ACV and derive the verdict against
    ``cfg.threshold``.
    """
    cfg = cfg or EngineConfig()
    if not timeline:
        raise ValueError("empty signal timeline")
    results = []
    for sv in cfg.sv_list:
        records = threshold_signals(timeline, sv, cfg.s3_mode)
        af, cf = _best_window(records, cfg.window)
        value = acv(af, cf)
        results.append(
            AnalysisResult(sv=sv, af=af, corr_f=cf, acv=value, verdict=classify_acv(value, cfg.threshold))
        )
    return results


def _as_timeline(X) -> list[SignalRecord]:
    """Coerce an (n, 3) array or a SignalRecord sequence into a timeline.

    Validates the [0, 100] range on array input so foreign matrices cannot
    smuggle out-of-range signals into the engine.
    """
    if len(X) and isinstance(X[0], SignalRecord):
        return list(X)
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) signal matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("signal matrix contains non-finite values")
    if (arr < 0).any() or (arr > SIGNAL_MAX).any():
        raise ValueError("signal values must lie in [0, 100]")
    return [SignalRecord(sec=i, s1=row[0], s2=row[1], s3=row[2]) for i, row in enumerate(arr)]


class BotDetector(BaseEstimator):
    """Session-level detector over an (n_seconds, 3) signal matrix.

    Accepts the matrix produced by :class:`botcorr.signals.SignalExtractor`
    (or a list of :class:`SignalRecord`). Because one session yields one
    verdict per sensitivity value, ``predict`` and ``decision_function``
    return one entry per SV in ``sv_list`` rather than one per row.

    ``fit`` only validates input (the detector learns nothing); it exists
    so the estimator composes with sklearn pipelines and ``clone``.
    """

    def __init__(
        self,
        sv_list: Sequence[float] = DEFAULT_SV_SWEEP,
        threshold: float = DEFAULT_THRESHOLD,
        s3_mode: S3Mode = "literal",
        window: int | None = None,
    ):
        self.sv_list = sv_list
        self.threshold = threshold
        self.s3_mode = s3_mode
        self.window = window

    def _config(self) -> EngineConfig:
        return EngineConfig(
            sv_list=tuple(self.sv_list),
            threshold=self.threshold,
            s3_mode=self.s3_mode,
            window=self.window,
        )

    def fit(self, X, y=None) -> "BotDetector":
        _as_timeline(X)
        self._config()
        self.n_features_in_ = 3
        return self

    def analyze(self, X) -> list[AnalysisResult]:
        """Full per-SV results for one session timeline."""
        return analyze(_as_timeline(X), self._config())

    def decision_function(self, X) -> np.ndarray:
        """ACV per sensitivity value, ordered as ``sv_list``."""
        return np.array([r.acv for r in self.analyze(X)])

    def predict(self, X) -> np.ndarray:
        """1 (malicious) or 0 (benign) per sensitivity value."""
        return np.array([int(r.verdict is Verdict.MALICIOUS) for r in self.analyze(X)])

    def _more_tags(self):  # pragma: no cover - sklearn introspection only
        return {"no_validation": True}
