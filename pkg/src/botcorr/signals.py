"""Per-second danger signals extracted from a merged session.

Three signals, each normalized into [0, 100], describe the host state for
every second of the session:

* s1 - magnitude of the error-counter delta (destination unreachable +
  failed connection attempts + reset connections) between consecutive
  netstat snapshots, on a log10 scale: 100 * log10(delta sum), capped.
* s2 - outbound packet rate, on a log10 scale: 25 * log10(pkts/sec), so
  1 pkt/s maps to 0 and 10,000 pkts/s maps to the 100 cap.
* s3 - time gap between consecutive outgoing communication calls with the
  same function name, scaled as 62.41965 * log10(gap). Gaps at or above
  ``n_s3`` (default 40 s) are normal and map to 100; near-zero gaps (the
  flooding pattern) map to 0, the most dangerous value.

The timeline built here is the sole input to the correlation engine.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, TextIO

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .trace import Category, Direction, NetstatSnapshot, Session

S3_SCALE = 62.41965
"""log10 multiplier that maps a 40 s call gap to ~100 (the normal ceiling)."""

SIGNAL_MAX = 100.0


class DangerBand(str, Enum):
    """Coarse danger classification of an outbound packet rate."""

    MIN = "min"
    MIN_MID = "min_mid"
    MID = "mid"
    MID_MAX = "mid_max"
    MAX = "max"


@dataclass(frozen=True, slots=True)
class SignalRecord:
    """The (s1, s2, s3) triple for one second of the session."""

    sec: int
    s1: float
    s2: float
    s3: float


@dataclass(frozen=True)
class ExtractionConfig:
    """Tunables for signal extraction.

    n_s3: gap (seconds) at or above which same-name call timing is normal.
    s3_idle_value: s3 assigned to seconds that produce no call gap.
    clamp_negative_deltas: treat counter decreases (resets) as zero.
    """

    n_s3: float = 40.0
    s3_idle_value: float = 100.0
    clamp_negative_deltas: bool = True

    def __post_init__(self) -> None:
        if self.n_s3 <= 0:
            raise ValueError(f"n_s3 must be > 0, got {self.n_s3}")
        if not 0.0 <= self.s3_idle_value <= SIGNAL_MAX:
            raise ValueError(f"s3_idle_value must be in [0, 100], got {self.s3_idle_value}")


def compute_s1(
    prev: NetstatSnapshot,
    cur: NetstatSnapshot,
    cfg: ExtractionConfig | None = None,
) -> float:
    """Error-counter delta signal between two consecutive snapshots.

    Sums the du/fca/rst deltas (each clamped at zero when
    ``clamp_negative_deltas`` is set, so counter resets are not treated as
    attack evidence) and maps the sum d to min(100, 100 * log10(d)).
    Sums of 1 or less map to 0, keeping the signal non-negative.
    """
    cfg = cfg or ExtractionConfig()
    if cur.t <= prev.t:
        raise ValueError(f"snapshots out of order: cur.t={cur.t} <= prev.t={prev.t}")
    deltas = (cur.du - prev.du, cur.fca - prev.fca, cur.rst - prev.rst)
    if cfg.clamp_negative_deltas:
        deltas = tuple(max(0, d) for d in deltas)
    total = sum(deltas)
    if total <= 1:
        return 0.0
    return min(SIGNAL_MAX, 100.0 * math.log10(total))


def compute_s2(prev: NetstatSnapshot, cur: NetstatSnapshot) -> float:
    """Outbound packet-rate signal between two consecutive snapshots.

    The rate X = delta(pkts_sent) / delta(t) maps to 25 * log10(X):
    zero or sub-1 rates map to 0, rates above 10,000/s cap at 100.
    """
    if cur.t <= prev.t:
        raise ValueError(f"snapshots out of order: cur.t={cur.t} <= prev.t={prev.t}")
    rate = (cur.pkts_sent - prev.pkts_sent) / (cur.t - prev.t)
    return rate_signal(rate)


def rate_signal(rate: float) -> float:
    """Map a packets-per-second rate onto the [0, 100] s2 scale."""
    if rate < 1.0:
        return 0.0
    if rate > 10_000.0:
        return SIGNAL_MAX
    return min(SIGNAL_MAX, 25.0 * math.log10(rate))


def classify_rate(rate: float) -> DangerBand:
    """Classify a packets-per-second rate into its danger band.

    Integer band edges follow the 0-10 / 11-100 / 101-1000 / 1001-10000 /
    >10000 table; fractional rates fall into the band whose open interval
    covers them (e.g. 10.5 is min_mid).
    """
    if rate < 0:
        raise ValueError(f"rate must be >= 0, got {rate}")
    if rate <= 10:
        return DangerBand.MIN
    if rate <= 100:
        return DangerBand.MIN_MID
    if rate <= 1000:
        return DangerBand.MID
    if rate <= 10_000:
        return DangerBand.MID_MAX
    return DangerBand.MAX


def compute_s3(gap: float, cfg: ExtractionConfig | None = None) -> float:
    """Same-name call-gap signal.

    Gaps at or above ``cfg.n_s3`` are normal and map to 100. Gaps of one
    second or less (including simultaneous calls) map to 0. Everything in
    between maps to min(100, 62.41965 * log10(gap)).
    """
    cfg = cfg or ExtractionConfig()
    if gap < 0:
        raise ValueError(f"gap must be >= 0, got {gap}")
    if gap >= cfg.n_s3:
        return SIGNAL_MAX
    if gap <= 1.0:
        return 0.0
    return min(SIGNAL_MAX, S3_SCALE * math.log10(gap))


def _counter_seconds(prev_t: float, cur_t: float, duration: int) -> Iterable[int]:
    """Seconds owned by the snapshot pair (prev_t, cur_t].

    The pair's value lands in the second the measurement arrives in
    (floor(cur_t)) plus every whole second strictly inside the interval,
    so sparse polling fills the seconds it straddles and the seconds
    before the second snapshot stay zero.
    """
    lo = math.floor(prev_t) + 1
    hi = math.floor(cur_t) - 1
    yield from range(max(0, lo), min(duration - 1, hi) + 1)
    end = math.floor(cur_t)
    if end > hi and 0 <= end < duration:
        yield end


def build_signal_timeline(
    session: Session,
    cfg: ExtractionConfig | None = None,
) -> list[SignalRecord]:
    """Compute the per-second signal timeline for a session.

    Returns one record per second index 0..duration-1. s1/s2 come from the
    latest snapshot pair covering each second; s3 tracks, per function
    name, gaps between consecutive outgoing communication calls, and a
    second showing several gaps keeps the most dangerous (minimum) value.
    Seconds without counter data get s1 = s2 = 0; seconds without a call
    gap get ``cfg.s3_idle_value``.
    """
    cfg = cfg or ExtractionConfig()
    n = session.duration
    s1 = [0.0] * n
    s2 = [0.0] * n

    for prev, cur in zip(session.snapshots, session.snapshots[1:]):
        v1 = compute_s1(prev, cur, cfg)
        v2 = compute_s2(prev, cur)
        for k in _counter_seconds(prev.t, cur.t, n):
            s1[k] = v1
            s2[k] = v2

    s3 = [cfg.s3_idle_value] * n
    seen_gap = [False] * n
    last_call: dict[str, float] = {}
    for ev in session.events:
        if ev.cat is not Category.COMMUNICATION or ev.dir is not Direction.OUTGOING:
            continue
        prev_t = last_call.get(ev.fn)
        last_call[ev.fn] = ev.t
        if prev_t is None:
            continue
        k = math.floor(ev.t)
        if k >= n:
            continue
        value = compute_s3(ev.t - prev_t, cfg)
        if not seen_gap[k] or value < s3[k]:
            s3[k] = value
            seen_gap[k] = True

    return [SignalRecord(sec=k, s1=s1[k], s2=s2[k], s3=s3[k]) for k in range(n)]


def timeline_to_array(timeline: Sequence[SignalRecord]) -> np.ndarray:
    """Stack a timeline into an (n, 3) float array of [s1, s2, s3] rows."""
    return np.array([[r.s1, r.s2, r.s3] for r in timeline], dtype=float)


CSV_HEADER = ("sec", "s1", "s2", "s3")


def _csv_number(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def write_timeline_csv(timeline: Sequence[SignalRecord], fh: TextIO) -> None:
    """Write a timeline as ``sec,s1,s2,s3`` CSV (full float precision)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in timeline:
        writer.writerow((rec.sec, _csv_number(rec.s1), _csv_number(rec.s2), _csv_number(rec.s3)))


def read_timeline_csv(fh: TextIO) -> list[SignalRecord]:
    """Read a ``sec,s1,s2,s3`` CSV back into a validated timeline."""
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
        raise ValueError(f"expected CSV header {','.join(CSV_HEADER)}")
    timeline: list[SignalRecord] = []
    for row_no, row in enumerate(reader):
        if not row:
            continue
        if len(row) != 4:
            raise ValueError(f"row {row_no}: expected 4 columns, got {len(row)}")
        try:
            sec = int(row[0])
            values = tuple(float(v) for v in row[1:])
        except ValueError as exc:
            raise ValueError(f"row {row_no}: {exc}") from None
        if sec != row_no:
            raise ValueError(f"row {row_no}: second indices must be consecutive from 0, got {sec}")
        for name, v in zip(("s1", "s2", "s3"), values):
            if not 0.0 <= v <= SIGNAL_MAX:
                raise ValueError(f"row {row_no}: {name}={v} outside [0, 100]")
        timeline.append(SignalRecord(sec, *values))
    if not timeline:
        raise ValueError("empty signal timeline")
    return timeline


class SignalExtractor(TransformerMixin, BaseEstimator):
    """Transformer from a merged :class:`Session` to an (n, 3) signal matrix.

    Stateless: ``fit`` only validates. ``transform`` returns one row per
    session second with columns [s1, s2, s3], ready for
    :class:`botcorr.correlation.BotDetector` or any array consumer.

    Parameters mirror :class:`ExtractionConfig`.
    """

    def __init__(
        self,
        n_s3: float = 40.0,
        s3_idle_value: float = 100.0,
        clamp_negative_deltas: bool = True,
    ):
        self.n_s3 = n_s3
        self.s3_idle_value = s3_idle_value
        self.clamp_negative_deltas = clamp_negative_deltas

    def _config(self) -> ExtractionConfig:
        return ExtractionConfig(
            n_s3=self.n_s3,
            s3_idle_value=self.s3_idle_value,
            clamp_negative_deltas=self.clamp_negative_deltas,
        )

    def fit(self, X: Session, y=None) -> "SignalExtractor":
        self._validate_session(X)
        self._config()
        return self

    def transform(self, X: Session) -> np.ndarray:
        self._validate_session(X)
        return timeline_to_array(build_signal_timeline(X, self._config()))

    @staticmethod
    def _validate_session(X) -> None:
        if not isinstance(X, Session):
            raise TypeError(f"expected a Session, got {type(X).__name__}")

    def _more_tags(self):  # pragma: no cover - sklearn introspection only
        return {"X_types": ["session"], "no_validation": True}
