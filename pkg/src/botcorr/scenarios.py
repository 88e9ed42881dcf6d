"""Deterministic synthetic session fixtures.

Synthesizes the trace-observable footprint of four host scenarios without
running anything malicious:

* ``bot_inactive`` - a flooding bot plus idle desktop applications. The
  bot emits dense same-name outbound call bursts (``sendto``/``socket``
  at ``burst_gap`` spacing), a periodic ``send`` beacon every 10 s, rising
  error counters and a sustained outbound packet rate of ``flood_rate``.
* ``bot_active``   - the same bot with a user chatting and browsing on top.
* ``benign_chat``  - an IRC-style chat client: steady incoming traffic,
  keyboard polling, a rare outbound ``send`` at least 40 s after the
  previous one, and flat error counters.
* ``benign_browse``- a web browser: page loads at least 40 s apart, each
  with a modest packet burst, file and registry access.

All randomness comes from a 64-bit linear-congruential generator with
fixed constants (see :class:`Lcg64`), so equal specs produce byte-identical
sessions on every platform. Bot scenarios poll the counters every second;
benign scenarios poll every 5 s, matching a lightly loaded monitor, which
keeps sub-packet-per-second rates at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .trace import (
    Category,
    Direction,
    FunctionCallEvent,
    NetstatSnapshot,
    Session,
    merge_session,
)

_LCG_A = 6364136223846793005
_LCG_C = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


class Lcg64:
    """64-bit linear-congruential generator, constants from Knuth's MMIX.

    state' = (6364136223846793005 * state + 1442695040888963407) mod 2^64

    Floats are derived from the top 53 bits, so every draw is exactly
    reproducible from the seed alone.
    """

    def __init__(self, seed: int):
        self.state = seed & _LCG_MASK

    def next_u64(self) -> int:
        self.state = (_LCG_A * self.state + _LCG_C) & _LCG_MASK
        return self.state

    def uniform(self, lo: float, hi: float) -> float:
        u = (self.next_u64() >> 11) / float(1 << 53)
        return lo + u * (hi - lo)

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.next_u64() % (hi - lo + 1)


class ScenarioKind(str, Enum):
    BOT_INACTIVE = "bot_inactive"
    BOT_ACTIVE = "bot_active"
    BENIGN_CHAT = "benign_chat"
    BENIGN_BROWSE = "benign_browse"


_KIND_SALT = {
    ScenarioKind.BOT_INACTIVE: 0x1D,
    ScenarioKind.BOT_ACTIVE: 0x2E,
    ScenarioKind.BENIGN_CHAT: 0x3F,
    ScenarioKind.BENIGN_BROWSE: 0x4A,
}

BOT_PROCESS = "peacomm"
_BEACON_PERIOD = 10
_BENIGN_POLL = 5
_MIN_BENIGN_SEND_GAP = 41.0


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters of one synthetic scenario.

    flood_rate:   outbound packets/sec while the bot floods.
    burst_gap:    spacing of same-name outbound calls inside a burst.
    error_growth: total du+fca+rst increase per active bot second.
    """

    kind: ScenarioKind
    duration: int
    seed: int
    flood_rate: float = 2000.0
    burst_gap: float = 0.01
    error_growth: int = 30

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        if self.duration < 10:
            raise ValueError(f"duration must be >= 10 seconds, got {self.duration}")
        if self.flood_rate <= 0:
            raise ValueError(f"flood_rate must be > 0, got {self.flood_rate}")
        if not 0.0 < self.burst_gap < 1.0:
            raise ValueError(f"burst_gap must be in (0, 1), got {self.burst_gap}")
        if self.error_growth < 0:
            raise ValueError(f"error_growth must be >= 0, got {self.error_growth}")


_Increment = tuple[float, int, int, int, float]  # (time, du, fca, rst, pkts)


def _comm(t: float, pid: int, proc: str, fn: str, direction: Direction) -> FunctionCallEvent:
    return FunctionCallEvent(t=t, pid=pid, proc=proc, fn=fn, cat=Category.COMMUNICATION, dir=direction)


def _plain(t: float, pid: int, proc: str, fn: str, cat: Category) -> FunctionCallEvent:
    return FunctionCallEvent(t=t, pid=pid, proc=proc, fn=fn, cat=cat, dir=Direction.NONE)


def _bot_campaign(
    lcg: Lcg64, spec: ScenarioSpec, pid: int
) -> tuple[list[FunctionCallEvent], list[_Increment]]:
    """Flood bursts, beacons and counter growth for seconds 1..duration-1."""
    events: list[FunctionCallEvent] = []
    increments: list[_Increment] = []
    d = spec.duration
    beacon_secs = {k for k in range(1, d) if k % _BEACON_PERIOD == 5}

    growth = int(round(spec.error_growth))
    fca_inc = growth // 3
    rst_inc = growth // 3
    du_inc = growth - fca_inc - rst_inc

    calls_per_burst = max(1, math.floor(0.99 / spec.burst_gap) + 1)
    flood_ordinal = 0
    for k in range(1, d):
        # counters keep rising through beacon seconds: the flood stays on
        # the wire even when the call mix changes for one second
        increments.append((float(k + 1), du_inc, fca_inc, rst_inc, spec.flood_rate))
        if k in beacon_secs:
            events.append(_comm(k + lcg.uniform(0.3, 0.7), pid, BOT_PROCESS, "send", Direction.OUTGOING))
            continue
        fn = "sendto" if flood_ordinal % 2 == 0 else "socket"
        flood_ordinal += 1
        for j in range(calls_per_burst):
            events.append(_comm(k + j * spec.burst_gap, pid, BOT_PROCESS, fn, Direction.OUTGOING))
        if k % 2 == 0:
            events.append(_comm(k + lcg.uniform(0.1, 0.9), pid, BOT_PROCESS, "recv", Direction.INCOMING))
        if k % 7 == 0:
            events.append(_plain(k + lcg.uniform(0.1, 0.9), pid, BOT_PROCESS, "RegOpenKey", Category.REGISTRY))
        if k % 11 == 0:
            events.append(_plain(k + lcg.uniform(0.1, 0.9), pid, BOT_PROCESS, "ReadFile", Category.FILE))
    return events, increments


def _chat_overlay(
    lcg: Lcg64, duration: int, pid: int
) -> tuple[list[FunctionCallEvent], list[_Increment]]:
    """IRC-style chat: steady recv, typing bursts, rare outbound send."""
    events: list[FunctionCallEvent] = []
    increments: list[_Increment] = []
    proc = "icechat"

    t = lcg.uniform(1.0, 3.0)
    while t < duration - 0.5:
        events.append(_comm(t, pid, proc, "recv", Direction.INCOMING))
        t += lcg.uniform(2.0, 4.0)

    send_t = lcg.uniform(5.0, 12.0)
    while send_t < duration - 0.5:
        for j in range(lcg.randint(4, 8)):
            key_t = send_t - 2.0 + j * 0.25
            if key_t >= 0:
                events.append(_plain(key_t, pid, proc, "GetKeyboardState", Category.KEYBOARD))
        events.append(_comm(send_t, pid, proc, "send", Direction.OUTGOING))
        increments.append((send_t, 0, 0, 0, 2.0))
        send_t += lcg.uniform(_MIN_BENIGN_SEND_GAP, _MIN_BENIGN_SEND_GAP + 6.0)

    reg_t = lcg.uniform(3.0, 8.0)
    while reg_t < duration - 0.5:
        events.append(_plain(reg_t, pid, proc, "RegOpenKey", Category.REGISTRY))
        reg_t += lcg.uniform(20.0, 30.0)
    return events, increments


def _browse_overlay(
    lcg: Lcg64, duration: int, pid: int
) -> tuple[list[FunctionCallEvent], list[_Increment]]:
    """Web browsing: page loads at least 40 s apart with modest packet bursts."""
    events: list[FunctionCallEvent] = []
    increments: list[_Increment] = []
    proc = "firefox"

    load_t = lcg.uniform(4.0, 8.0)
    while load_t < duration - 2.0:
        events.append(_comm(load_t, pid, proc, "send", Direction.OUTGOING))
        increments.append((load_t, 0, 0, 0, float(lcg.randint(25, 40))))
        for j in range(lcg.randint(2, 4)):
            events.append(_comm(load_t + 0.1 + j * lcg.uniform(0.05, 0.3), pid, proc, "recv", Direction.INCOMING))
        events.append(_plain(load_t + lcg.uniform(0.4, 0.8), pid, proc, "ReadFile", Category.FILE))
        events.append(_plain(load_t + lcg.uniform(0.9, 1.4), pid, proc, "RegQueryValue", Category.REGISTRY))
        load_t += lcg.uniform(_MIN_BENIGN_SEND_GAP, _MIN_BENIGN_SEND_GAP + 5.0)
    return events, increments


def _idle_overlay(
    lcg: Lcg64, duration: int, pid: int, proc: str, fn: str, cat: Category, period: float
) -> list[FunctionCallEvent]:
    """Background polling of an application nobody is using."""
    events = []
    t = lcg.uniform(0.5, period)
    while t < duration - 0.2:
        events.append(_plain(t, pid, proc, fn, cat))
        t += lcg.uniform(0.7 * period, 1.3 * period)
    return events


def _background_overlay(lcg: Lcg64, duration: int, pid: int) -> list[FunctionCallEvent]:
    return _idle_overlay(lcg, duration, pid, "explorer", "RegQueryValue", Category.REGISTRY, 20.0)


def _make_snapshots(
    times: list[int], lcg_base: tuple[int, int, int, int], increments: list[_Increment]
) -> list[NetstatSnapshot]:
    du, fca, rst, pkts0 = lcg_base
    pkts = float(pkts0)
    increments = sorted(increments, key=lambda inc: inc[0])
    snapshots = []
    idx = 0
    for t in times:
        while idx < len(increments) and increments[idx][0] <= t:
            _, d_du, d_fca, d_rst, d_pkts = increments[idx]
            du += d_du
            fca += d_fca
            rst += d_rst
            pkts += d_pkts
            idx += 1
        snapshots.append(NetstatSnapshot(t=float(t), du=du, fca=fca, rst=rst, pkts_sent=int(pkts)))
    return snapshots


def generate_scenario(spec: ScenarioSpec) -> Session:
    """Build the deterministic session for a scenario spec.

    Equal specs yield equal sessions; the event and snapshot streams also
    round-trip through the JSONL log formats unchanged.
    """
    lcg = Lcg64(spec.seed ^ _KIND_SALT[spec.kind])
    base = (lcg.randint(0, 4), lcg.randint(0, 6), lcg.randint(0, 3), lcg.randint(100, 5000))
    bot_pid = lcg.randint(1000, 9999)
    chat_pid = lcg.randint(1000, 9999)
    browse_pid = lcg.randint(1000, 9999)
    misc_pid = lcg.randint(1000, 9999)

    events: list[FunctionCallEvent] = []
    increments: list[_Increment] = []

    if spec.kind in (ScenarioKind.BOT_INACTIVE, ScenarioKind.BOT_ACTIVE):
        bot_events, bot_incs = _bot_campaign(lcg, spec, bot_pid)
        events += bot_events
        increments += bot_incs
        if spec.kind is ScenarioKind.BOT_ACTIVE:
            chat_events, chat_incs = _chat_overlay(lcg, spec.duration, chat_pid)
            browse_events, browse_incs = _browse_overlay(lcg, spec.duration, browse_pid)
            events += chat_events + browse_events
            increments += chat_incs + browse_incs
        else:
            events += _idle_overlay(
                lcg, spec.duration, browse_pid, "firefox", "RegQueryValue", Category.REGISTRY, 4.0
            )
            events += _idle_overlay(
                lcg, spec.duration, chat_pid, "icechat", "ReadFile", Category.FILE, 6.0
            )
        poll_times = list(range(0, spec.duration + 1))
    else:
        if spec.kind is ScenarioKind.BENIGN_CHAT:
            overlay_events, overlay_incs = _chat_overlay(lcg, spec.duration, chat_pid)
        else:
            overlay_events, overlay_incs = _browse_overlay(lcg, spec.duration, browse_pid)
        events += overlay_events
        increments += overlay_incs
        events += _background_overlay(lcg, spec.duration, misc_pid)
        poll_times = list(range(0, spec.duration, _BENIGN_POLL))
        if poll_times[-1] != spec.duration:
            poll_times.append(spec.duration)

    snapshots = _make_snapshots(poll_times, base, increments)
    return merge_session(events, snapshots)
