"""Signal sources the engine can poll.

A source answers poll(t) with the newest sample whose timestamp is <= t,
or None if nothing has arrived yet.  Timestamps live on the session's
logical clock (seconds from session start), which is what makes replayed
and simulated sessions reproducible: the wall clock only paces the loop,
it never shows up in the data.

device   reads ThinkGear bytes from a serial port (or any byte device)
         on a background thread, stamping samples on arrival
replay   parses a captured raw byte stream up front; samples surface at
         1 Hz on the logical clock
simulated  evaluates a scripted profile at 1 Hz
manual   holds whatever m the operator (UI or CLI) last injected
"""

from __future__ import annotations

import os
import threading
from bisect import bisect_right
from typing import Optional, Protocol

from ..signals import EsenseSample, SignalProfile, ThinkGearParser, simulate


class SignalSource(Protocol):
    kind: str

    def poll(self, t: float) -> Optional[EsenseSample]: ...

    def parse_errors(self) -> int: ...

    def close(self) -> None: ...


class ManualSource:
    """Operator-driven m.  Exempt from starvation: silence means 'hold'."""

    kind = "manual"

    def __init__(self, m: float = 0.5) -> None:
        self.set_m(m)

    def set_m(self, m: float) -> None:
        if not 0.0 <= m <= 1.0:
            raise ValueError("manual m must be in [0, 1]")
        self.m = float(m)

    def poll(self, t: float) -> Optional[EsenseSample]:
        # quantized form for the raw-value OSC path; the engine reads
        # self.m directly for the effective level so no precision is lost
        raw = round(self.m * 100)
        return EsenseSample(
            timestamp=t, meditation=raw, attention=100 - raw, poor_signal=0
        )

    def parse_errors(self) -> int:
        return 0

    def close(self) -> None:
        pass


class SimulatedSource:
    """Scripted profile sampled at 1 Hz on the logical clock."""

    kind = "simulated"

    def __init__(self, profile: SignalProfile) -> None:
        self.profile = profile
        self._latest: Optional[EsenseSample] = None
        self._last_second = -1

    def poll(self, t: float) -> Optional[EsenseSample]:
        second = int(t)  # t >= 0 on the session clock
        if second > self._last_second:
            self._last_second = second
            self._latest = simulate(self.profile, float(second))
        return self._latest

    def parse_errors(self) -> int:
        return 0

    def close(self) -> None:
        pass


class ReplaySource:
    """Raw captured ThinkGear bytes, parsed up front, replayed at 1 Hz."""

    kind = "replay"

    def __init__(self, path: str) -> None:
        with open(path, "rb") as fh:
            raw = fh.read()
        parser = ThinkGearParser()
        self.samples = parser.feed(raw)
        self._errors = parser.checksum_failures + parser.desyncs
        if not self.samples:
            raise ValueError(f"replay file {path} contains no valid samples")
        self._times = [s.timestamp for s in self.samples]

    def poll(self, t: float) -> Optional[EsenseSample]:
        idx = bisect_right(self._times, t)
        if idx == 0:
            return None
        return self.samples[idx - 1]

    def parse_errors(self) -> int:
        return self._errors

    def close(self) -> None:
        pass


class DeviceSource:
    """Live ThinkGear byte device (serial port, FIFO, character device).

    A reader thread blocks on the descriptor and feeds the parser; samples
    are stamped with the logical arrival time supplied by the clock
    callable.  poll() only swaps a reference, so the engine thread never
    waits on I/O.
    """

    kind = "device"

    def __init__(self, path: str, clock) -> None:
        # open before starting the thread so a bad path fails the session
        # up front rather than after startup
        self._fd = os.open(path, os.O_RDONLY)
        self._parser = ThinkGearParser(clock=clock)
        self._latest: Optional[EsenseSample] = None
        self._lock = threading.Lock()
        self._stop = False
        self._thread = threading.Thread(
            target=self._read_loop, daemon=True, name="signal-source"
        )
        self._thread.start()

    def _read_loop(self) -> None:
        while not self._stop:
            try:
                chunk = os.read(self._fd, 4096)
            except OSError:
                return
            if not chunk:
                return  # EOF; engine will flag starvation
            samples = self._parser.feed(chunk)
            if samples:
                with self._lock:
                    self._latest = samples[-1]

    def poll(self, t: float) -> Optional[EsenseSample]:
        with self._lock:
            latest = self._latest
        if latest is not None and latest.timestamp <= t:
            return latest
        return None

    def parse_errors(self) -> int:
        return self._parser.checksum_failures + self._parser.desyncs

    def close(self) -> None:
        self._stop = True
        try:
            os.close(self._fd)
        except OSError:
            pass
        self._thread.join(timeout=2.0)


def make_source(config, clock) -> SignalSource:
    """Build the configured source.  clock() must return logical seconds."""
    if config.source == "manual":
        return ManualSource(config.manual_m)
    if config.source == "simulated":
        return SimulatedSource(config.profile)
    if config.source == "replay":
        return ReplaySource(config.replay_path)
    if config.source == "device":
        return DeviceSource(config.serial_path, clock)
    raise ValueError(f"unknown source {config.source!r}")
