"""Session orchestration.

The engine is a pure-ish tick function wrapped in a paced loop.  Each tick
runs the whole pipeline for one instant of logical time t:

    poll source -> hold on bad signal -> smooth -> apply direction
        -> particle frame + crossfade gains + granular params
        -> OSC / subscriber emissions

Logical time is i / frame_rate for tick i.  The wall clock only decides
*when* a tick runs, never what it computes, so two sessions with the same
config and seed emit identical data no matter how the host schedules them.

Single-m coherence: every consumer of tick i (frame, gains, OSC values)
sees the same effective m, captured once per tick.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from ..audio import (
    AudioTrack,
    GranularConfig,
    RealtimeCrossfader,
    RealtimeGranular,
    crossfade_gains,
)
from ..mandala import MandalaConfig, ParticleFrame, step_frame
from ..osc import (
    ADDR_ATTENTION,
    ADDR_MEDITATION,
    ADDR_MODE,
    ADDR_PARTICLE,
    ADDR_RAW,
    OscMessage,
    OscSender,
)
from ..signals import SmoothedSignal, normalize, smooth_step
from ..trace import MTrace
from .config import SessionConfig
from .sources import ManualSource, make_source

# Parameters the UI and REST layer may change mid-session.
PARAM_WHITELIST = frozenset(
    {
        "noise_amplitude",
        "noise_frequency",
        "outer_radius",
        "inner_radius",
        "outer_speed",
        "inner_speed",
        "time_constant",
        "alpha",
        "base_rate",
    }
)

_MANDALA_PARAMS = frozenset(
    {
        "noise_amplitude",
        "noise_frequency",
        "outer_radius",
        "inner_radius",
        "outer_speed",
        "inner_speed",
    }
)


def apply_direction(direction: str, m: float) -> float:
    """forward keeps m; reverse plays the complement 1-m."""
    if direction == "forward":
        return m
    if direction == "reverse":
        return 1.0 - m
    raise ValueError(f"direction must be forward or reverse, got {direction!r}")


@dataclass(frozen=True)
class EngineState:
    """Snapshot of a running session."""

    t: float
    m: float  # effective (direction applied)
    a: float
    mode: str
    source: str
    degraded: bool
    poor_signal: int
    frame: Optional[ParticleFrame]
    frames_emitted: int
    samples_received: int
    parse_errors: int
    clip_count: int


@dataclass(frozen=True)
class TickResult:
    t: float
    m: float  # effective m every consumer of this tick sees
    a: float
    frame: ParticleFrame
    gains: tuple[float, float]
    granular_rate: float
    granular_jitter_scale: float
    messages: tuple[OscMessage, ...]
    degraded: bool
    poor_signal: int
    mode: str


class Engine:
    """One session's pipeline state.  tick() is driven by a single thread;
    control mutations from other threads go through the pending queue and
    are applied at the top of the next tick."""

    def __init__(self, config: SessionConfig, audio_sink: Optional[Callable] = None):
        self.config = config
        self.mapping = config.mapping
        self._wall_start = time.monotonic()
        self.source = make_source(
            config, clock=lambda: time.monotonic() - self._wall_start
        )
        self.mandala_cfg = config.mandala
        self.noise = self.mandala_cfg.noise_bank()
        self.smoothing = SmoothedSignal(
            m=0.5, a=0.5, time_constant=config.time_constant, last_update=0.0
        )
        self._target_m = 0.5
        self._target_a = 0.5
        self._last_sample_ts: Optional[float] = None
        self._last_raw_meditation = 50
        self._poor_signal = 0
        self._signal_poor = False
        self._next_osc = 0.0
        self._mode_dirty = True  # announce mode on the first tick
        self._pending: dict = {}
        self._pending_lock = threading.Lock()
        self.frames_emitted = 0
        self.samples_received = 0
        self._last_state: Optional[EngineState] = None
        self._state_lock = threading.Lock()

        self.audio_sink = audio_sink
        self.crossfader: Optional[RealtimeCrossfader] = None
        self.granular: Optional[RealtimeGranular] = None
        audio = config.audio
        if audio.mode == "crossfade":
            high = AudioTrack.load(audio.track_high)
            low = AudioTrack.load(audio.track_low)
            self.crossfader = RealtimeCrossfader(high, low, audio.block_size)
        elif audio.mode == "granular":
            track = AudioTrack.load(audio.track)
            self.granular = RealtimeGranular(track, audio.granular, audio.block_size)

        self.senders = [OscSender(ep) for ep in config.osc_out]

    # -- control surface (safe from any thread) --------------------------

    def set_manual_m(self, m: float) -> None:
        if not isinstance(self.source, ManualSource):
            raise ValueError("set_m requires the manual source")
        self.source.set_m(m)

    def set_mapping(self, mapping: str) -> None:
        if mapping not in ("forward", "reverse"):
            raise ValueError("mapping must be forward or reverse")
        with self._pending_lock:
            self._pending["mapping"] = mapping

    def set_param(self, name: str, value: float) -> None:
        if name not in PARAM_WHITELIST:
            raise ValueError(f"parameter {name!r} is not adjustable")
        with self._pending_lock:
            self._pending[name] = float(value)

    def _apply_pending(self) -> None:
        with self._pending_lock:
            if not self._pending:
                return
            pending, self._pending = self._pending, {}
        mandala_changes = {}
        for name, value in pending.items():
            if name == "mapping":
                if value != self.mapping:
                    self.mapping = value
                    self._mode_dirty = True
            elif name == "time_constant":
                self.smoothing = replace(self.smoothing, time_constant=value)
            elif name in ("alpha", "base_rate"):
                audio = self.config.audio
                granular = replace(audio.granular, **{name: value})
                self.config = replace(
                    self.config, audio=replace(audio, granular=granular)
                )
                if self.granular is not None:
                    self.granular.cfg = granular
            elif name in _MANDALA_PARAMS:
                mandala_changes[name] = value
        if mandala_changes:
            self.mandala_cfg = replace(self.mandala_cfg, **mandala_changes)
            self.noise = self.mandala_cfg.noise_bank()

    # -- the pipeline -----------------------------------------------------

    def tick(self, t: float) -> TickResult:
        self._apply_pending()
        cfg = self.config

        sample = self.source.poll(t)
        if sample is not None and sample.timestamp != self._last_sample_ts:
            self._last_sample_ts = sample.timestamp
            self.samples_received += 1
            self._poor_signal = sample.poor_signal
            self._signal_poor = sample.poor_signal > cfg.poor_signal_threshold
            if not self._signal_poor:
                if isinstance(self.source, ManualSource):
                    # exact float, bypassing the 0..100 quantization
                    self._target_m = self.source.m
                    self._target_a = 1.0 - self.source.m
                else:
                    self._target_m = normalize(sample.meditation)
                    self._target_a = normalize(sample.attention)
                self._last_raw_meditation = sample.meditation

        last_seen = self._last_sample_ts if self._last_sample_ts is not None else 0.0
        starved = (
            self.source.kind != "manual"
            and t - last_seen > cfg.starvation_timeout
        )
        degraded = starved or self._signal_poor

        if not degraded:
            dt = t - self.smoothing.last_update
            if self.smoothing.time_constant == 0.0:
                self.smoothing = replace(
                    self.smoothing,
                    m=self._target_m,
                    a=self._target_a,
                    last_update=t,
                )
            elif dt > 0.0:
                self.smoothing = smooth_step(
                    self.smoothing, self._target_m, dt, target_a=self._target_a
                )
        # degraded: smoothing frozen, emitted m constant at the last value

        m_eff = apply_direction(self.mapping, self.smoothing.m)
        frame = step_frame(self.mandala_cfg, self.noise, t, m_eff)
        gains = crossfade_gains(m_eff)
        granular_cfg = cfg.audio.granular
        granular_rate = m_eff * granular_cfg.base_rate
        granular_jitter = granular_cfg.alpha * (1.0 - m_eff)

        if self.crossfader is not None:
            self.crossfader.set_m(m_eff)
        if self.granular is not None:
            self.granular.set_m(m_eff)

        messages: list[OscMessage] = []
        if self._mode_dirty:
            messages.append(OscMessage(ADDR_MODE, (self.mapping,)))
            self._mode_dirty = False
        if t >= self._next_osc:
            messages.append(OscMessage(ADDR_MEDITATION, (m_eff,)))
            messages.append(OscMessage(ADDR_ATTENTION, (self.smoothing.a,)))
            messages.append(OscMessage(ADDR_RAW, (self._last_raw_meditation,)))
            self._next_osc += 1.0 / cfg.osc_rate
        if cfg.emit_particles:
            for q in range(frame.positions.shape[0]):
                x, y = frame.positions[q]
                messages.append(OscMessage(ADDR_PARTICLE, (q, float(x), float(y))))

        self.frames_emitted += 1
        result = TickResult(
            t=t,
            m=m_eff,
            a=self.smoothing.a,
            frame=frame,
            gains=gains,
            granular_rate=granular_rate,
            granular_jitter_scale=granular_jitter,
            messages=tuple(messages),
            degraded=degraded,
            poor_signal=self._poor_signal,
            mode=self.mapping,
        )
        with self._state_lock:
            self._last_state = EngineState(
                t=t,
                m=m_eff,
                a=self.smoothing.a,
                mode=self.mapping,
                source=self.source.kind,
                degraded=degraded,
                poor_signal=self._poor_signal,
                frame=frame,
                frames_emitted=self.frames_emitted,
                samples_received=self.samples_received,
                parse_errors=self.source.parse_errors(),
                clip_count=self.clip_count,
            )
        return result

    @property
    def clip_count(self) -> int:
        return self.granular.clip_count if self.granular is not None else 0

    def snapshot(self) -> EngineState:
        with self._state_lock:
            if self._last_state is not None:
                return self._last_state
        return EngineState(
            t=0.0,
            m=apply_direction(self.mapping, self.smoothing.m),
            a=self.smoothing.a,
            mode=self.mapping,
            source=self.source.kind,
            degraded=False,
            poor_signal=0,
            frame=None,
            frames_emitted=0,
            samples_received=0,
            parse_errors=0,
            clip_count=0,
        )

    def emit(self, messages: tuple[OscMessage, ...]) -> None:
        for sender in self.senders:
            for msg in messages:
                sender.send(msg)

    def close(self) -> None:
        self.source.close()
        for sender in self.senders:
            sender.close()


FrameSubscriber = Callable[[dict], None]


@dataclass
class SessionRecord:
    """Logical-time record of a session, for export and determinism checks."""

    times: list = field(default_factory=list)
    m_values: list = field(default_factory=list)
    frames: list = field(default_factory=list)

    def trace(self) -> MTrace:
        return MTrace(np.asarray(self.times), np.asarray(self.m_values))


class SessionHandle:
    """Start/stop control and state inspection for a live session."""

    def __init__(
        self,
        engine: Engine,
        record: bool = False,
        max_ticks: Optional[int] = None,
    ) -> None:
        self.engine = engine
        self.record = SessionRecord() if record else None
        self.max_ticks = max_ticks
        self._subscribers: list[FrameSubscriber] = []
        self._status_subscribers: list[FrameSubscriber] = []
        self._stop = threading.Event()
        self._frame_thread: Optional[threading.Thread] = None
        self._audio_thread: Optional[threading.Thread] = None
        self._last_status: Optional[dict] = None

    def subscribe_frames(self, fn: FrameSubscriber) -> None:
        self._subscribers.append(fn)

    def subscribe_status(self, fn: FrameSubscriber) -> None:
        self._status_subscribers.append(fn)

    def start(self) -> "SessionHandle":
        if self._frame_thread is not None:
            raise RuntimeError("session already started")
        self.engine._wall_start = time.monotonic()
        self._frame_thread = threading.Thread(
            target=self._frame_loop, daemon=True, name="frame-clock"
        )
        self._frame_thread.start()
        processor = self.engine.crossfader or self.engine.granular
        if processor is not None and self.engine.audio_sink is not None:
            self._audio_thread = threading.Thread(
                target=self._audio_loop,
                args=(processor,),
                daemon=True,
                name="audio-pump",
            )
            self._audio_thread.start()
        return self

    def _frame_loop(self) -> None:
        period = 1.0 / self.engine.config.frame_rate
        start = time.monotonic()
        i = 0
        while not self._stop.is_set():
            if self.max_ticks is not None and i >= self.max_ticks:
                break
            deadline = start + i * period
            delay = deadline - time.monotonic()
            if delay > 0 and self._stop.wait(delay):
                break
            result = self.engine.tick(i * period)
            self._dispatch(result)
            i += 1

    def _audio_loop(self, processor) -> None:
        block = np.zeros((processor.block_size, processor.channels))
        period = processor.block_size / processor.sample_rate
        start = time.monotonic()
        i = 0
        while not self._stop.is_set():
            deadline = start + i * period
            delay = deadline - time.monotonic()
            if delay > 0 and self._stop.wait(delay):
                break
            processor.process(block)
            self.engine.audio_sink(block)
            i += 1

    def _dispatch(self, result: TickResult) -> None:
        if result.messages:
            self.engine.emit(result.messages)
        if self.record is not None:
            self.record.times.append(result.t)
            self.record.m_values.append(result.m)
            self.record.frames.append(result.frame)
        if self._subscribers:
            payload = {
                "type": "frame",
                "t": result.t,
                "m": result.m,
                "positions": result.frame.positions.tolist(),
            }
            for fn in self._subscribers:
                fn(payload)
        status = {
            "type": "status",
            "source": self.engine.source.kind,
            "poorSignal": result.poor_signal,
            "mode": result.mode,
            "degraded": result.degraded,
        }
        if status != self._last_status:
            self._last_status = status
            for fn in self._status_subscribers:
                fn(status)

    def state(self) -> EngineState:
        return self.engine.snapshot()

    def join(self, timeout: Optional[float] = None) -> None:
        if self._frame_thread is not None:
            self._frame_thread.join(timeout)

    def stop(self) -> None:
        self._stop.set()
        for thread in (self._frame_thread, self._audio_thread):
            if thread is not None:
                thread.join(timeout=5.0)
        self.engine.close()

    def __enter__(self) -> "SessionHandle":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def run(
    config: SessionConfig,
    audio_sink: Optional[Callable] = None,
    record: bool = False,
    max_ticks: Optional[int] = None,
) -> SessionHandle:
    """Construct and start a session.  Bad config (missing files, bad
    serial path) raises here, before any thread starts."""
    engine = Engine(config, audio_sink=audio_sink)
    return SessionHandle(engine, record=record, max_ticks=max_ticks).start()
