"""Constant-pitch granular playback driven by the meditation level.

The source track is never resampled.  Instead a read-head moves through it
at m(t) * base_rate, and short Hann-windowed grains are cut from the head's
neighbourhood and overlap-added at a fixed hop.  High m plays the track
nearly normally; low m freezes the head and scatters grain positions by a
per-grain uniform jitter scaled by alpha * (1 - m).  Grains keep firing on
the hop clock even at rate zero, so m = 0 sounds like a frozen, jumbled
texture rather than silence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..trace import MTrace
from .track import AudioTrack


@dataclass(frozen=True)
class GranularConfig:
    base_rate: float = 1.0  # playback-rate multiple at m = 1
    alpha: float = 0.5  # jitter magnitude scale, seconds
    grain_duration: float = 0.05  # seconds
    grain_overlap: float = 0.5  # fraction of grain_duration shared with the next
    envelope: str = "hann"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.base_rate <= 0:
            raise ValueError("base_rate must be > 0")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.grain_duration <= 0:
            raise ValueError("grain_duration must be > 0")
        if not 0.0 <= self.grain_overlap < 1.0:
            raise ValueError("grain_overlap must be in [0, 1)")
        if self.envelope != "hann":
            raise ValueError("only the hann envelope is supported")

    @property
    def hop(self) -> float:
        """Seconds between grain onsets."""
        return self.grain_duration * (1.0 - self.grain_overlap)


@dataclass(frozen=True)
class GrainEvent:
    onset: int  # output sample index
    source_position: float  # seconds into the source, after jitter and clamp
    duration: float  # seconds
    read_head: float  # head position the grain was cut around, seconds
    m: float  # m at grain onset
    jitter: float  # signed jitter applied, seconds
    envelope: str = "hann"


@dataclass(frozen=True)
class GranularReport:
    grains: list[GrainEvent] = field(default_factory=list)
    final_read_head: float = 0.0  # total head travel in source seconds, unwrapped
    clip_count: int = 0


def granular_params(m: float, cfg: GranularConfig, n: float) -> tuple[float, float]:
    """Instantaneous (playback rate, position jitter) for level m.

    rate = m * base_rate; jitter = alpha * (1 - m) * n with n the caller's
    noise draw in [-1, 1].
    """
    rate = m * cfg.base_rate
    delta_tau = cfg.alpha * (1.0 - m) * n
    return rate, delta_tau


def hann_window(length: int) -> np.ndarray:
    # periodic form: at 50% overlap adjacent windows sum to exactly 1
    k = np.arange(length)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * k / length)


def granular_render(
    track: AudioTrack,
    m_trace: MTrace,
    cfg: GranularConfig,
    duration: Optional[float] = None,
    with_report: bool = False,
) -> AudioTrack | tuple[AudioTrack, GranularReport]:
    """Render the granular stream over the trace's span.

    The read-head integrates m(t) * base_rate exactly (the trace is
    piecewise linear, so the integral is closed-form).  Grain k fires at
    k * hop, cuts grain_duration seconds starting at
    clamp(head + alpha*(1-m)*n_k), and is Hann-windowed into the output.
    The head wraps around the source so long sessions never run off the
    end; the report's final_read_head is the unwrapped total.  Output is
    hard-clamped to [-1, 1] with the clip count reported.
    """
    if track.frames == 0:
        raise ValueError("source track is empty")
    sr = track.sample_rate
    grain_frames = max(1, round(cfg.grain_duration * sr))
    if track.frames < grain_frames:
        raise ValueError("source track is shorter than one grain")
    if duration is None:
        duration = m_trace.span
    out_frames = round(duration * sr)
    if out_frames <= 0:
        raise ValueError("output duration is empty; pass duration or a longer trace")

    hop_frames = max(1, round(cfg.hop * sr))
    window = hann_window(grain_frames)[:, np.newaxis]
    usable = (track.frames - grain_frames) / sr  # head range with a full grain after it
    rng = np.random.default_rng(cfg.seed)

    onsets = np.arange(0, out_frames, hop_frames)
    onset_times = m_trace.start + onsets / sr
    heads = cfg.base_rate * np.asarray(m_trace.integral_to(onset_times))
    m_at = np.asarray(m_trace.sample(onset_times))

    out = np.zeros((out_frames, track.channels))
    grains: list[GrainEvent] = []
    for onset, head, m in zip(onsets, heads, m_at):
        n_k = rng.uniform(-1.0, 1.0)
        wrapped = head % usable if usable > 0 else 0.0
        jitter = cfg.alpha * (1.0 - m) * n_k
        position = min(usable, max(0.0, wrapped + jitter))
        start = round(position * sr)
        length = min(grain_frames, out_frames - onset)
        out[onset : onset + length] += (
            window[:length] * track.samples[start : start + length]
        )
        grains.append(
            GrainEvent(
                onset=int(onset),
                source_position=position,
                duration=cfg.grain_duration,
                read_head=wrapped,
                m=float(m),
                jitter=float(jitter),
            )
        )

    clip_count = int(np.count_nonzero(np.abs(out) > 1.0))
    np.clip(out, -1.0, 1.0, out=out)
    rendered = AudioTrack(out, sr)
    if not with_report:
        return rendered
    final_head = cfg.base_rate * float(
        m_trace.integral_to(m_trace.start + duration)
    )
    return rendered, GranularReport(
        grains=grains, final_read_head=final_head, clip_count=clip_count
    )


class RealtimeGranular:
    """Block-based granular player for the live path.

    Same handoff discipline as RealtimeCrossfader: set_m is a single float
    write, process reads it once per grain.  The head advances stepwise,
    m * base_rate * hop per grain, which matches the offline integral for
    m held constant across a hop.  Grains are assembled into a rolling
    tail buffer so a grain spanning block boundaries carries over.
    """

    def __init__(
        self,
        track: AudioTrack,
        cfg: GranularConfig,
        block_size: int,
        m: float = 0.5,
    ) -> None:
        if block_size <= 0:
            raise ValueError("block_size must be positive")
        sr = track.sample_rate
        self._grain_frames = max(1, round(cfg.grain_duration * sr))
        if track.frames < self._grain_frames:
            raise ValueError("source track is shorter than one grain")
        self.sample_rate = sr
        self.channels = track.channels
        self.block_size = block_size
        self.cfg = cfg
        self._src = track.samples
        self._usable = (track.frames - self._grain_frames) / sr
        self._hop_frames = max(1, round(cfg.hop * sr))
        self._window = hann_window(self._grain_frames)[:, np.newaxis]
        self._rng = np.random.default_rng(cfg.seed)
        self._m = min(1.0, max(0.0, float(m)))
        self._head = 0.0  # unwrapped, source seconds
        self._next_onset = 0  # absolute output sample of the next grain
        self._out_pos = 0  # absolute output sample of the next block start
        # double-buffered so the per-block shift never copies a region onto
        # itself (overlapping copies would make numpy allocate a temporary)
        self._tail = np.zeros((block_size + self._grain_frames, self.channels))
        self._tail_spare = np.zeros_like(self._tail)
        self._grain_buf = np.empty((self._grain_frames, self.channels))
        self._clip_scratch = np.empty((block_size, self.channels))
        self._clip_mask = np.empty((block_size, self.channels), dtype=bool)
        self.clip_count = 0

    def set_m(self, m: float) -> None:
        self._m = min(1.0, max(0.0, float(m)))

    @property
    def read_head(self) -> float:
        return self._head

    def process(self, out: np.ndarray) -> None:
        if out.shape != (self.block_size, self.channels):
            raise ValueError(f"out must have shape {(self.block_size, self.channels)}")
        block_end = self._out_pos + self.block_size
        while self._next_onset < block_end:
            m = self._m
            n_k = self._rng.uniform(-1.0, 1.0)
            wrapped = self._head % self._usable if self._usable > 0 else 0.0
            jitter = self.cfg.alpha * (1.0 - m) * n_k
            position = min(self._usable, max(0.0, wrapped + jitter))
            start = round(position * self.sample_rate)
            offset = self._next_onset - self._out_pos
            np.multiply(
                self._window,
                self._src[start : start + self._grain_frames],
                out=self._grain_buf,
            )
            self._tail[offset : offset + self._grain_frames] += self._grain_buf
            self._head += m * self.cfg.base_rate * (self._hop_frames / self.sample_rate)
            self._next_onset += self._hop_frames
        np.abs(self._tail[: self.block_size], out=self._clip_scratch)
        np.greater(self._clip_scratch, 1.0, out=self._clip_mask)
        self.clip_count += int(np.count_nonzero(self._clip_mask))
        np.clip(self._tail[: self.block_size], -1.0, 1.0, out=out)
        np.copyto(self._tail_spare[: -self.block_size], self._tail[self.block_size :])
        self._tail_spare[-self.block_size :] = 0.0
        self._tail, self._tail_spare = self._tail_spare, self._tail
        self._out_pos = block_end
