"""Deterministic batch rendering: trace in, frames and audio out.

This is the reproducibility backbone: everything here is a pure function
of (config, trace, seed), so the same inputs always produce byte-identical
output files.  Frame rows are written at full float precision (repr), which
both round-trips losslessly and diffs cleanly against golden files.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .audio import AudioTrack, GranularConfig, granular_render, mix
from .mandala import MandalaConfig, step_frame
from .trace import MTrace

FRAME_CSV_HEADER = "t,m,q,x,y"


@dataclass(frozen=True, eq=False)
class FrameTable:
    """Rendered particle trajectories: one row per (frame, particle)."""

    times: np.ndarray  # (frames,)
    m_values: np.ndarray  # (frames,)
    positions: np.ndarray  # (frames, particles, 2)

    def __post_init__(self) -> None:
        if not (
            self.times.ndim == 1
            and self.m_values.shape == self.times.shape
            and self.positions.ndim == 3
            and self.positions.shape[0] == self.times.size
            and self.positions.shape[2] == 2
        ):
            raise ValueError("inconsistent frame table shapes")

    @property
    def frame_count(self) -> int:
        return self.times.size

    @property
    def particle_count(self) -> int:
        return self.positions.shape[1]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            write_frames_csv(fh, self)

    @classmethod
    def read_csv(cls, path: str | Path) -> "FrameTable":
        with open(path, "r", newline="") as fh:
            return read_frames_csv(fh)


def write_frames_csv(fh: io.TextIOBase, table: FrameTable) -> None:
    fh.write(FRAME_CSV_HEADER + "\n")
    for k in range(table.frame_count):
        t = float(table.times[k])
        m = float(table.m_values[k])
        for q in range(table.particle_count):
            x, y = table.positions[k, q]
            fh.write(f"{t!r},{m!r},{q},{float(x)!r},{float(y)!r}\n")


def read_frames_csv(fh: io.TextIOBase) -> FrameTable:
    header = fh.readline().strip()
    if header != FRAME_CSV_HEADER:
        raise ValueError(f"not a frames CSV (header {header!r})")
    times: list[float] = []
    m_values: list[float] = []
    frames: list[list[tuple[float, float]]] = []
    current_t: Optional[float] = None
    for line in fh:
        line = line.strip()
        if not line:
            continue
        t_str, m_str, q_str, x_str, y_str = line.split(",")
        t = float(t_str)
        if current_t is None or t != current_t:
            current_t = t
            times.append(t)
            m_values.append(float(m_str))
            frames.append([])
        if int(q_str) != len(frames[-1]):
            raise ValueError("particle rows out of order")
        frames[-1].append((float(x_str), float(y_str)))
    if not times:
        raise ValueError("frames CSV has no rows")
    counts = {len(f) for f in frames}
    if len(counts) != 1:
        raise ValueError("frames differ in particle count")
    return FrameTable(
        times=np.asarray(times),
        m_values=np.asarray(m_values),
        positions=np.asarray(frames),
    )


def render_frames(
    cfg: MandalaConfig,
    trace: MTrace,
    frame_rate: int,
    duration: Optional[float] = None,
) -> FrameTable:
    """Sample the mandala at frame_rate steps across the trace.

    Frame k sits at trace.start + k * (1/frame_rate), the same arithmetic
    the live engine uses for tick k, so a live session replayed offline
    lands on bit-identical frame times.  m is linearly interpolated.  A
    single-point trace (span 0) renders one second of constant m.
    """
    if not 1 <= int(frame_rate) <= 240:
        raise ValueError("frame_rate must be in [1, 240]")
    if duration is None:
        duration = trace.span if trace.span > 0 else 1.0
    count = int(round(duration * frame_rate)) + 1
    period = 1.0 / frame_rate
    times = trace.start + np.arange(count) * period
    m_values = np.asarray(trace.sample(times))
    noise = cfg.noise_bank()
    positions = np.empty((count, cfg.particle_count, 2))
    for k in range(count):
        frame = step_frame(cfg, noise, float(times[k]), float(m_values[k]))
        positions[k] = frame.positions
    return FrameTable(times=times, m_values=m_values, positions=positions)


def render_audio(
    mode: str,
    trace: MTrace,
    *,
    track_high: Optional[AudioTrack] = None,
    track_low: Optional[AudioTrack] = None,
    track: Optional[AudioTrack] = None,
    granular_cfg: Optional[GranularConfig] = None,
    duration: Optional[float] = None,
) -> AudioTrack:
    """Render the audio mapping over a trace.

    crossfade needs track_high (weighted m) and track_low (weighted 1-m);
    granular needs track and granular_cfg.  Deterministic for a fixed seed.
    """
    if mode == "crossfade":
        if track_high is None or track_low is None:
            raise ValueError("crossfade needs track_high and track_low")
        return mix(track_high, track_low, trace)
    if mode == "granular":
        if track is None:
            raise ValueError("granular needs a source track")
        if granular_cfg is None:
            granular_cfg = GranularConfig()
        rendered = granular_render(track, trace, granular_cfg, duration=duration)
        assert isinstance(rendered, AudioTrack)
        return rendered
    raise ValueError(f"unknown audio mode {mode!r} (want crossfade or granular)")
