"""Meditation-weighted crossfade between two tracks.

The blend is a convex combination: out = g1*t1 + g2*t2 with g1 = m and
g2 = 1 - m, so the gains always sum to exactly 1.  At the rails (m exactly
0 or 1) the other track is passed through untouched rather than multiplied
by a zero gain, which keeps the output bit-identical to the source.
"""

from __future__ import annotations

import warnings

import numpy as np

from ..trace import MTrace
from .track import AudioTrack


def crossfade_gains(m: float) -> tuple[float, float]:
    """Gain pair (g1, g2) = (m, 1-m).  Out-of-range m clamps with a warning."""
    m = float(m)
    if not 0.0 <= m <= 1.0:
        warnings.warn(
            f"crossfade m={m} outside [0, 1], clamping", RuntimeWarning, stacklevel=2
        )
        m = min(1.0, max(0.0, m))
    return m, 1.0 - m


def _blend(a: np.ndarray, b: np.ndarray, m: np.ndarray) -> np.ndarray:
    # np.where keeps the boundaries exact: no 0.0*x + 1.0*y rounding, no -0.0
    mixed = m * a + (1.0 - m) * b
    return np.where(m == 1.0, a, np.where(m == 0.0, b, mixed))


def mix(t1: AudioTrack, t2: AudioTrack, m_trace: MTrace) -> AudioTrack:
    """Sample-wise crossfade driven by a trace.

    Output sample i sits at trace time start + i/rate; m is linearly
    interpolated between trace points and held beyond the ends.  The output
    is as long as the shorter input.
    """
    if t1.sample_rate != t2.sample_rate:
        raise ValueError(
            f"sample rate mismatch: {t1.sample_rate} vs {t2.sample_rate}"
        )
    if t1.channels != t2.channels:
        raise ValueError(f"channel mismatch: {t1.channels} vs {t2.channels}")
    frames = min(t1.frames, t2.frames)
    times = m_trace.start + np.arange(frames) / t1.sample_rate
    m = np.asarray(m_trace.sample(times))[:, np.newaxis]
    out = _blend(t1.samples[:frames], t2.samples[:frames], m)
    return AudioTrack(out, t1.sample_rate)


class RealtimeCrossfader:
    """Block-based crossfader for the live audio path.

    One control thread publishes m through set_m; the audio thread calls
    process.  The handoff is a single float attribute write, atomic under
    the interpreter, so no lock is ever taken on the audio side.  Within a
    block the gain ramps linearly from the previous block's m to the newest
    published value to avoid zipper noise.  Both tracks loop.

    process() writes into caller-owned buffers and works entirely in
    scratch arrays allocated up front.
    """

    def __init__(
        self,
        track_high: AudioTrack,
        track_low: AudioTrack,
        block_size: int,
        m: float = 0.5,
    ) -> None:
        if track_high.sample_rate != track_low.sample_rate:
            raise ValueError("tracks must share a sample rate")
        if track_high.channels != track_low.channels:
            raise ValueError("tracks must share a channel count")
        if block_size <= 0:
            raise ValueError("block_size must be positive")
        if track_high.frames == 0 or track_low.frames == 0:
            raise ValueError("tracks must be non-empty")
        self.sample_rate = track_high.sample_rate
        self.channels = track_high.channels
        self.block_size = block_size
        self._src1 = track_high.samples
        self._src2 = track_low.samples
        self._pos1 = 0
        self._pos2 = 0
        self._m_target = self._clamped(m)
        self._m_prev = self._m_target
        shape = (block_size, self.channels)
        self._seg1 = np.empty(shape)
        self._seg2 = np.empty(shape)
        self._gain = np.empty((block_size, 1))
        self._inv_gain = np.empty((block_size, 1))
        self._slope = np.linspace(0.0, 1.0, block_size, endpoint=False)[:, np.newaxis]

    @staticmethod
    def _clamped(m: float) -> float:
        return min(1.0, max(0.0, float(m)))

    def set_m(self, m: float) -> None:
        self._m_target = self._clamped(m)

    def _fill_looped(self, dest: np.ndarray, src: np.ndarray, pos: int) -> int:
        n = dest.shape[0]
        length = src.shape[0]
        written = 0
        while written < n:
            take = min(n - written, length - pos)
            np.copyto(dest[written : written + take], src[pos : pos + take])
            written += take
            pos = (pos + take) % length
        return pos

    def process(self, out: np.ndarray) -> None:
        if out.shape != (self.block_size, self.channels):
            raise ValueError(f"out must have shape {(self.block_size, self.channels)}")
        target = self._m_target  # read the handoff once per block
        prev = self._m_prev
        self._pos1 = self._fill_looped(self._seg1, self._src1, self._pos1)
        self._pos2 = self._fill_looped(self._seg2, self._src2, self._pos2)

        if prev == target == 1.0:
            np.copyto(out, self._seg1)
        elif prev == target == 0.0:
            np.copyto(out, self._seg2)
        else:
            np.multiply(self._slope, target - prev, out=self._gain)
            np.add(self._gain, prev, out=self._gain)
            np.subtract(1.0, self._gain, out=self._inv_gain)
            np.multiply(self._seg1, self._gain, out=out)
            np.multiply(self._seg2, self._inv_gain, out=self._seg2)
            np.add(out, self._seg2, out=out)
        self._m_prev = target
