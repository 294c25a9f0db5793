"""In-memory audio buffers."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class AudioTrack:
    """Float64 samples, shape (frames, channels), nominally in [-1, 1].

    Channels are columns, so every channel has the same length by
    construction.  Mono is channels == 1, not a 1-D array.
    """

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim == 1:
            samples = samples[:, np.newaxis]
        if samples.ndim != 2:
            raise ValueError("samples must be a (frames, channels) array")
        if samples.shape[1] not in (1, 2):
            raise ValueError(f"unsupported channel count {samples.shape[1]}")
        if samples.size and not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        rate = int(self.sample_rate)
        if rate <= 0:
            raise ValueError("sample_rate must be positive")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", rate)

    @property
    def frames(self) -> int:
        return self.samples.shape[0]

    @property
    def channels(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.frames / self.sample_rate

    @classmethod
    def silence(cls, frames: int, sample_rate: int, channels: int = 1) -> "AudioTrack":
        return cls(np.zeros((frames, channels)), sample_rate)

    @classmethod
    def load(cls, path: str | Path) -> "AudioTrack":
        from .wav import read_wav

        samples, rate = read_wav(path)
        return cls(samples, rate)

    def save(self, path: str | Path, sample_format: str = "float32") -> None:
        from .wav import write_wav

        write_wav(path, self.samples, self.sample_rate, sample_format)
