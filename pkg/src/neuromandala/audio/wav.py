"""Minimal WAV reader/writer.

Covers the two encodings this project emits and consumes: 16-bit PCM and
32-bit IEEE float, mono or stereo.  The stdlib `wave` module does not handle
float data, hence the hand-rolled RIFF walk.  Unknown chunks are skipped, so
files with LIST/INFO metadata still load.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

_FMT_PCM = 1
_FMT_FLOAT = 3


def write_wav(
    path: str | Path,
    samples: np.ndarray,
    sample_rate: int,
    sample_format: str = "float32",
) -> None:
    data = np.asarray(samples, dtype=np.float64)
    if data.ndim == 1:
        data = data[:, np.newaxis]
    if data.ndim != 2 or data.shape[1] not in (1, 2):
        raise ValueError("samples must be (frames, channels) with 1 or 2 channels")
    channels = data.shape[1]

    if sample_format == "pcm16":
        fmt_code = _FMT_PCM
        bits = 16
        clipped = np.clip(data, -1.0, 1.0)
        payload = np.round(clipped * 32767.0).astype("<i2").tobytes()
    elif sample_format == "float32":
        fmt_code = _FMT_FLOAT
        bits = 32
        payload = data.astype("<f4").tobytes()
    else:
        raise ValueError(f"unknown sample format {sample_format!r}")

    block_align = channels * bits // 8
    byte_rate = sample_rate * block_align
    fmt_chunk = struct.pack(
        "<HHIIHH", fmt_code, channels, sample_rate, byte_rate, block_align, bits
    )

    with open(path, "wb") as fh:
        fh.write(b"RIFF")
        fh.write(struct.pack("<I", 4 + 8 + len(fmt_chunk) + 8 + len(payload)))
        fh.write(b"WAVE")
        fh.write(b"fmt ")
        fh.write(struct.pack("<I", len(fmt_chunk)))
        fh.write(fmt_chunk)
        fh.write(b"data")
        fh.write(struct.pack("<I", len(payload)))
        fh.write(payload)
        if len(payload) % 2:
            fh.write(b"\x00")


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Returns (samples as float64 (frames, channels), sample_rate)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise ValueError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos : pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8 : pos + 8 + size]
        if chunk_id == b"fmt ":
            fmt = body
        elif chunk_id == b"data":
            data = body
        pos += 8 + size + (size % 2)

    if fmt is None or data is None:
        raise ValueError(f"{path}: missing fmt or data chunk")
    if len(fmt) < 16:
        raise ValueError(f"{path}: truncated fmt chunk")
    fmt_code, channels, sample_rate, _, _, bits = struct.unpack_from("<HHIIHH", fmt)
    if channels not in (1, 2):
        raise ValueError(f"{path}: unsupported channel count {channels}")

    if fmt_code == _FMT_PCM and bits == 16:
        ints = np.frombuffer(data, dtype="<i2")
        samples = ints.astype(np.float64) / 32767.0
    elif fmt_code == _FMT_FLOAT and bits == 32:
        samples = np.frombuffer(data, dtype="<f4").astype(np.float64)
    else:
        raise ValueError(
            f"{path}: unsupported encoding (format {fmt_code}, {bits}-bit)"
        )

    frames = samples.size // channels
    return samples[: frames * channels].reshape(frames, channels), int(sample_rate)
