"""Time-indexed meditation traces.

A trace is an ordered list of (t, m) points with t strictly increasing and
m in [0, 1].  Consumers read it as a continuous function of time: linear
interpolation between points, end values held outside the span.  The CSV
form is `t,m` with a header row, full float precision, so files round-trip
losslessly and diff cleanly.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class MTrace:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if times.ndim != 1 or times.shape != values.shape or times.size == 0:
            raise ValueError("trace needs matching, non-empty times and values")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("trace times must be strictly increasing")
        if not np.all((values >= 0.0) & (values <= 1.0)):
            raise ValueError("trace m values must be in [0, 1]")
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "MTrace":
        arr = np.asarray(list(pairs), dtype=np.float64)
        if arr.size == 0:
            raise ValueError("trace needs at least one (t, m) pair")
        return cls(times=arr[:, 0], values=arr[:, 1])

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    @property
    def span(self) -> float:
        return self.end - self.start

    def sample(self, at: np.ndarray | float) -> np.ndarray | float:
        """m at the given times; linear between points, held outside."""
        out = np.interp(at, self.times, self.values)
        return float(out) if np.isscalar(at) else out

    def integral_to(self, at: np.ndarray | float) -> np.ndarray | float:
        """Exact integral of the interpolated m from trace start to `at`.

        Exact because the interpolant is piecewise linear: within each
        segment the area is a trapezoid.  Queries beyond the last point
        accumulate at the held end value; queries before the start are not
        meaningful and are clamped to 0.
        """
        ts, ms = self.times, self.values
        seg_area = np.diff(ts) * (ms[:-1] + ms[1:]) / 2.0
        cum = np.concatenate([[0.0], np.cumsum(seg_area)])
        at_arr = np.atleast_1d(np.asarray(at, dtype=np.float64))
        idx = np.clip(np.searchsorted(ts, at_arr, side="right") - 1, 0, ts.size - 1)
        t_clamped = np.maximum(at_arr, ts[0])
        m_at = np.interp(t_clamped, ts, ms)
        partial = (t_clamped - ts[idx]) * (ms[idx] + m_at) / 2.0
        out = cum[idx] + partial
        return float(out[0]) if np.isscalar(at) else out

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            write_trace_csv(fh, self)

    @classmethod
    def read_csv(cls, path: str | Path) -> "MTrace":
        with open(path, "r", newline="") as fh:
            return read_trace_csv(fh)


def write_trace_csv(fh: io.TextIOBase, trace: MTrace) -> None:
    fh.write("t,m\n")
    for t, m in zip(trace.times, trace.values):
        fh.write(f"{float(t)!r},{float(m)!r}\n")


def read_trace_csv(fh: io.TextIOBase) -> MTrace:
    header = fh.readline().strip()
    if header != "t,m":
        raise ValueError(f"not a trace CSV (header {header!r})")
    pairs = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        t_str, m_str = line.split(",")
        pairs.append((float(t_str), float(m_str)))
    return MTrace.from_pairs(pairs)
