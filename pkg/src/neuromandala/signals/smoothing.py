"""Normalization and frame-rate smoothing of the 1 Hz signal.

The headset delivers integer readings once a second; animation and audio run
much faster.  Exponential smoothing bridges the gap: each step pulls the
continuous value toward the latest normalized sample with time constant
`time_constant` seconds.  A time constant of 0 disables smoothing (the value
jumps to the target), which keeps the raw 1 Hz steps for fidelity testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


def normalize(raw: int) -> float:
    """Map a device reading 0..100 onto [0, 1]."""
    if not 0 <= raw <= 100:
        raise ValueError(f"raw value out of range [0, 100]: {raw}")
    return raw / 100.0


@dataclass(frozen=True)
class SmoothedSignal:
    """Continuous meditation/attention pair tracked between 1 Hz samples."""

    m: float = 0.5
    a: float = 0.5
    time_constant: float = 1.0
    last_update: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.m <= 1.0 or not 0.0 <= self.a <= 1.0:
            raise ValueError("smoothed values must be in [0, 1]")
        if self.time_constant < 0:
            raise ValueError("time_constant must be >= 0")


def _approach(current: float, target: float, decay: float) -> float:
    value = target + (current - target) * decay
    return min(1.0, max(0.0, value))


def smooth_step(
    state: SmoothedSignal,
    target: float,
    dt: float,
    target_a: float | None = None,
) -> SmoothedSignal:
    """Advance the smoother by dt seconds toward `target` (and `target_a`).

    m <- target + (m - target) * exp(-dt / time_constant).  With
    time_constant == 0 the value snaps to the target.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not 0.0 <= target <= 1.0:
        raise ValueError(f"target must be in [0, 1], got {target}")
    if target_a is not None and not 0.0 <= target_a <= 1.0:
        raise ValueError(f"target_a must be in [0, 1], got {target_a}")
    decay = 0.0 if state.time_constant == 0 else math.exp(-dt / state.time_constant)
    return replace(
        state,
        m=_approach(state.m, target, decay),
        a=state.a if target_a is None else _approach(state.a, target_a, decay),
        last_update=state.last_update + dt,
    )
