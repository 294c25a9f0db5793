"""Scripted signal source for sessions without a headset.

Profiles are pure functions of (profile, t); the bounded random walk is a
pure function of (seed, floor(t)) so any step can be re-queried.  Attention
is emitted as the complement of meditation so the secondary channel carries
something plausible; contact quality is always perfect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..noise import _GOLDEN, _mix64  # splitmix64 stream
from .thinkgear import EsenseSample

ProfileKind = Literal["constant", "linear-ramp", "sinusoid", "bounded-random-walk"]

_KINDS = ("constant", "linear-ramp", "sinusoid", "bounded-random-walk")


@dataclass(frozen=True)
class SignalProfile:
    """Parameters for one scripted meditation trajectory.

    level: constant value / sinusoid center / ramp and walk start.
    amplitude: sinusoid swing / ramp rise over one period / walk step scale.
    period: sinusoid period / ramp duration, seconds.
    """

    kind: ProfileKind = "sinusoid"
    level: float = 50.0
    amplitude: float = 50.0
    period: float = 60.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}; expected one of {_KINDS}")
        if self.period <= 0:
            raise ValueError("period must be positive")


def _walk_step(seed: int, k: int) -> float:
    """k-th uniform step in [-1, 1] of the walk's splitmix64 stream."""
    state = np.array([(seed + (k + 1) * int(_GOLDEN)) & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    h = int(_mix64(state)[0])
    return (h >> 11) / float(1 << 53) * 2.0 - 1.0


def _meditation_value(profile: SignalProfile, t: float) -> float:
    if profile.kind == "constant":
        return profile.level
    if profile.kind == "linear-ramp":
        return profile.level + profile.amplitude * (t / profile.period)
    if profile.kind == "sinusoid":
        return profile.level + profile.amplitude * math.sin(2.0 * math.pi * t / profile.period)
    # bounded-random-walk: one clamped step per whole second
    value = profile.level
    for k in range(int(t)):
        value = min(100.0, max(0.0, value + profile.amplitude * _walk_step(profile.seed, k)))
    return value


def simulate(profile: SignalProfile, t: float) -> EsenseSample:
    """Deterministic sample for the profile at time t >= 0."""
    if t < 0:
        raise ValueError("t must be >= 0")
    meditation = int(round(min(100.0, max(0.0, _meditation_value(profile, t)))))
    return EsenseSample(
        timestamp=t,
        meditation=meditation,
        attention=100 - meditation,
        poor_signal=0,
    )
