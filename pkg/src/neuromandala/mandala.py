"""Epicyclic particle system steered by the meditation level.

Each of the `particle_count` particles blends two motions, weighted by the
meditation level m in [0, 1]:

  * m = 1: a pure epicycle, the difference of an outer and an inner rotating
    phasor, so the swarm traces a coherent circular ring.
  * m = 0: per-particle 1-D gradient-noise wander on each axis, scaled by
    `noise_amplitude`, so the ring dissolves into a drifting cloud.

Positions are affine in m, so intermediate levels morph continuously between
the two regimes.  Every particle q runs on its own shifted clock
s = t + time_shift[q]; with the default uniform shift the particles spread
evenly around the ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .noise import NoiseBank

TWO_PI = 2.0 * np.pi


def _per_particle(value: float | Sequence[float], count: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 0:
        arr = np.full(count, float(arr))
    if arr.shape != (count,):
        raise ValueError(f"{name} must be a scalar or have length {count}, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class MandalaConfig:
    """All particle-system constants.

    `outer_speed`/`inner_speed`/`time_shift` accept a scalar (applied to all
    particles) or a per-particle sequence.  `time_shift=None` spreads the
    particles uniformly around the ring: shift[q] = 2*pi*q / (count * speed_q).
    """

    particle_count: int = 96
    outer_radius: float = 1.0
    inner_radius: float = 0.25
    outer_speed: float | Sequence[float] = 0.4
    inner_speed: float | Sequence[float] = 2.0
    time_shift: Sequence[float] | None = None
    noise_amplitude: float = 1.1
    noise_frequency: float = 0.35
    seed: int = 0

    def __post_init__(self) -> None:
        if self.particle_count < 1:
            raise ValueError("particle_count must be >= 1")
        if self.outer_radius <= 0 or self.inner_radius <= 0:
            raise ValueError("radii must be positive")
        if self.outer_radius == self.inner_radius:
            raise ValueError("outer and inner radii must differ")
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be >= 0")
        n = self.particle_count
        outer = _per_particle(self.outer_speed, n, "outer_speed")
        inner = _per_particle(self.inner_speed, n, "inner_speed")
        if self.time_shift is None:
            shift = TWO_PI * np.arange(n) / (n * outer)
        else:
            shift = _per_particle(self.time_shift, n, "time_shift")
        for name, arr in (("outer_speed", outer), ("inner_speed", inner), ("time_shift", shift)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def noise_bank(self) -> NoiseBank:
        return NoiseBank(seed=self.seed, count=self.particle_count, frequency=self.noise_frequency)


@dataclass(frozen=True, eq=False)
class ParticleFrame:
    """Positions of all particles at one instant."""

    t: float
    m: float
    positions: np.ndarray  # shape (particle_count, 2)

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=np.float64)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError(f"positions must have shape (count, 2), got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)

    def radii(self) -> np.ndarray:
        return np.hypot(self.positions[:, 0], self.positions[:, 1])


def _positions_at(
    cfg: MandalaConfig,
    noise: NoiseBank,
    indices: np.ndarray,
    t: float,
    m: float,
) -> np.ndarray:
    """Blended positions for the given particle indices at time t."""
    outer = cfg.outer_speed[indices]
    inner = cfg.inner_speed[indices]
    s = t + cfg.time_shift[indices]
    ex = cfg.outer_radius * np.cos(outer * s) - cfg.inner_radius * np.cos(inner * s)
    ey = cfg.outer_radius * np.sin(outer * s) - cfg.inner_radius * np.sin(inner * s)
    epicycle = np.stack([ex, ey], axis=1)
    wander = noise.sample_at(indices, s)
    return m * epicycle + (1.0 - m) * cfg.noise_amplitude * wander


def particle_position(
    cfg: MandalaConfig,
    noise: NoiseBank,
    q: int,
    t: float,
    m: float,
) -> tuple[float, float]:
    """Position of particle q at time t for meditation level m."""
    if not 0 <= q < cfg.particle_count:
        raise IndexError(f"particle index {q} out of range [0, {cfg.particle_count})")
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must be in [0, 1], got {m}")
    pos = _positions_at(cfg, noise, np.array([q]), t, m)
    return float(pos[0, 0]), float(pos[0, 1])


def step_frame(cfg: MandalaConfig, noise: NoiseBank, t: float, m: float) -> ParticleFrame:
    """One full frame: every particle's position at time t."""
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must be in [0, 1], got {m}")
    indices = np.arange(cfg.particle_count)
    return ParticleFrame(t=t, m=m, positions=_positions_at(cfg, noise, indices, t, m))
