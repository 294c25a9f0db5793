"""Seeded 1-D gradient noise.

Classic single-octave Perlin-style noise: a pseudo-random scalar gradient
lives at every integer lattice point, values between lattice points are the
quintic-faded interpolation of the two neighbouring gradient ramps.  Output
is exactly 0.0 at lattice points, bounded by [-1, 1], C1-continuous, and a
pure function of (seed, coordinate).

Gradients are not stored: they are derived on demand by hashing the lattice
index with a splitmix64-style finalizer, so the domain is unbounded and two
processes with different seeds are statistically uncorrelated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_U53 = 1.0 / float(1 << 53)


def _mix64(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, vectorized over uint64 arrays."""
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def derive_seeds(seed: int, count: int) -> np.ndarray:
    """First `count` outputs of a splitmix64 stream for `seed`.

    Used to give each noise process its own independent sub-seed.
    """
    base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    steps = (np.arange(1, count + 1, dtype=np.uint64)) * _GOLDEN
    return _mix64(base + steps)


def _lattice_gradient(seeds: np.ndarray, index: np.ndarray) -> np.ndarray:
    """Gradient in [-1, 1) at integer lattice `index` for each seed."""
    h = _mix64(seeds ^ _mix64(index.astype(np.uint64) * _GOLDEN + _GOLDEN))
    return (h >> np.uint64(11)).astype(np.float64) * (2.0 * _U53) - 1.0


def _grad_noise(seeds: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Gradient noise for per-element (seed, coordinate) pairs."""
    i0 = np.floor(coords)
    f = coords - i0
    i0 = i0.astype(np.int64)
    g0 = _lattice_gradient(seeds, i0)
    g1 = _lattice_gradient(seeds, i0 + 1)
    u = f * f * f * (f * (f * 6.0 - 15.0) + 10.0)
    v0 = g0 * f
    v1 = g1 * (f - 1.0)
    # Factor 2 normalizes the worst case (f=0.5, opposed unit gradients) to 1.
    return 2.0 * (v0 + u * (v1 - v0))


@dataclass(frozen=True)
class PerlinProcess:
    """One seeded noise process sampled in time.

    `frequency` scales seconds into lattice units: sample(t) evaluates the
    underlying noise at coordinate t * frequency.
    """

    seed: int
    frequency: float = 1.0

    def sample(self, t: float) -> float:
        seeds = np.array([self.seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
        coords = np.array([t * self.frequency], dtype=np.float64)
        return float(_grad_noise(seeds, coords)[0])

    def sample_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)
        seeds = np.full(ts.shape, self.seed & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
        return _grad_noise(seeds, ts * self.frequency)


@dataclass(frozen=True)
class NoiseBank:
    """The 2L independent noise processes behind an L-particle system.

    Process (q, axis) gets sub-seed index 2q + axis from the master seed's
    splitmix64 stream; axis 0 is x, axis 1 is y.
    """

    seed: int
    count: int
    frequency: float = 1.0
    _seeds: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        seeds = derive_seeds(self.seed, 2 * self.count).reshape(self.count, 2)
        object.__setattr__(self, "_seeds", seeds)

    def process(self, q: int, axis: int) -> PerlinProcess:
        if not (0 <= q < self.count and axis in (0, 1)):
            raise IndexError(f"no noise process (q={q}, axis={axis})")
        return PerlinProcess(seed=int(self._seeds[q, axis]), frequency=self.frequency)

    def sample_pair(self, q: int, t: float) -> tuple[float, float]:
        """(x, y) noise values for particle q at time t."""
        coords = np.full(2, t * self.frequency, dtype=np.float64)
        vals = _grad_noise(self._seeds[q], coords)
        return float(vals[0]), float(vals[1])

    def sample_at(self, indices: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """Noise for the given particles at per-particle times `ts`.

        Returns shape (len(indices), 2): column 0 is the x process, column 1
        the y process.
        """
        ts = np.asarray(ts, dtype=np.float64)
        if ts.ndim == 0:
            ts = np.broadcast_to(ts, np.shape(indices))
        coords = np.repeat((ts * self.frequency)[:, None], 2, axis=1)
        return _grad_noise(self._seeds[indices], coords)

    def sample_all(self, ts: np.ndarray) -> np.ndarray:
        """Noise for every particle at per-particle times `ts` (shape L)."""
        return self.sample_at(np.arange(self.count), ts)
