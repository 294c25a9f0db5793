"""neuromandala: a meditation-signal engine driving an epicyclic particle
mandala and ambient audio, with OSC/WebSocket output and a deterministic
offline renderer."""

from .mandala import MandalaConfig, ParticleFrame, particle_position, step_frame
from .noise import NoiseBank, PerlinProcess
from .trace import MTrace

__version__ = "0.1.0"

__all__ = [
    "MandalaConfig",
    "ParticleFrame",
    "particle_position",
    "step_frame",
    "NoiseBank",
    "PerlinProcess",
    "MTrace",
    "__version__",
]
