from .track import AudioTrack
from .wav import read_wav, write_wav
from .crossfade import crossfade_gains, mix, RealtimeCrossfader
from .granular import (
    GranularConfig,
    GrainEvent,
    GranularReport,
    granular_params,
    granular_render,
    RealtimeGranular,
)

__all__ = [
    "AudioTrack",
    "read_wav",
    "write_wav",
    "crossfade_gains",
    "mix",
    "RealtimeCrossfader",
    "GranularConfig",
    "GrainEvent",
    "GranularReport",
    "granular_params",
    "granular_render",
    "RealtimeGranular",
]
