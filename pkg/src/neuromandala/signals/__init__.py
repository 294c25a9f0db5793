"""Signal acquisition: headset byte-stream parsing, simulation, smoothing."""

from .thinkgear import EsenseSample, ThinkGearParser
from .simulate import SignalProfile, simulate
from .smoothing import SmoothedSignal, normalize, smooth_step

__all__ = [
    "EsenseSample",
    "ThinkGearParser",
    "SignalProfile",
    "simulate",
    "SmoothedSignal",
    "normalize",
    "smooth_step",
]
