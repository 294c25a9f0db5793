from .config import AudioSettings, SessionConfig, load_config, with_seed
from .sources import (
    DeviceSource,
    ManualSource,
    ReplaySource,
    SignalSource,
    SimulatedSource,
    make_source,
)
from .core import (
    PARAM_WHITELIST,
    Engine,
    EngineState,
    SessionHandle,
    TickResult,
    apply_direction,
    run,
)

__all__ = [
    "AudioSettings",
    "SessionConfig",
    "load_config",
    "with_seed",
    "PARAM_WHITELIST",
    "SignalSource",
    "ManualSource",
    "SimulatedSource",
    "ReplaySource",
    "DeviceSource",
    "make_source",
    "Engine",
    "EngineState",
    "TickResult",
    "SessionHandle",
    "apply_direction",
    "run",
]
