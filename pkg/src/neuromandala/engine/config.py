"""Session configuration and the config-file loader.

Config files are plain INI key/value sections (configparser dialect).  A
minimal file can be empty; every key has a default.  The session seed feeds
every stochastic component (mandala noise, granular jitter, simulator walk)
unless a section overrides it explicitly.

Sections and keys:

    [session]  source, serial_path, replay_path, mapping, frame_rate,
               seed, websocket_port, osc_out (comma-separated host:port),
               emit_particles
    [signal]   profile, level, amplitude, period, time_constant, manual_m
    [mandala]  particle_count, outer_radius, inner_radius, outer_speed,
               inner_speed, noise_amplitude, noise_frequency
    [audio]    mode, track_high, track_low, track, base_rate, alpha,
               grain_duration, grain_overlap, block_size
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from ..audio import GranularConfig
from ..mandala import MandalaConfig
from ..osc import DEFAULT_OUT_PORT, Endpoint
from ..signals import SignalProfile

SOURCES = ("device", "replay", "simulated", "manual")
MAPPINGS = ("forward", "reverse")
AUDIO_MODES = ("off", "crossfade", "granular")


@dataclass(frozen=True)
class AudioSettings:
    mode: str = "off"
    track_high: Optional[str] = None  # crossfade track weighted by m
    track_low: Optional[str] = None  # crossfade track weighted by 1-m
    track: Optional[str] = None  # granular source
    granular: GranularConfig = field(default_factory=GranularConfig)
    block_size: int = 512

    def __post_init__(self) -> None:
        if self.mode not in AUDIO_MODES:
            raise ValueError(f"audio mode must be one of {AUDIO_MODES}")
        if self.block_size <= 0:
            raise ValueError("block_size must be positive")
        if self.mode == "crossfade" and not (self.track_high and self.track_low):
            raise ValueError("crossfade mode needs track_high and track_low")
        if self.mode == "granular" and not self.track:
            raise ValueError("granular mode needs a source track")


@dataclass(frozen=True)
class SessionConfig:
    source: str = "simulated"
    serial_path: Optional[str] = None
    replay_path: Optional[str] = None
    profile: SignalProfile = field(default_factory=SignalProfile)
    manual_m: float = 0.5
    mapping: str = "forward"
    frame_rate: int = 60
    time_constant: float = 1.0
    mandala: MandalaConfig = field(default_factory=MandalaConfig)
    audio: AudioSettings = field(default_factory=AudioSettings)
    osc_out: tuple[Endpoint, ...] = ()
    websocket_port: int = 8000
    seed: int = 0
    emit_particles: bool = False
    osc_rate: float = 10.0  # meditation/attention message rate, Hz
    starvation_timeout: float = 5.0  # seconds without a sample before degraded
    poor_signal_threshold: int = 25

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}")
        if self.mapping not in MAPPINGS:
            raise ValueError(f"mapping must be one of {MAPPINGS}")
        if not 1 <= int(self.frame_rate) <= 240:
            raise ValueError("frame_rate must be in [1, 240]")
        if self.time_constant < 0:
            raise ValueError("time_constant must be >= 0")
        if not 0.0 <= self.manual_m <= 1.0:
            raise ValueError("manual_m must be in [0, 1]")
        if self.source == "device" and not self.serial_path:
            raise ValueError("device source needs serial_path")
        if self.source == "replay" and not self.replay_path:
            raise ValueError("replay source needs replay_path")
        if not 0 < int(self.websocket_port) < 65536:
            raise ValueError("websocket_port out of range")
        if self.osc_rate <= 0:
            raise ValueError("osc_rate must be positive")


def _parse_osc_out(raw: str) -> tuple[Endpoint, ...]:
    endpoints = []
    for part in raw.split(","):
        part = part.strip()
        if part:
            endpoints.append(Endpoint.parse(part))
    return tuple(endpoints)


def load_config(
    path: Optional[str | Path] = None,
    *,
    source: Optional[str] = None,
    mapping: Optional[str] = None,
    websocket_port: Optional[int] = None,
    osc_out: Optional[list[str]] = None,
    seed: Optional[int] = None,
) -> SessionConfig:
    """Build a SessionConfig from an optional INI file plus CLI overrides."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if path is not None:
        read = parser.read(str(path))
        if not read:
            raise FileNotFoundError(f"config file not found: {path}")

    session = parser["session"] if parser.has_section("session") else {}
    signal = parser["signal"] if parser.has_section("signal") else {}
    mandala = parser["mandala"] if parser.has_section("mandala") else {}
    audio = parser["audio"] if parser.has_section("audio") else {}

    def get(section, key, cast, default):
        if key not in section:
            return default
        value = section[key]
        if cast is bool:
            return value.strip().lower() in ("1", "true", "yes", "on")
        return cast(value)

    the_seed = seed if seed is not None else get(session, "seed", int, 0)

    profile = SignalProfile(
        kind=get(signal, "profile", str, "sinusoid"),
        level=get(signal, "level", float, 50.0),
        amplitude=get(signal, "amplitude", float, 50.0),
        period=get(signal, "period", float, 60.0),
        seed=the_seed,
    )
    mandala_cfg = MandalaConfig(
        particle_count=get(mandala, "particle_count", int, 96),
        outer_radius=get(mandala, "outer_radius", float, 1.0),
        inner_radius=get(mandala, "inner_radius", float, 0.25),
        outer_speed=get(mandala, "outer_speed", float, 0.4),
        inner_speed=get(mandala, "inner_speed", float, 2.0),
        noise_amplitude=get(mandala, "noise_amplitude", float, 1.1),
        noise_frequency=get(mandala, "noise_frequency", float, 0.35),
        seed=the_seed,
    )
    granular = GranularConfig(
        base_rate=get(audio, "base_rate", float, 1.0),
        alpha=get(audio, "alpha", float, 0.5),
        grain_duration=get(audio, "grain_duration", float, 0.05),
        grain_overlap=get(audio, "grain_overlap", float, 0.5),
        seed=the_seed,
    )
    audio_settings = AudioSettings(
        mode=get(audio, "mode", str, "off"),
        track_high=get(audio, "track_high", str, None),
        track_low=get(audio, "track_low", str, None),
        track=get(audio, "track", str, None),
        granular=granular,
        block_size=get(audio, "block_size", int, 512),
    )

    raw_osc = get(session, "osc_out", str, "")
    endpoints = _parse_osc_out(raw_osc) if raw_osc else ()
    if osc_out:
        endpoints = tuple(Endpoint.parse(item) for item in osc_out)

    cfg = SessionConfig(
        source=source or get(session, "source", str, "simulated"),
        serial_path=get(session, "serial_path", str, None),
        replay_path=get(session, "replay_path", str, None),
        profile=profile,
        manual_m=get(signal, "manual_m", float, 0.5),
        mapping=mapping or get(session, "mapping", str, "forward"),
        frame_rate=get(session, "frame_rate", int, 60),
        time_constant=get(signal, "time_constant", float, 1.0),
        mandala=mandala_cfg,
        audio=audio_settings,
        osc_out=endpoints,
        websocket_port=(
            websocket_port
            if websocket_port is not None
            else get(session, "websocket_port", int, 8000)
        ),
        seed=the_seed,
        emit_particles=get(session, "emit_particles", bool, False),
    )
    return cfg


def default_osc_endpoint() -> Endpoint:
    return Endpoint("127.0.0.1", DEFAULT_OUT_PORT)


def with_seed(cfg: SessionConfig, seed: int) -> SessionConfig:
    """Re-derive every seeded sub-config from a new session seed."""
    return replace(
        cfg,
        seed=seed,
        profile=replace(cfg.profile, seed=seed),
        mandala=replace(cfg.mandala, seed=seed),
        audio=replace(cfg.audio, granular=replace(cfg.audio.granular, seed=seed)),
    )
