import time
from types import SimpleNamespace

import numpy as np
import pytest

from neuromandala.engine import (
    AudioSettings,
    DeviceSource,
    Engine,
    ManualSource,
    PARAM_WHITELIST,
    ReplaySource,
    SessionConfig,
    SessionHandle,
    SimulatedSource,
    apply_direction,
    load_config,
    make_source,
    run,
    with_seed,
)
from neuromandala.mandala import MandalaConfig, step_frame
from neuromandala.osc import (
    ADDR_ATTENTION,
    ADDR_MEDITATION,
    ADDR_MODE,
    ADDR_PARTICLE,
)
from neuromandala.signals import SignalProfile

from conftest import esense_packet


def manual_config(**overrides):
    defaults = dict(
        source="manual",
        manual_m=0.5,
        time_constant=0.0,
        mandala=MandalaConfig(particle_count=8, seed=5),
    )
    defaults.update(overrides)
    return SessionConfig(**defaults)


# -- direction ------------------------------------------------------------


def test_apply_direction_examples():
    assert apply_direction("forward", 0.3) == 0.3
    assert apply_direction("reverse", 0.8) == pytest.approx(0.2, abs=1e-15)
    assert apply_direction("reverse", 1.0) == 0.0
    assert apply_direction("reverse", 0.0) == 1.0


def test_apply_direction_involution():
    # bit-exact wherever 1 - m is representable (any dyadic grid) and
    # within one ulp for arbitrary floats
    for k in range(4097):
        m = k / 4096
        assert apply_direction("reverse", apply_direction("reverse", m)) == m
    rng = np.random.default_rng(11)
    for m in rng.uniform(0.0, 1.0, 1000):
        twice = apply_direction("reverse", apply_direction("reverse", float(m)))
        assert abs(twice - m) <= 2**-52


def test_apply_direction_rejects_unknown():
    with pytest.raises(ValueError):
        apply_direction("sideways", 0.5)


# -- configuration --------------------------------------------------------


def test_session_config_defaults():
    cfg = SessionConfig()
    assert cfg.source == "simulated"
    assert cfg.frame_rate == 60
    assert cfg.time_constant == 1.0
    assert cfg.mandala.particle_count == 96
    assert cfg.audio.mode == "off"
    assert cfg.websocket_port == 8000
    assert cfg.osc_rate == 10.0
    assert cfg.starvation_timeout == 5.0
    assert cfg.poor_signal_threshold == 25


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(source="telepathy"),
        dict(mapping="upside-down"),
        dict(frame_rate=0),
        dict(frame_rate=241),
        dict(time_constant=-1.0),
        dict(manual_m=1.5),
        dict(source="device"),  # no serial_path
        dict(source="replay"),  # no replay_path
        dict(websocket_port=0),
        dict(osc_rate=0.0),
    ],
)
def test_session_config_validation(kwargs):
    with pytest.raises(ValueError):
        SessionConfig(**kwargs)


def test_audio_settings_validation():
    with pytest.raises(ValueError):
        AudioSettings(mode="theremin")
    with pytest.raises(ValueError):
        AudioSettings(mode="crossfade", track_high="a.wav")
    with pytest.raises(ValueError):
        AudioSettings(mode="granular")
    with pytest.raises(ValueError):
        AudioSettings(block_size=0)


def test_load_config_defaults_without_file():
    cfg = load_config()
    ref = SessionConfig()
    assert cfg.source == ref.source
    assert cfg.frame_rate == ref.frame_rate
    assert cfg.time_constant == ref.time_constant
    assert cfg.websocket_port == ref.websocket_port
    assert cfg.osc_out == ()
    assert cfg.mandala.particle_count == ref.mandala.particle_count
    assert cfg.audio.mode == "off"


def test_load_config_missing_file():
    with pytest.raises(FileNotFoundError):
        load_config("/nonexistent/session.ini")


def test_load_config_reads_sections(tmp_path):
    path = tmp_path / "session.ini"
    path.write_text(
        "[session]\n"
        "source = manual\n"
        "mapping = reverse\n"
        "frame_rate = 30\n"
        "seed = 99\n"
        "websocket_port = 9100\n"
        "osc_out = 127.0.0.1:9000, 127.0.0.1:9010\n"
        "emit_particles = yes\n"
        "[signal]\n"
        "profile = linear-ramp\n"
        "level = 10\n"
        "time_constant = 0.5  ; comment\n"
        "manual_m = 0.25\n"
        "[mandala]\n"
        "particle_count = 12\n"
        "outer_radius = 2.0\n"
        "[audio]\n"
        "alpha = 0.7\n"
    )
    cfg = load_config(path)
    assert cfg.source == "manual"
    assert cfg.mapping == "reverse"
    assert cfg.frame_rate == 30
    assert cfg.seed == 99
    assert cfg.websocket_port == 9100
    assert [str(ep) for ep in cfg.osc_out] == ["127.0.0.1:9000", "127.0.0.1:9010"]
    assert cfg.emit_particles is True
    assert cfg.profile.kind == "linear-ramp" and cfg.profile.level == 10.0
    assert cfg.time_constant == 0.5
    assert cfg.manual_m == 0.25
    assert cfg.mandala.particle_count == 12
    assert cfg.mandala.outer_radius == 2.0
    assert cfg.audio.granular.alpha == 0.7
    # session seed flows into every seeded sub-config
    assert cfg.profile.seed == 99
    assert cfg.mandala.seed == 99
    assert cfg.audio.granular.seed == 99


def test_load_config_cli_overrides(tmp_path):
    path = tmp_path / "session.ini"
    path.write_text("[session]\nsource = manual\nseed = 1\nosc_out = 127.0.0.1:9000\n")
    cfg = load_config(
        path,
        source="simulated",
        mapping="reverse",
        websocket_port=9999,
        osc_out=["127.0.0.1:9500"],
        seed=7,
    )
    assert cfg.source == "simulated"
    assert cfg.mapping == "reverse"
    assert cfg.websocket_port == 9999
    assert [str(ep) for ep in cfg.osc_out] == ["127.0.0.1:9500"]
    assert cfg.seed == 7
    assert cfg.mandala.seed == 7


def test_with_seed_rederives_subconfigs():
    cfg = with_seed(SessionConfig(), 123)
    assert cfg.seed == 123
    assert cfg.profile.seed == 123
    assert cfg.mandala.seed == 123
    assert cfg.audio.granular.seed == 123


# -- sources ----------------------------------------------------------------


def test_manual_source_quantized_poll():
    src = ManualSource(0.637)
    sample = src.poll(3.0)
    assert sample.timestamp == 3.0
    assert sample.meditation == 64
    assert sample.attention == 36
    assert sample.poor_signal == 0
    with pytest.raises(ValueError):
        src.set_m(1.5)


def test_simulated_source_one_hertz():
    src = SimulatedSource(SignalProfile(kind="constant", level=40.0))
    first = src.poll(0.0)
    assert first is not None and first.meditation == 40
    assert src.poll(0.5) is first  # same second, same sample
    second = src.poll(1.2)
    assert second is not first
    assert second.timestamp == 1.0


def test_replay_source_timeline(tmp_path):
    path = tmp_path / "capture.raw"
    path.write_bytes(
        esense_packet(80, attention=20, poor_signal=0)
        + esense_packet(30, attention=70, poor_signal=0)
        + esense_packet(55, attention=45, poor_signal=0)
    )
    src = ReplaySource(str(path))
    assert src.parse_errors() == 0
    assert src.poll(0.0) is None  # first packet is stamped t=1
    assert src.poll(1.0).meditation == 80
    assert src.poll(2.5).meditation == 30
    assert src.poll(99.0).meditation == 55


def test_replay_source_counts_corruption(tmp_path):
    good = esense_packet(60)
    bad = bytearray(esense_packet(70))
    bad[-1] ^= 0xFF  # break the checksum
    path = tmp_path / "capture.raw"
    path.write_bytes(good + bytes(bad) + good)
    src = ReplaySource(str(path))
    assert len(src.samples) == 2
    assert src.parse_errors() >= 1


def test_replay_source_rejects_empty(tmp_path):
    path = tmp_path / "empty.raw"
    path.write_bytes(b"\x00" * 64)
    with pytest.raises(ValueError):
        ReplaySource(str(path))


def test_device_source_reads_file(tmp_path):
    path = tmp_path / "device.bin"
    path.write_bytes(esense_packet(90, attention=10, poor_signal=0))
    src = DeviceSource(str(path), clock=lambda: 0.0)
    try:
        deadline = time.monotonic() + 2.0
        sample = None
        while sample is None and time.monotonic() < deadline:
            sample = src.poll(0.0)
            time.sleep(0.005)
        assert sample is not None
        assert sample.meditation == 90
        assert sample.timestamp == 0.0
    finally:
        src.close()


def test_device_source_bad_path():
    with pytest.raises(OSError):
        DeviceSource("/nonexistent/ttyUSB0", clock=lambda: 0.0)


def test_make_source_unknown_kind():
    with pytest.raises(ValueError):
        make_source(SimpleNamespace(source="psychic"), clock=lambda: 0.0)


# -- engine ticks ------------------------------------------------------------


def test_tick_manual_forward_ring():
    eng = Engine(manual_config(manual_m=1.0))
    result = eng.tick(0.0)
    assert result.m == 1.0
    assert result.gains == (1.0, 0.0)
    radii = np.hypot(result.frame.positions[:, 0], result.frame.positions[:, 1])
    cfg = eng.mandala_cfg
    assert np.all(radii >= cfg.outer_radius - cfg.inner_radius - 1e-12)
    assert np.all(radii <= cfg.outer_radius + cfg.inner_radius + 1e-12)
    eng.close()


def test_tick_manual_reverse_noise():
    eng = Engine(manual_config(manual_m=1.0, mapping="reverse"))
    result = eng.tick(0.0)
    assert result.m == 0.0
    assert result.gains == (0.0, 1.0)
    amp = eng.mandala_cfg.noise_amplitude
    assert np.all(np.abs(result.frame.positions) <= amp)
    eng.close()


def test_tick_single_m_coherence():
    cfg = manual_config(manual_m=0.37)
    eng = Engine(cfg)
    result = eng.tick(0.25)
    m = result.m
    assert m == 0.37
    # frame recomputed from the reported m must match exactly
    expected = step_frame(cfg.mandala, cfg.mandala.noise_bank(), 0.25, m)
    assert np.array_equal(result.frame.positions, expected.positions)
    assert result.gains == (m, 1.0 - m)
    assert result.granular_rate == m * cfg.audio.granular.base_rate
    assert result.granular_jitter_scale == cfg.audio.granular.alpha * (1.0 - m)
    med = [msg for msg in result.messages if msg.address == ADDR_MEDITATION]
    assert len(med) == 1
    assert med[0].args[0] == float(np.float32(m))
    eng.close()


def test_tick_smoothing_first_order():
    eng = Engine(manual_config(manual_m=1.0, time_constant=1.0))
    eng.tick(0.0)  # dt == 0, smoothing holds the initial level
    assert eng.smoothing.m == 0.5
    result = eng.tick(1.0)
    expected = 1.0 + (0.5 - 1.0) * np.exp(-1.0)
    assert result.m == pytest.approx(expected, abs=1e-12)
    eng.close()


def test_tick_snap_when_unsmoothed():
    eng = Engine(manual_config(manual_m=0.9, time_constant=0.0))
    assert eng.tick(0.0).m == 0.9
    eng.set_manual_m(0.1)
    assert eng.tick(1 / 60).m == 0.1
    eng.close()


def test_tick_poor_signal_holds(tmp_path):
    path = tmp_path / "capture.raw"
    path.write_bytes(
        esense_packet(80, poor_signal=0)
        + esense_packet(10, poor_signal=200)
        + esense_packet(20, poor_signal=200)
    )
    cfg = SessionConfig(
        source="replay",
        replay_path=str(path),
        time_constant=0.0,
        mandala=MandalaConfig(particle_count=4, seed=1),
    )
    eng = Engine(cfg)
    first = eng.tick(1.0)
    assert first.m == 0.8 and not first.degraded
    held = eng.tick(2.0)
    assert held.degraded
    assert held.poor_signal == 200
    assert held.m == 0.8  # bad readings never move the output
    still_held = eng.tick(3.0)
    assert still_held.degraded and still_held.m == 0.8
    eng.close()


def test_tick_starvation_freezes(tmp_path):
    path = tmp_path / "capture.raw"
    path.write_bytes(esense_packet(60, poor_signal=0))
    cfg = SessionConfig(
        source="replay",
        replay_path=str(path),
        time_constant=0.0,
        mandala=MandalaConfig(particle_count=4, seed=1),
    )
    eng = Engine(cfg)
    assert eng.tick(1.0).m == 0.6
    assert not eng.tick(6.0).degraded  # exactly at the threshold
    stale = eng.tick(6.5)
    assert stale.degraded
    assert stale.m == 0.6
    assert eng.samples_received == 1  # duplicate polls are not re-counted
    eng.close()


def test_manual_source_never_starves():
    eng = Engine(manual_config())
    assert not eng.tick(0.0).degraded
    assert not eng.tick(1000.0).degraded
    eng.close()


def test_set_manual_m_requires_manual_source():
    eng = Engine(SessionConfig(source="simulated", mandala=MandalaConfig(particle_count=2)))
    with pytest.raises(ValueError):
        eng.set_manual_m(0.5)
    eng.close()


def test_set_param_whitelist():
    eng = Engine(manual_config())
    with pytest.raises(ValueError):
        eng.set_param("frame_rate", 30)
    for name in PARAM_WHITELIST:
        eng.set_param(name, 0.5)  # all whitelisted names accepted
    eng.close()


def test_set_param_applies_next_tick():
    eng = Engine(manual_config())
    eng.tick(0.0)
    eng.set_param("noise_amplitude", 2.5)
    eng.set_param("time_constant", 0.25)
    eng.set_param("alpha", 0.9)
    eng.tick(1 / 60)
    assert eng.mandala_cfg.noise_amplitude == 2.5
    assert eng.smoothing.time_constant == 0.25
    assert eng.config.audio.granular.alpha == 0.9
    eng.close()


def test_mode_announced_on_change_only():
    eng = Engine(manual_config())
    first = eng.tick(0.0)
    modes = [m for m in first.messages if m.address == ADDR_MODE]
    assert len(modes) == 1 and modes[0].args == ("forward",)
    second = eng.tick(0.01)
    assert not any(m.address == ADDR_MODE for m in second.messages)
    eng.set_mapping("reverse")
    third = eng.tick(0.02)
    modes = [m for m in third.messages if m.address == ADDR_MODE]
    assert len(modes) == 1 and modes[0].args == ("reverse",)
    eng.close()


def test_osc_rate_ten_hertz():
    eng = Engine(manual_config())
    count = 0
    for i in range(60):  # one second at 60 fps
        result = eng.tick(i / 60)
        count += sum(1 for m in result.messages if m.address == ADDR_MEDITATION)
    assert count == 10
    eng.close()


def test_osc_attention_complements():
    eng = Engine(manual_config(manual_m=0.8))
    result = eng.tick(0.0)
    att = [m for m in result.messages if m.address == ADDR_ATTENTION]
    assert len(att) == 1
    assert att[0].args[0] == pytest.approx(0.2, abs=1e-6)
    eng.close()


def test_emit_particles_addresses():
    eng = Engine(manual_config(emit_particles=True))
    result = eng.tick(0.0)
    particles = [m for m in result.messages if m.address == ADDR_PARTICLE]
    assert len(particles) == 8
    for q, msg in enumerate(particles):
        assert msg.args[0] == q
        x, y = result.frame.positions[q]
        assert msg.args[1] == float(np.float32(x))
        assert msg.args[2] == float(np.float32(y))
    eng.close()


def test_engine_fail_fast_on_bad_replay():
    cfg = SessionConfig(source="replay", replay_path="/nonexistent/capture.raw")
    with pytest.raises(OSError):
        Engine(cfg)


# -- session handle -----------------------------------------------------------


def test_session_runs_exact_tick_count():
    handle = run(manual_config(), record=True, max_ticks=10)
    handle.join(timeout=5.0)
    handle.stop()
    state = handle.state()
    assert state.frames_emitted == 10
    assert handle.record.times == [i * (1.0 / 60) for i in range(10)]
    assert all(m == 0.5 for m in handle.record.m_values)


def test_session_subscribers_see_frames_and_status():
    frames, statuses = [], []
    engine = Engine(manual_config())
    handle = SessionHandle(engine, max_ticks=5)
    handle.subscribe_frames(frames.append)
    handle.subscribe_status(statuses.append)
    with handle:
        handle.join(timeout=5.0)
    assert len(frames) == 5
    assert frames[0]["type"] == "frame"
    assert frames[0]["t"] == 0.0
    assert len(frames[0]["positions"]) == 8
    assert len(frames[0]["positions"][0]) == 2
    assert statuses  # at least the initial status
    assert statuses[0] == {
        "type": "status",
        "source": "manual",
        "poorSignal": 0,
        "mode": "forward",
        "degraded": False,
    }
    # unchanged status is not repeated
    assert len(statuses) == 1


def test_sessions_replay_deterministically(tmp_path):
    path = tmp_path / "capture.raw"
    path.write_bytes(b"".join(esense_packet(v, poor_signal=0) for v in (30, 80, 55)))
    cfg = SessionConfig(
        source="replay",
        replay_path=str(path),
        time_constant=1.0,
        frame_rate=60,
        mandala=MandalaConfig(particle_count=6, seed=9),
    )

    def capture():
        handle = run(cfg, record=True, max_ticks=30)
        handle.join(timeout=5.0)
        handle.stop()
        return handle.record

    a, b = capture(), capture()
    assert a.times == b.times
    assert a.m_values == b.m_values
    for fa, fb in zip(a.frames, b.frames):
        assert np.array_equal(fa.positions, fb.positions)
