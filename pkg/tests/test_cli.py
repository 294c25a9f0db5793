import time

import numpy as np
import pytest

from neuromandala.audio import AudioTrack
from neuromandala.cli import build_parser, main
from neuromandala.offline import FrameTable
from neuromandala.osc import ADDR_MEDITATION, OscServer
from neuromandala.trace import MTrace


@pytest.fixture
def trace_csv(tmp_path):
    path = tmp_path / "trace.csv"
    MTrace(np.array([0.0, 2.0]), np.array([0.0, 1.0])).write_csv(path)
    return str(path)


def test_parser_accepts_documented_flags():
    parser = build_parser()
    args = parser.parse_args(
        [
            "run",
            "--config", "session.ini",
            "--source", "manual",
            "--mapping", "reverse",
            "--ws-port", "9000",
            "--osc-out", "127.0.0.1:9000",
            "--osc-out", "127.0.0.1:9010",
            "--seed", "7",
        ]
    )
    assert args.command == "run"
    assert args.source == "manual"
    assert args.mapping == "reverse"
    assert args.ws_port == 9000
    assert args.osc_out == ["127.0.0.1:9000", "127.0.0.1:9010"]
    assert args.seed == 7


def test_parser_rejects_unknown_source():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["run", "--source", "ouija"])


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_render_frames_csv(tmp_path, trace_csv, capsys):
    out = tmp_path / "frames.csv"
    code = main(["render", "--trace", trace_csv, "--frames", str(out), "--seed", "3",
                 "--frame-rate", "30"])
    assert code == 0
    assert "wrote 61 frames" in capsys.readouterr().out
    table = FrameTable.read_csv(out)
    assert table.frame_count == 61
    assert table.particle_count == 96


def test_render_seed_changes_output(tmp_path, trace_csv):
    a, b, c = (tmp_path / name for name in ("a.csv", "b.csv", "c.csv"))
    main(["render", "--trace", trace_csv, "--frames", str(a), "--seed", "1"])
    main(["render", "--trace", trace_csv, "--frames", str(b), "--seed", "1"])
    main(["render", "--trace", trace_csv, "--frames", str(c), "--seed", "2"])
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_render_crossfade_audio(tmp_path, trace_csv, sine_track, capsys):
    high = tmp_path / "high.wav"
    low = tmp_path / "low.wav"
    sine_track(freq=440, seconds=2.0).save(high)
    sine_track(freq=110, seconds=2.0).save(low)
    out = tmp_path / "mix.wav"
    code = main(
        ["render", "--trace", trace_csv, "--audio", str(out),
         "--track-high", str(high), "--track-low", str(low)]
    )
    assert code == 0
    assert "of audio" in capsys.readouterr().out
    track = AudioTrack.load(out)
    assert track.frames == 2 * 44100


def test_render_granular_audio(tmp_path, trace_csv, sine_track):
    src = tmp_path / "src.wav"
    sine_track(seconds=1.0).save(src)
    out = tmp_path / "grains.wav"
    code = main(
        ["render", "--trace", trace_csv, "--audio", str(out),
         "--audio-mode", "granular", "--track", str(src), "--sample-format", "pcm16"]
    )
    assert code == 0
    assert AudioTrack.load(out).duration == pytest.approx(2.0, abs=0.01)


def test_render_requires_an_output(trace_csv, capsys):
    assert main(["render", "--trace", trace_csv]) == 2
    assert "nothing to do" in capsys.readouterr().err


def test_render_missing_trace_fails(tmp_path, capsys):
    out = tmp_path / "frames.csv"
    code = main(["render", "--trace", "/nonexistent/trace.csv", "--frames", str(out)])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_render_missing_tracks_fails(trace_csv, tmp_path, capsys):
    code = main(["render", "--trace", trace_csv, "--audio", str(tmp_path / "o.wav")])
    assert code == 2
    assert "track_high" in capsys.readouterr().err


def test_bridge_requires_endpoint(capsys):
    assert main(["bridge", "--source", "manual", "--duration", "0.1"]) == 2
    assert "--osc-out" in capsys.readouterr().err


def test_bridge_sends_meditation(capsys):
    received = []
    with OscServer(port=0, handler=lambda msg, addr: received.append(msg)) as server:
        code = main(
            ["bridge", "--source", "manual",
             "--osc-out", f"127.0.0.1:{server.port}", "--duration", "0.6"]
        )
        assert code == 0
        deadline = time.monotonic() + 2.0
        while time.monotonic() < deadline:
            if any(m.address == ADDR_MEDITATION for m in received):
                break
            time.sleep(0.02)
    meditation = [m for m in received if m.address == ADDR_MEDITATION]
    assert meditation
    assert all(0.0 <= m.args[0] <= 1.0 for m in meditation)
    out = capsys.readouterr().out
    assert "bridging manual" in out
    assert "stopped after" in out


def test_missing_config_file_fails(capsys):
    code = main(["bridge", "--config", "/nonexistent.ini"])
    assert code == 2
    assert "config file not found" in capsys.readouterr().err
