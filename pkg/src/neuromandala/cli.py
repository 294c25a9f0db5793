"""Command-line entry points.

run     live session served over HTTP/WebSocket (and OSC if configured)
render  offline trace -> frames CSV / WAV
bridge  headset (or simulator) -> OSC only, no web service

The CLI stays thin: it parses flags, builds a SessionConfig, and hands off
to the service or the offline renderer.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from .audio import AudioTrack, GranularConfig
from .engine import load_config, run as run_session
from .offline import render_audio, render_frames
from .trace import MTrace


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file path")
    parser.add_argument(
        "--source",
        choices=["device", "replay", "simulated", "manual"],
        help="signal source (overrides config)",
    )
    parser.add_argument(
        "--mapping", choices=["forward", "reverse"], help="mapping direction"
    )
    parser.add_argument("--ws-port", type=int, help="WebSocket/HTTP port")
    parser.add_argument(
        "--osc-out",
        action="append",
        metavar="HOST:PORT",
        help="OSC destination, repeatable",
    )
    parser.add_argument("--seed", type=int, help="session seed")


def _config_from_args(args: argparse.Namespace):
    return load_config(
        args.config,
        source=args.source,
        mapping=args.mapping,
        websocket_port=args.ws_port,
        osc_out=args.osc_out,
        seed=args.seed,
    )


def _cmd_run(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _config_from_args(args)
    try:
        app = create_app(config, ui_dir=args.serve_ui)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    uvicorn.run(app, host=args.host, port=config.websocket_port, log_level="warning")
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    if not args.frames and not args.audio:
        print("error: nothing to do (pass --frames and/or --audio)", file=sys.stderr)
        return 2
    config = _config_from_args(args)
    try:
        trace = MTrace.read_csv(args.trace)
        if args.frames:
            table = render_frames(
                config.mandala, trace, args.frame_rate, duration=args.duration
            )
            table.write_csv(args.frames)
            print(f"wrote {table.frame_count} frames to {args.frames}")
        if args.audio:
            mode = args.audio_mode
            granular = GranularConfig(
                base_rate=config.audio.granular.base_rate,
                alpha=config.audio.granular.alpha,
                grain_duration=config.audio.granular.grain_duration,
                grain_overlap=config.audio.granular.grain_overlap,
                seed=config.seed,
            )
            rendered = render_audio(
                mode,
                trace,
                track_high=AudioTrack.load(args.track_high) if args.track_high else None,
                track_low=AudioTrack.load(args.track_low) if args.track_low else None,
                track=AudioTrack.load(args.track) if args.track else None,
                granular_cfg=granular,
                duration=args.duration,
            )
            rendered.save(args.audio, sample_format=args.sample_format)
            print(f"wrote {rendered.duration:.2f} s of audio to {args.audio}")
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_bridge(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if not config.osc_out:
        print("error: bridge needs at least one --osc-out endpoint", file=sys.stderr)
        return 2
    try:
        handle = run_session(config)
    except (FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    targets = ", ".join(str(ep) for ep in config.osc_out)
    print(f"bridging {config.source} -> OSC [{targets}]; Ctrl-C to stop")
    try:
        if args.duration is not None:
            time.sleep(args.duration)
        else:
            while True:
                time.sleep(1.0)
    except KeyboardInterrupt:
        pass
    finally:
        handle.stop()
    state = handle.state()
    print(
        f"stopped after {state.frames_emitted} frames, "
        f"{state.samples_received} samples, {state.parse_errors} parse errors"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neuromandala",
        description="Meditation-driven particle mandala and ambient audio engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="start a live session with the web service")
    _add_common_flags(run_p)
    run_p.add_argument("--host", default="127.0.0.1", help="bind address")
    run_p.add_argument(
        "--serve-ui", metavar="DIR", help="serve a static web UI from this directory"
    )
    run_p.set_defaults(fn=_cmd_run)

    render_p = sub.add_parser("render", help="offline render a trace to CSV/WAV")
    _add_common_flags(render_p)
    render_p.add_argument("--trace", required=True, help="input trace CSV (t,m)")
    render_p.add_argument("--frames", help="output frames CSV path")
    render_p.add_argument("--audio", help="output WAV path")
    render_p.add_argument(
        "--audio-mode", choices=["crossfade", "granular"], default="crossfade"
    )
    render_p.add_argument("--track-high", help="crossfade track weighted by m")
    render_p.add_argument("--track-low", help="crossfade track weighted by 1-m")
    render_p.add_argument("--track", help="granular source track")
    render_p.add_argument("--frame-rate", type=int, default=60)
    render_p.add_argument("--duration", type=float, help="seconds to render")
    render_p.add_argument(
        "--sample-format", choices=["pcm16", "float32"], default="float32"
    )
    render_p.set_defaults(fn=_cmd_render)

    bridge_p = sub.add_parser("bridge", help="forward the signal to OSC, no web UI")
    _add_common_flags(bridge_p)
    bridge_p.add_argument("--duration", type=float, help="stop after this many seconds")
    bridge_p.set_defaults(fn=_cmd_bridge)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (FileNotFoundError, ValueError) as exc:
        # config loading and validation errors surface here
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
