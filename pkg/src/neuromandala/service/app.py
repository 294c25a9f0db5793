"""FastAPI wrapper around a live engine session.

One engine per app.  The engine's frame clock runs on its own thread; the
bridge into asyncio is call_soon_threadsafe pushing into per-client bounded
queues.  A slow WebSocket client loses old frames, never stalls the engine:
on overflow the oldest queued message is dropped (the UI only draws the
newest frame anyway).

WebSocket protocol, server to client:
    {"type": "frame", "t": ..., "m": ..., "positions": [[x, y], ...]}
    {"type": "status", "source": ..., "poorSignal": ..., "mode": ..., "degraded": ...}
client to server:
    {"type": "setM", "value": 0..1}          (manual source only)
    {"type": "setMode", "value": "forward" | "reverse"}
    {"type": "setParam", "name": ..., "value": ...}   (whitelisted)
errors back to the sender: {"type": "error", "message": ...}
"""

from __future__ import annotations

import asyncio
import json
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from ..engine import SessionConfig, run as run_session
from ..engine.core import PARAM_WHITELIST
from ..mandala import MandalaConfig
from ..offline import render_frames
from ..trace import MTrace
from .models import (
    FrameRow,
    OkResponse,
    ParamRequest,
    RenderFramesRequest,
    RenderFramesResponse,
    SetMRequest,
    SetModeRequest,
    StatusResponse,
)


class ConnectionManager:
    """Fan-out of engine events to WebSocket clients, loss-tolerant."""

    def __init__(self, queue_size: int = 8) -> None:
        self.queue_size = queue_size
        self.clients: dict[WebSocket, asyncio.Queue] = {}
        self.latest_status: Optional[dict] = None

    def connect(self, websocket: WebSocket) -> asyncio.Queue:
        queue: asyncio.Queue = asyncio.Queue(maxsize=self.queue_size)
        self.clients[websocket] = queue
        return queue

    def disconnect(self, websocket: WebSocket) -> None:
        self.clients.pop(websocket, None)

    def _fanout(self, payload: dict) -> None:
        if payload.get("type") == "status":
            self.latest_status = payload
        for queue in self.clients.values():
            while True:
                try:
                    queue.put_nowait(payload)
                    break
                except asyncio.QueueFull:
                    try:
                        queue.get_nowait()  # drop the oldest
                    except asyncio.QueueEmpty:
                        break

    def push_threadsafe(self, loop: asyncio.AbstractEventLoop, payload: dict) -> None:
        loop.call_soon_threadsafe(self._fanout, payload)


def _apply_control(handle, message: dict) -> Optional[str]:
    """Shared WS/REST control dispatch.  Returns an error string or None."""
    kind = message.get("type")
    try:
        if kind == "setM":
            handle.engine.set_manual_m(float(message["value"]))
        elif kind == "setMode":
            handle.engine.set_mapping(str(message["value"]))
        elif kind == "setParam":
            handle.engine.set_param(str(message["name"]), float(message["value"]))
        else:
            return f"unknown message type {kind!r}"
    except (KeyError, TypeError) as exc:
        return f"malformed {kind} message: {exc}"
    except ValueError as exc:
        return str(exc)
    return None


def create_app(config: SessionConfig, ui_dir: Optional[str] = None) -> FastAPI:
    manager = ConnectionManager()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        loop = asyncio.get_running_loop()
        handle = run_session(config)
        handle.subscribe_frames(lambda p: manager.push_threadsafe(loop, p))
        handle.subscribe_status(lambda p: manager.push_threadsafe(loop, p))
        app.state.handle = handle
        try:
            yield
        finally:
            handle.stop()

    app = FastAPI(title="neuromandala", lifespan=lifespan)

    @app.get("/api/status", response_model=StatusResponse, response_model_by_alias=True)
    def get_status() -> StatusResponse:
        state = app.state.handle.state()
        return StatusResponse(
            t=state.t,
            m=state.m,
            a=state.a,
            mode=state.mode,
            source=state.source,
            degraded=state.degraded,
            poor_signal=state.poor_signal,
            frames_emitted=state.frames_emitted,
            samples_received=state.samples_received,
            parse_errors=state.parse_errors,
            clip_count=state.clip_count,
        )

    @app.get("/api/params")
    def get_params() -> dict:
        return {"whitelist": sorted(PARAM_WHITELIST)}

    @app.post("/api/m", response_model=OkResponse)
    def post_m(body: SetMRequest) -> OkResponse:
        error = _apply_control(app.state.handle, {"type": "setM", "value": body.value})
        if error:
            raise HTTPException(status_code=409, detail=error)
        return OkResponse()

    @app.post("/api/mode", response_model=OkResponse)
    def post_mode(body: SetModeRequest) -> OkResponse:
        error = _apply_control(
            app.state.handle, {"type": "setMode", "value": body.value}
        )
        if error:
            raise HTTPException(status_code=409, detail=error)
        return OkResponse()

    @app.post("/api/param", response_model=OkResponse)
    def post_param(body: ParamRequest) -> OkResponse:
        error = _apply_control(
            app.state.handle,
            {"type": "setParam", "name": body.name, "value": body.value},
        )
        if error:
            raise HTTPException(status_code=422, detail=error)
        return OkResponse()

    @app.post("/api/render/frames", response_model=RenderFramesResponse)
    def post_render_frames(body: RenderFramesRequest) -> RenderFramesResponse:
        try:
            trace = MTrace.from_pairs(body.trace)
            mandala = MandalaConfig(seed=body.seed)
            table = render_frames(
                mandala, trace, body.frame_rate, duration=body.duration
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        truncated = table.frame_count > body.max_frames
        count = min(table.frame_count, body.max_frames)
        frames = [
            FrameRow(
                t=float(table.times[k]),
                m=float(table.m_values[k]),
                positions=[tuple(p) for p in table.positions[k].tolist()],
            )
            for k in range(count)
        ]
        return RenderFramesResponse(
            frame_rate=body.frame_rate, frames=frames, truncated=truncated
        )

    @app.websocket("/ws")
    async def websocket_endpoint(websocket: WebSocket) -> None:
        await websocket.accept()
        queue = manager.connect(websocket)
        if manager.latest_status is not None:
            await websocket.send_json(manager.latest_status)

        async def pump() -> None:
            while True:
                payload = await queue.get()
                await websocket.send_json(payload)

        sender = asyncio.create_task(pump())
        try:
            while True:
                raw = await websocket.receive_text()
                try:
                    message = json.loads(raw)
                except json.JSONDecodeError:
                    await websocket.send_json(
                        {"type": "error", "message": "message is not valid JSON"}
                    )
                    continue
                if not isinstance(message, dict):
                    await websocket.send_json(
                        {"type": "error", "message": "control must be a JSON object"}
                    )
                    continue
                error = _apply_control(app.state.handle, message)
                if error:
                    await websocket.send_json({"type": "error", "message": error})
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            manager.disconnect(websocket)

    if ui_dir is not None:
        if not Path(ui_dir).is_dir():
            raise FileNotFoundError(f"UI directory not found: {ui_dir}")
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        def index() -> dict:
            return {
                "service": "neuromandala",
                "websocket": "/ws",
                "status": "/api/status",
            }

    return app
