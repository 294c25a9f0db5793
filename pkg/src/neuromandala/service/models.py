"""Request/response bodies for the HTTP control surface."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class StatusResponse(BaseModel):
    t: float
    m: float
    a: float
    mode: str
    source: str
    degraded: bool
    poor_signal: int = Field(serialization_alias="poorSignal")
    frames_emitted: int = Field(serialization_alias="framesEmitted")
    samples_received: int = Field(serialization_alias="samplesReceived")
    parse_errors: int = Field(serialization_alias="parseErrors")
    clip_count: int = Field(serialization_alias="clipCount")

    model_config = {"populate_by_name": True}


class SetMRequest(BaseModel):
    value: float = Field(ge=0.0, le=1.0)


class SetModeRequest(BaseModel):
    value: Literal["forward", "reverse"]


class ParamRequest(BaseModel):
    name: str
    value: float


class RenderFramesRequest(BaseModel):
    """Inline offline render: trace points in, frame rows out."""

    trace: list[tuple[float, float]] = Field(min_length=1)
    frame_rate: int = Field(default=60, ge=1, le=240)
    seed: int = 0
    duration: Optional[float] = None
    max_frames: int = Field(default=600, ge=1, le=36000)


class FrameRow(BaseModel):
    t: float
    m: float
    positions: list[tuple[float, float]]


class RenderFramesResponse(BaseModel):
    frame_rate: int
    frames: list[FrameRow]
    truncated: bool


class OkResponse(BaseModel):
    ok: bool = True
