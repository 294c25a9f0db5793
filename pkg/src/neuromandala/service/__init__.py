from .app import ConnectionManager, create_app
from .models import (
    ParamRequest,
    RenderFramesRequest,
    SetMRequest,
    SetModeRequest,
    StatusResponse,
)

__all__ = [
    "ConnectionManager",
    "create_app",
    "StatusResponse",
    "SetMRequest",
    "SetModeRequest",
    "ParamRequest",
    "RenderFramesRequest",
]
