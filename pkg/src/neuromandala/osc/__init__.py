from .codec import OscMessage, OscDecodeError, encode, decode
from .transport import (
    Endpoint,
    OscSender,
    OscServer,
    send,
    serve,
    ADDR_MEDITATION,
    ADDR_ATTENTION,
    ADDR_RAW,
    ADDR_MODE,
    ADDR_PARTICLE,
    DEFAULT_OUT_PORT,
    DEFAULT_IN_PORT,
)

__all__ = [
    "OscMessage",
    "OscDecodeError",
    "encode",
    "decode",
    "Endpoint",
    "OscSender",
    "OscServer",
    "send",
    "serve",
    "ADDR_MEDITATION",
    "ADDR_ATTENTION",
    "ADDR_RAW",
    "ADDR_MODE",
    "ADDR_PARTICLE",
    "DEFAULT_OUT_PORT",
    "DEFAULT_IN_PORT",
]
