"""UDP transport for OSC messages: one message per datagram.

Also home of the outbound address map.  Meditation and attention go out as
floats in [0, 1], the raw device value as an int, the mapping direction as
a string, and (only when explicitly enabled) per-particle positions.
"""

from __future__ import annotations

import socket
import threading
from dataclasses import dataclass
from typing import Callable, Optional

from .codec import OscDecodeError, OscMessage, decode, encode

ADDR_MEDITATION = "/em/meditation"
ADDR_ATTENTION = "/em/attention"
ADDR_RAW = "/em/raw"
ADDR_MODE = "/em/mode"
ADDR_PARTICLE = "/em/particle"

DEFAULT_OUT_PORT = 9000
DEFAULT_IN_PORT = 9001

_MAX_DATAGRAM = 65507  # UDP payload ceiling over IPv4


@dataclass(frozen=True)
class Endpoint:
    host: str
    port: int

    def __post_init__(self) -> None:
        if not self.host:
            raise ValueError("endpoint host must be non-empty")
        if not 0 < self.port < 65536:
            raise ValueError(f"endpoint port {self.port} outside 1..65535")

    @classmethod
    def parse(cls, text: str) -> "Endpoint":
        """Parse 'host:port'; a bare port number means localhost."""
        if ":" in text:
            host, _, port = text.rpartition(":")
            return cls(host, int(port))
        return cls("127.0.0.1", int(text))

    def __str__(self) -> str:
        return f"{self.host}:{self.port}"


def send(endpoint: Endpoint, msg: OscMessage) -> None:
    """One-shot send.  For repeated sends prefer OscSender."""
    with OscSender(endpoint) as sender:
        sender.send(msg)


class OscSender:
    """Reusable UDP sender; safe to call from any thread."""

    def __init__(self, endpoint: Endpoint) -> None:
        self.endpoint = endpoint
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)

    def send(self, msg: OscMessage) -> None:
        data = encode(msg)
        if len(data) > _MAX_DATAGRAM:
            raise ValueError(f"encoded message is {len(data)} bytes, over UDP limit")
        self._sock.sendto(data, (self.endpoint.host, self.endpoint.port))

    def close(self) -> None:
        self._sock.close()

    def __enter__(self) -> "OscSender":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


Handler = Callable[[OscMessage, tuple], None]


class OscServer:
    """Receives OSC datagrams on a UDP port and dispatches to a handler.

    One daemon thread per server; handler calls are serialized on that
    thread.  Malformed datagrams bump decode_errors and are dropped.  A
    handler that raises bumps handler_errors; the loop keeps running.
    """

    def __init__(self, port: int = DEFAULT_IN_PORT, handler: Optional[Handler] = None,
                 host: str = "127.0.0.1") -> None:
        self.handler = handler
        self.decode_errors = 0
        self.handler_errors = 0
        self.received = 0
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        # per-frame particle bursts arrive faster than a default-sized
        # buffer absorbs; ask for more (the kernel caps this at rmem_max)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_RCVBUF, 1 << 20)
        self._sock.bind((host, port))
        self._closing = False
        self._thread: Optional[threading.Thread] = None

    @property
    def port(self) -> int:
        return self._sock.getsockname()[1]

    def start(self) -> "OscServer":
        if self._closing:
            raise RuntimeError("server is closed")
        if self._thread is None:
            self._thread = threading.Thread(
                target=self._run, daemon=True, name="osc-server"
            )
            self._thread.start()
        return self

    def _run(self) -> None:
        while True:
            try:
                data, source = self._sock.recvfrom(65535)
            except OSError:
                if self._closing:
                    return
                raise
            try:
                msg = decode(data)
            except OscDecodeError:
                self.decode_errors += 1
                continue
            self.received += 1
            if self.handler is not None:
                try:
                    self.handler(msg, source)
                except Exception:
                    self.handler_errors += 1

    def stop(self) -> None:
        self._closing = True
        self._sock.close()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
            self._thread = None

    def __enter__(self) -> "OscServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def serve(port: int, handler: Handler, host: str = "127.0.0.1") -> OscServer:
    """Bind, start the receive loop, and return the running server."""
    return OscServer(port, handler, host=host).start()
