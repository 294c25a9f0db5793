"""OSC 1.0 message codec.

Messages only, no bundles.  Wire format: null-terminated 4-byte-padded
address, then a type-tag string starting with ',', then the arguments.
int32/float32 are big-endian; strings are null-terminated and zero-padded
to 4 bytes; blobs are a big-endian size followed by padded payload.

Floats are quantized to float32 when the message is constructed, so a
message that went through encode/decode compares equal to the original.
The decoder is total: any byte string yields either an OscMessage or an
OscDecodeError, never a crash, and never reads past the input.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Union

OscArg = Union[int, float, str, bytes]

_INT32_MIN = -(1 << 31)
_INT32_MAX = (1 << 31) - 1


class OscDecodeError(ValueError):
    """Raised for any byte string that is not a well-formed OSC message."""


def _is_ascii(text: str) -> bool:
    try:
        text.encode("ascii")
    except UnicodeEncodeError:
        return False
    return True


def _as_float32(value: float) -> float:
    return struct.unpack(">f", struct.pack(">f", value))[0]


@dataclass(frozen=True)
class OscMessage:
    address: str
    args: tuple[OscArg, ...] = ()

    def __post_init__(self) -> None:
        addr = self.address
        if not addr or not addr.startswith("/"):
            raise ValueError("OSC address must be non-empty and start with '/'")
        if not _is_ascii(addr) or "\x00" in addr:
            raise ValueError("OSC address must be ASCII without nulls")
        checked: list[OscArg] = []
        for arg in tuple(self.args):
            if isinstance(arg, bool):
                checked.append(int(arg))
            elif isinstance(arg, int):
                if not _INT32_MIN <= arg <= _INT32_MAX:
                    raise ValueError(f"int arg {arg} outside int32 range")
                checked.append(arg)
            elif isinstance(arg, float):
                checked.append(_as_float32(arg))
            elif isinstance(arg, str):
                if not _is_ascii(arg) or "\x00" in arg:
                    raise ValueError("string args must be ASCII without nulls")
                checked.append(arg)
            elif isinstance(arg, (bytes, bytearray)):
                checked.append(bytes(arg))
            else:
                raise TypeError(f"unsupported OSC arg type {type(arg).__name__}")
        object.__setattr__(self, "args", tuple(checked))


def _padded_string(text: str) -> bytes:
    raw = text.encode("ascii") + b"\x00"
    return raw + b"\x00" * (-len(raw) % 4)


def encode(msg: OscMessage) -> bytes:
    parts = [_padded_string(msg.address)]
    tags = ","
    body = bytearray()
    for arg in msg.args:
        if isinstance(arg, int):
            tags += "i"
            body += struct.pack(">i", arg)
        elif isinstance(arg, float):
            tags += "f"
            body += struct.pack(">f", arg)
        elif isinstance(arg, str):
            tags += "s"
            body += _padded_string(arg)
        else:
            tags += "b"
            body += struct.pack(">i", len(arg)) + arg + b"\x00" * (-len(arg) % 4)
    parts.append(_padded_string(tags))
    parts.append(bytes(body))
    encoded = b"".join(parts)
    assert len(encoded) % 4 == 0
    return encoded


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, count: int) -> bytes:
        if count < 0 or self.pos + count > len(self.data):
            raise OscDecodeError("truncated message")
        chunk = self.data[self.pos : self.pos + count]
        self.pos += count
        return chunk

    def take_string(self) -> str:
        end = self.data.find(b"\x00", self.pos)
        if end < 0:
            raise OscDecodeError("unterminated string")
        raw = self.data[self.pos : end]
        region = 4 * ((end - self.pos) // 4 + 1)
        padding = self.take(region)[len(raw) + 1 :]
        if padding.strip(b"\x00"):
            raise OscDecodeError("string padding must be zero bytes")
        try:
            return raw.decode("ascii")
        except UnicodeDecodeError as exc:
            raise OscDecodeError("non-ASCII string") from exc

    def done(self) -> bool:
        return self.pos == len(self.data)


def decode(data: bytes) -> OscMessage:
    if not data:
        raise OscDecodeError("empty input")
    if len(data) % 4:
        raise OscDecodeError(f"length {len(data)} is not a multiple of 4")
    reader = _Reader(data)
    address = reader.take_string()
    if not address.startswith("/"):
        raise OscDecodeError(f"address {address!r} does not start with '/'")
    tags = reader.take_string()
    if not tags.startswith(","):
        raise OscDecodeError("missing type-tag string")
    args: list[OscArg] = []
    for tag in tags[1:]:
        if tag == "i":
            args.append(struct.unpack(">i", reader.take(4))[0])
        elif tag == "f":
            args.append(struct.unpack(">f", reader.take(4))[0])
        elif tag == "s":
            args.append(reader.take_string())
        elif tag == "b":
            (size,) = struct.unpack(">i", reader.take(4))
            if size < 0:
                raise OscDecodeError("negative blob size")
            blob = reader.take(size)
            if reader.take(-size % 4).strip(b"\x00"):
                raise OscDecodeError("blob padding must be zero bytes")
            args.append(blob)
        else:
            raise OscDecodeError(f"unsupported type tag {tag!r}")
    if not reader.done():
        raise OscDecodeError("trailing bytes after arguments")
    try:
        return OscMessage(address, tuple(args))
    except (ValueError, TypeError) as exc:
        raise OscDecodeError(str(exc)) from exc
