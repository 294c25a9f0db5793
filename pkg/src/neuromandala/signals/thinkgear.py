"""Streaming parser for the ThinkGear serial packet protocol.

Packet layout: 0xAA 0xAA | payload length (<= 169) | payload | checksum,
where checksum = 0xFF - (sum of payload bytes mod 256).  The payload is a
sequence of rows: optional 0x55 extension prefixes, a code byte, then either
one value byte (codes < 0x80) or an explicit length byte plus that many data
bytes (codes >= 0x80, e.g. the raw-wave code 0x80, which is recognized and
skipped).  Codes of interest: 0x02 contact quality, 0x04 attention,
0x05 meditation.

The parser is a pure state machine over an internal buffer: bytes may be fed
in arbitrary chunks and the emitted samples are identical to parsing the
concatenated stream in one call.  Malformed data (bad checksum, impossible
length byte) never raises; the parser drops the packet and hunts for the
next 0xAA 0xAA.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

SYNC = 0xAA
MAX_PAYLOAD = 169

CODE_EXTENSION = 0x55
CODE_POOR_SIGNAL = 0x02
CODE_ATTENTION = 0x04
CODE_MEDITATION = 0x05


@dataclass(frozen=True)
class EsenseSample:
    """One 1 Hz composite reading from the headset.

    `poor_signal` is contact quality: 0 means good contact, 200 means the
    electrode is off the skin.
    """

    timestamp: float
    meditation: int
    attention: int
    poor_signal: int

    def __post_init__(self) -> None:
        if not 0 <= self.meditation <= 100:
            raise ValueError(f"meditation out of range: {self.meditation}")
        if not 0 <= self.attention <= 100:
            raise ValueError(f"attention out of range: {self.attention}")
        if not 0 <= self.poor_signal <= 200:
            raise ValueError(f"poor_signal out of range: {self.poor_signal}")


class ThinkGearParser:
    """Incremental packet decoder with resynchronization.

    `clock` stamps emitted samples; the default counts packets, which at the
    device's nominal 1 Hz doubles as seconds and is strictly increasing.
    Counters (`packets_ok`, `checksum_failures`, `desyncs`) are cumulative.
    """

    def __init__(self, clock: Optional[Callable[[], float]] = None) -> None:
        self._buf = bytearray()
        self._clock = clock
        self._packet_index = 0
        # Real headsets report contact quality in every packet; streams that
        # never do are trusted rather than held at "no contact".
        self._last_poor_signal = 0
        self._last_meditation = 0
        self._last_attention = 0
        self.packets_ok = 0
        self.checksum_failures = 0
        self.desyncs = 0

    def feed(self, chunk: bytes) -> list[EsenseSample]:
        """Consume a chunk, return every sample completed by it."""
        self._buf.extend(chunk)
        samples: list[EsenseSample] = []
        while True:
            sample = self._next_packet()
            if sample is _NEED_MORE:
                break
            if sample is not None:
                samples.append(sample)
        return samples

    def _next_packet(self):
        buf = self._buf
        start = buf.find(b"\xaa\xaa")
        if start < 0:
            # No sync pair; keep a trailing 0xAA in case its twin is next.
            keep = 1 if buf[-1:] == b"\xaa" else 0
            del buf[: len(buf) - keep]
            return _NEED_MORE
        del buf[:start]
        if len(buf) < 3:
            return _NEED_MORE
        length = buf[2]
        if length > MAX_PAYLOAD:
            self.desyncs += 1
            del buf[:1]
            return None
        end = 3 + length + 1
        if len(buf) < end:
            return _NEED_MORE
        payload = bytes(buf[3 : 3 + length])
        checksum = buf[end - 1]
        if checksum != (0xFF - (sum(payload) & 0xFF)):
            self.checksum_failures += 1
            del buf[:1]
            return None
        del buf[:end]
        self.packets_ok += 1
        return self._decode_payload(payload)

    def _decode_payload(self, payload: bytes) -> Optional[EsenseSample]:
        fields: dict[int, int] = {}
        i = 0
        n = len(payload)
        while i < n:
            code = payload[i]
            i += 1
            if code == CODE_EXTENSION:
                continue
            if code >= 0x80:
                if i >= n:
                    break
                vlength = payload[i]
                i += 1 + vlength  # multi-byte rows (raw wave etc.) are skipped
                continue
            if i >= n:
                break
            fields[code] = payload[i]
            i += 1
        if CODE_POOR_SIGNAL in fields:
            self._last_poor_signal = min(fields[CODE_POOR_SIGNAL], 200)
        if CODE_MEDITATION not in fields and CODE_ATTENTION not in fields:
            return None
        if CODE_MEDITATION in fields:
            self._last_meditation = min(fields[CODE_MEDITATION], 100)
        if CODE_ATTENTION in fields:
            self._last_attention = min(fields[CODE_ATTENTION], 100)
        self._packet_index += 1
        timestamp = self._clock() if self._clock else float(self._packet_index)
        return EsenseSample(
            timestamp=timestamp,
            meditation=self._last_meditation,
            attention=self._last_attention,
            poor_signal=self._last_poor_signal,
        )


_NEED_MORE = object()


def parse_thinkgear(chunk: bytes, parser: Optional[ThinkGearParser] = None):
    """Functional wrapper: returns (parser_state, samples)."""
    if parser is None:
        parser = ThinkGearParser()
    return parser, parser.feed(chunk)
