import numpy as np
import pytest

from neuromandala.audio import AudioTrack


def thinkgear_checksum(payload: bytes) -> int:
    # independent of the parser: checksum = 0xFF - (sum of payload mod 256)
    return 0xFF - (sum(payload) & 0xFF)


def build_packet(*rows: bytes) -> bytes:
    """Assemble a valid ThinkGear packet from payload rows."""
    payload = b"".join(rows)
    assert len(payload) <= 169
    return bytes([0xAA, 0xAA, len(payload)]) + payload + bytes(
        [thinkgear_checksum(payload)]
    )


def esense_packet(meditation: int, attention: int = None, poor_signal: int = None) -> bytes:
    rows = []
    if poor_signal is not None:
        rows.append(bytes([0x02, poor_signal]))
    if attention is not None:
        rows.append(bytes([0x04, attention]))
    rows.append(bytes([0x05, meditation]))
    return build_packet(*rows)


@pytest.fixture
def sine_track():
    def make(freq=220.0, seconds=1.0, rate=44100, channels=1, gain=0.5):
        t = np.arange(int(rate * seconds)) / rate
        data = gain * np.sin(2 * np.pi * freq * t)
        if channels == 2:
            data = np.stack([data, 0.5 * data], axis=1)
        return AudioTrack(data, rate)

    return make
