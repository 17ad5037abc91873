"""Shared fixtures and an independent WAV builder used as a round-trip oracle."""
from __future__ import annotations

import struct
import warnings

import numpy as np
import pytest


def build_wav_bytes(
    int_samples: np.ndarray, rate_hz: int, bit_depth: int, channels: int
) -> bytes:
    """Construct RIFF/WAVE bytes directly from integer sample codes.

    Deliberately independent of soundset.audio_io.write_wav so round-trip
    tests have an oracle that shares no code with the implementation.
    int_samples is shaped (frames, channels) holding signed 16-bit codes or
    unsigned 8-bit codes.
    """
    arr = np.asarray(int_samples)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    assert arr.shape[1] == channels
    if bit_depth == 16:
        payload = b"".join(struct.pack("<h", int(v)) for v in arr.reshape(-1))
    else:
        payload = bytes(int(v) for v in arr.reshape(-1))
    pad = b"\x00" if len(payload) % 2 else b""
    frame = channels * bit_depth // 8
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload) + len(pad),
        b"WAVE",
        b"fmt ",
        16,
        1,
        channels,
        rate_hz,
        rate_hz * frame,
        frame,
        bit_depth,
        b"data",
        len(payload),
    )
    return header + payload + pad


def data_chunk(wav: bytes) -> bytes:
    """Extract the raw data-chunk payload from a WAV byte string."""
    pos = 12
    while pos + 8 <= len(wav):
        cid = wav[pos:pos + 4]
        (size,) = struct.unpack_from("<I", wav, pos + 4)
        if cid == b"data":
            return wav[pos + 8:pos + 8 + size]
        pos += 8 + size + (size & 1)
    raise AssertionError("no data chunk")


@pytest.fixture(scope="session")
def client():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*httpx2.*")
        from fastapi.testclient import TestClient

        from soundset.service import create_app

        with TestClient(create_app()) as c:
            yield c
