"""PCM WAV decode/encode and ASCII export.

Supports RIFF/WAVE containers holding uncompressed PCM at 8 or 16 bits,
one or two channels; anything else is rejected loudly. Decoded amplitudes
are floats in [-1, 1]:

    16-bit signed s   ->  s / 32768
    8-bit unsigned s  ->  (s - 128) / 128

The asymmetric 16-bit divisor preserves exact zero and round-trips every
integer code. Encoding inverts the mapping with round-half-away-from-zero
and clamps out-of-range floats to the integer extrema, so decode->encode
reproduces a valid file's data chunk byte for byte.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ChannelMismatch, MalformedContainer, NotMono, UnsupportedFormat

_PCM_FORMAT_TAG = 1


@dataclass(frozen=True)
class SampleBuffer:
    """Normalized PCM audio: float amplitudes in [-1, 1], shape (channels, n)."""

    rate_hz: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        if arr.ndim != 2 or arr.shape[0] not in (1, 2):
            raise ValueError("samples must be 1-D or (channels, n) with 1 or 2 channels")
        if int(self.rate_hz) <= 0:
            raise ValueError("rate_hz must be positive")
        if arr.size and np.max(np.abs(arr)) > 1.0:
            raise ValueError("amplitudes must lie in [-1, 1]")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "rate_hz", int(self.rate_hz))

    @classmethod
    def mono(cls, samples, rate_hz: int) -> "SampleBuffer":
        return cls(rate_hz=rate_hz, samples=np.asarray(samples, dtype=np.float64))

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        """Frames per channel."""
        return self.samples.shape[1]

    @property
    def mono_samples(self) -> np.ndarray:
        if self.channels != 1:
            raise NotMono(f"buffer has {self.channels} channels")
        return self.samples[0]


@dataclass(frozen=True)
class PcmSpec:
    """Encode parameters for write_wav."""

    bit_depth: int
    rate_hz: int
    channels: int

    def __post_init__(self) -> None:
        if self.bit_depth not in (8, 16):
            raise ValueError("bit_depth must be 8 or 16")
        if self.rate_hz <= 0:
            raise ValueError("rate_hz must be positive")
        if self.channels not in (1, 2):
            raise ValueError("channels must be 1 or 2")


def read_wav(data: bytes) -> SampleBuffer:
    """Decode a RIFF/WAVE PCM byte string.

    The fmt chunk must precede the data chunk; other chunks are skipped and
    anything after data is ignored. Raises MalformedContainer on structural
    damage and UnsupportedFormat for non-PCM codecs, bit depths outside
    {8, 16}, or more than two channels.
    """
    if len(data) < 12:
        raise MalformedContainer("file shorter than a RIFF header")
    if data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedContainer("not a RIFF/WAVE container")

    fmt = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body_start = pos + 8
        if body_start + size > len(data):
            raise MalformedContainer(f"chunk {cid!r} truncated")
        if cid == b"fmt ":
            if size < 16:
                raise MalformedContainer("fmt chunk too small")
            tag, channels, rate, _brate, _align, bits = struct.unpack_from(
                "<HHIIHH", data, body_start
            )
            if tag != _PCM_FORMAT_TAG:
                raise UnsupportedFormat(f"codec tag {tag} is not PCM")
            if bits not in (8, 16):
                raise UnsupportedFormat(f"bit depth {bits} not supported")
            if channels not in (1, 2):
                raise UnsupportedFormat(f"{channels} channels not supported")
            if rate <= 0:
                raise MalformedContainer("sample rate must be positive")
            fmt = (channels, rate, bits)
        elif cid == b"data":
            if fmt is None:
                raise MalformedContainer("data chunk before fmt chunk")
            return _decode_data(data[body_start:body_start + size], *fmt)
        pos = body_start + size + (size & 1)  # chunks are word-aligned
    raise MalformedContainer("missing data chunk")


def _decode_data(payload: bytes, channels: int, rate: int, bits: int) -> SampleBuffer:
    frame_size = channels * bits // 8
    if len(payload) % frame_size != 0:
        raise MalformedContainer("data chunk is not a whole number of frames")
    if bits == 16:
        ints = np.frombuffer(payload, dtype="<i2").astype(np.float64)
        floats = ints / 32768.0
    else:
        ints = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
        floats = (ints - 128.0) / 128.0
    return SampleBuffer(rate_hz=rate, samples=floats.reshape(-1, channels).T)


def _quantize(x: np.ndarray, scale: int) -> np.ndarray:
    # round half away from zero, matching the decode mapping's inverse
    y = x * float(scale)
    return np.where(y >= 0, np.floor(y + 0.5), np.ceil(y - 0.5))


def write_wav(buf: SampleBuffer, spec: PcmSpec) -> bytes:
    """Encode a SampleBuffer as a RIFF/WAVE PCM byte string."""
    if spec.channels != buf.channels:
        raise ChannelMismatch(
            f"spec has {spec.channels} channels, buffer has {buf.channels}"
        )
    interleaved = buf.samples.T.reshape(-1)
    if spec.bit_depth == 16:
        q = np.clip(_quantize(interleaved, 32768), -32768, 32767)
        payload = q.astype("<i2").tobytes()
    else:
        q = np.clip(_quantize(interleaved, 128) + 128, 0, 255)
        payload = q.astype(np.uint8).tobytes()

    frame_size = spec.channels * spec.bit_depth // 8
    pad = b"\x00" if len(payload) & 1 else b""
    fmt_chunk = struct.pack(
        "<4sIHHIIHH",
        b"fmt ", 16, _PCM_FORMAT_TAG, spec.channels, spec.rate_hz,
        spec.rate_hz * frame_size, frame_size, spec.bit_depth,
    )
    data_header = struct.pack("<4sI", b"data", len(payload))
    riff_size = 4 + len(fmt_chunk) + len(data_header) + len(payload) + len(pad)
    return b"".join([
        struct.pack("<4sI4s", b"RIFF", riff_size, b"WAVE"),
        fmt_chunk, data_header, payload, pad,
    ])


def to_ascii_text(buf: SampleBuffer) -> str:
    """One amplitude per line, fixed-point with six decimals, newline-terminated."""
    samples = buf.mono_samples
    return "".join(f"{x:.6f}\n" for x in samples)


def downmix_mono(buf: SampleBuffer) -> SampleBuffer:
    """Mono passes through unchanged; stereo becomes the per-sample channel mean."""
    if buf.channels == 1:
        return buf
    return SampleBuffer(rate_hz=buf.rate_hz, samples=buf.samples.mean(axis=0))
