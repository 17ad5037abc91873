"""Deterministic signal generators: white noise, fBm, sines, burst fixtures.

All generators are pure functions of their parameters. Randomness comes from
numpy's PCG64 via numpy.random.default_rng(seed), drawing a documented number
of standard normals in a fixed order, so the same seed reproduces the same
samples on any platform.

gen_fbm is the calibration oracle for the Hurst estimators: fractional
Gaussian noise is synthesized by circulant embedding of the exact fGn
autocovariance (Davies-Harte) and cumulatively summed into a fractional
Brownian motion path with the prescribed exponent.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .audio_io import SampleBuffer
from .errors import AliasedFrequency, EmbeddingFallbackWarning, InvalidHurst, OutOfRange
from .gestures import Gesture


@dataclass(frozen=True)
class FbmSpec:
    hurst: float
    length: int
    seed: int

    def __post_init__(self) -> None:
        if not (0.0 < self.hurst < 1.0):
            raise InvalidHurst(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.length < 2:
            raise ValueError("length must be at least 2")


def gen_white_noise(n: int, seed: int) -> np.ndarray:
    """n standard-normal draws from PCG64 seeded with `seed`."""
    if n < 1:
        raise ValueError("n must be positive")
    return np.random.default_rng(seed).standard_normal(n)


def _fgn_autocovariance(h: float, n: int) -> np.ndarray:
    k = np.arange(n + 1, dtype=np.float64)
    two_h = 2.0 * h
    return 0.5 * ((k + 1) ** two_h - 2.0 * k ** two_h + np.abs(k - 1) ** two_h)


def _fgn_circulant(h: float, n: int, seed: int) -> np.ndarray:
    """Exact fGn sample via Davies-Harte circulant embedding.

    Consumes 2n normals from the seeded stream: z[0] and z[1] drive the two
    real eigen-coordinates, z[2:n+1] the real and z[n+1:2n] the imaginary
    parts of the paired coordinates.
    """
    gamma = _fgn_autocovariance(h, n)
    circ = np.concatenate([gamma, gamma[n - 1:0:-1]])  # length 2n
    lam = np.fft.fft(circ).real
    if lam.min() < -1e-8 * lam.max():
        raise FloatingPointError(f"circulant embedding not PSD (min eig {lam.min():g})")
    lam = np.clip(lam, 0.0, None)

    m = 2 * n
    z = np.random.default_rng(seed).standard_normal(m)
    w = np.zeros(m, dtype=np.complex128)
    w[0] = np.sqrt(lam[0] / m) * z[0]
    w[n] = np.sqrt(lam[n] / m) * z[1]
    w[1:n] = np.sqrt(lam[1:n] / (2.0 * m)) * (z[2:n + 1] + 1j * z[n + 1:2 * n])
    w[n + 1:] = np.conj(w[1:n][::-1])
    return np.fft.fft(w).real[:n]


def _fgn_spectral_approx(h: float, n: int, seed: int) -> np.ndarray:
    """Fallback: approximate fGn by shaping white noise in the frequency domain."""
    rng = np.random.default_rng(seed)
    spectrum = np.fft.rfft(rng.standard_normal(n))
    freqs = np.fft.rfftfreq(n)
    freqs[0] = freqs[1]
    shaped = spectrum * freqs ** (0.5 - h)
    shaped[0] = 0.0
    g = np.fft.irfft(shaped, n)
    return g / np.std(g)


def gen_fbm(spec: FbmSpec) -> np.ndarray:
    """Discrete fBm path of the given length, deterministic in the seed.

    At hurst == 0.5 the fGn autocovariance vanishes off lag zero and the path
    degenerates to a plain random walk: literally the cumulative sum of
    gen_white_noise(length, seed). If the embedding ever fails to be PSD the
    generator falls back to approximate spectral synthesis and warns.
    """
    if spec.hurst == 0.5:
        return np.cumsum(gen_white_noise(spec.length, spec.seed))
    try:
        fgn = _fgn_circulant(spec.hurst, spec.length, spec.seed)
    except FloatingPointError as exc:
        warnings.warn(
            f"falling back to approximate spectral synthesis: {exc}",
            EmbeddingFallbackWarning,
        )
        fgn = _fgn_spectral_approx(spec.hurst, spec.length, spec.seed)
    return np.cumsum(fgn)


def gen_sine(freq_hz: float, n: int, rate_hz: int, amplitude: float = 0.9) -> np.ndarray:
    """amplitude * sin(2 pi freq t / rate) for t = 0..n-1."""
    if not (0.0 < freq_hz < rate_hz / 2.0):
        raise AliasedFrequency(f"freq {freq_hz} Hz outside (0, {rate_hz / 2}) at rate {rate_hz}")
    if not (0.0 < amplitude <= 1.0):
        raise OutOfRange("amplitude must lie in (0, 1]")
    t = np.arange(n, dtype=np.float64)
    return amplitude * np.sin(2.0 * np.pi * freq_hz * t / rate_hz)


def gen_burst_fixture(
    n: int, seed: int, decay: float, rate_hz: int = 44100
) -> Gesture:
    """Percussive fixture: white noise under an exponential decay envelope.

    exp(-decay * t / n) shapes the noise and the result is peak-normalized to
    0.9 exactly. Deterministic in (n, seed, decay).
    """
    if n < 64:
        raise ValueError("n must be at least 64")
    if decay <= 0:
        raise ValueError("decay must be positive")
    noise = gen_white_noise(n, seed)
    envelope = np.exp(-decay * np.arange(n, dtype=np.float64) / n)
    shaped = noise * envelope
    peak = np.max(np.abs(shaped))
    samples = 0.9 * (shaped / peak)
    gid = f"burst-n{n}-seed{seed}-decay{decay:g}"
    return Gesture(id=gid, buffer=SampleBuffer.mono(samples, rate_hz))
