"""Delay embedding, distance/recurrence matrices, and PGM export.

Distances stay unnormalized (they keep the signal's physical scale);
normalization happens only when rendering an image. The matrices are dense
and O(M^2) in memory, so point counts above a configurable cap (default
8192) are refused: decimating down to the cap is the caller's explicit
choice, not something done silently.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidEpsilon, IoFailure, PointLimitExceeded, SeriesTooShort

DEFAULT_MAX_POINTS = 8192


@dataclass(frozen=True)
class EmbeddingConfig:
    """Delay-coordinate parameters: dimension m and delay tau, in samples."""

    dimension: int = 2
    delay: int = 1

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if self.delay < 1:
            raise ValueError("delay must be at least 1")


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("distance matrix must be square")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def size(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class RecurrenceMatrix:
    bits: np.ndarray
    epsilon: float

    def __post_init__(self) -> None:
        arr = np.asarray(self.bits, dtype=bool).copy()
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("recurrence matrix must be square")
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    @property
    def size(self) -> int:
        return self.bits.shape[0]


def delay_embed(series, cfg: EmbeddingConfig) -> np.ndarray:
    """Embed a scalar series into (M, m) state vectors, M = N - (m-1)*tau."""
    y = np.asarray(series, dtype=np.float64)
    m, tau = cfg.dimension, cfg.delay
    span = (m - 1) * tau
    if span >= len(y):
        raise SeriesTooShort(
            f"need more than {span} samples for m={m}, tau={tau}, got {len(y)}"
        )
    count = len(y) - span
    return np.stack([y[k * tau:k * tau + count] for k in range(m)], axis=1)


def distance_matrix(vectors, max_points: int = DEFAULT_MAX_POINTS) -> DistanceMatrix:
    """Euclidean distances between all vector pairs, each pair computed once."""
    v = np.asarray(vectors, dtype=np.float64)
    if v.ndim == 1:
        v = v[:, np.newaxis]
    n = v.shape[0]
    if n == 0:
        raise ValueError("need at least one vector")
    if n > max_points:
        raise PointLimitExceeded(f"{n} points exceeds the cap of {max_points}")
    d = np.zeros((n, n), dtype=np.float64)
    for i in range(n - 1):
        diff = v[i + 1:] - v[i]
        row = np.sqrt(np.sum(diff * diff, axis=1))
        d[i, i + 1:] = row
        d[i + 1:, i] = row
    return DistanceMatrix(values=d)


def _offdiag_values(d: DistanceMatrix) -> np.ndarray:
    iu = np.triu_indices(d.size, k=1)
    return d.values[iu]


def threshold_recurrence(
    d: DistanceMatrix,
    epsilon: float | None = None,
    rate: float | None = None,
) -> RecurrenceMatrix:
    """Threshold a distance matrix at a fixed epsilon or at a target rate.

    Exactly one of epsilon/rate must be given. Rate mode picks epsilon as the
    rate-quantile of the off-diagonal distances, so the achieved recurrence
    rate lands within 1/M of the request (ties aside). bit(i, j) is
    d(i, j) <= epsilon; the diagonal is always recurrent.
    """
    if (epsilon is None) == (rate is None):
        raise InvalidEpsilon("give exactly one of epsilon or rate")
    if epsilon is not None:
        if epsilon < 0:
            raise InvalidEpsilon("epsilon must be nonnegative")
        eps = float(epsilon)
    else:
        if not (0.0 < rate <= 1.0):
            raise InvalidEpsilon("rate must lie in (0, 1]")
        offdiag = _offdiag_values(d)
        if len(offdiag) == 0:
            eps = 0.0
        else:
            k = min(len(offdiag), max(1, int(np.ceil(rate * len(offdiag)))))
            eps = float(np.partition(offdiag, k - 1)[k - 1])
    return RecurrenceMatrix(bits=d.values <= eps, epsilon=eps)


def recurrence_rate(r: RecurrenceMatrix) -> float:
    """Fraction of recurrent pairs, diagonal excluded."""
    n = r.size
    if n < 2:
        return 0.0
    hits = int(r.bits.sum()) - n  # diagonal is always true
    return hits / (n * n - n)


def pgm_bytes(matrix: DistanceMatrix | RecurrenceMatrix) -> bytes:
    """Render as binary PGM (P5), row 0 at the top.

    Distance matrices map to 255 * (1 - d/d_max), so near pairs are bright;
    an all-zero matrix renders all-white. Recurrence matrices use plot
    convention: recurrent points are black on white.
    """
    if isinstance(matrix, DistanceMatrix):
        d = matrix.values
        dmax = d.max() if d.size else 0.0
        if dmax == 0.0:
            pixels = np.full(d.shape, 255, dtype=np.uint8)
        else:
            pixels = np.floor(255.0 * (1.0 - d / dmax) + 0.5).astype(np.uint8)
    elif isinstance(matrix, RecurrenceMatrix):
        pixels = np.where(matrix.bits, 0, 255).astype(np.uint8)
    else:
        raise TypeError("expected a DistanceMatrix or RecurrenceMatrix")
    n = pixels.shape[0]
    header = f"P5\n{n} {n}\n255\n".encode("ascii")
    return header + pixels.tobytes()


def export_image(matrix: DistanceMatrix | RecurrenceMatrix, path) -> None:
    """Write the PGM rendering to a file path."""
    data = pgm_bytes(matrix)
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
