"""Gestures on a sequencer timeline and the set operations that combine them.

A gesture is one mono clip. Union places two gestures exactly adjacent in
time (supports touch at a single boundary index); intersection keeps only
the overlap region and mixes by dividing through the active-layer count, so
overlaying a gesture with itself reproduces it exactly. Fuzzy variants use
|amplitude| as the membership value with Zadeh max/min, preserving the sign
of the winning sample. Negation operates on boolean support masks, not on
audio: the set-valued universe has no waveform of its own.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .audio_io import SampleBuffer
from .errors import (
    EmptyIntersection,
    LengthMismatch,
    NotMono,
    OutOfRange,
    RateMismatch,
    RowOutOfRange,
    UnknownGesture,
)

FUZZY_MODES = ("union", "intersect")


@dataclass(frozen=True)
class Gesture:
    """A discrete sound object: one named mono clip."""

    id: str
    buffer: SampleBuffer

    def __post_init__(self) -> None:
        if self.buffer.channels != 1:
            raise NotMono(f"gesture {self.id!r} must be mono")
        if self.buffer.n_samples == 0:
            raise ValueError(f"gesture {self.id!r} has an empty buffer")

    def __len__(self) -> int:
        return self.buffer.n_samples


@dataclass(frozen=True)
class Placement:
    """A gesture instance on the timeline: which row, starting at which sample."""

    gesture_id: str
    row: int
    start: int

    def __post_init__(self) -> None:
        if self.row < 0 or self.start < 0:
            raise ValueError("row and start must be nonnegative")


@dataclass(frozen=True)
class Timeline:
    """Gestures placed in rows x time over a fixed-length sample universe."""

    rate_hz: int
    length: int
    gestures: Mapping[str, Gesture] = field(default_factory=dict)
    placements: tuple[Placement, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gestures", dict(self.gestures))
        object.__setattr__(self, "placements", tuple(self.placements))
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        for g in self.gestures.values():
            if g.buffer.rate_hz != self.rate_hz:
                raise RateMismatch(
                    f"gesture {g.id!r} rate {g.buffer.rate_hz} != timeline rate {self.rate_hz}"
                )
        for p in self.placements:
            g = self.gestures.get(p.gesture_id)
            if g is None:
                raise UnknownGesture(f"placement references unknown gesture {p.gesture_id!r}")
            if p.start + len(g) > self.length:
                raise ValueError(
                    f"placement of {p.gesture_id!r} at {p.start} overruns timeline length {self.length}"
                )


@dataclass(frozen=True)
class SupportMask:
    """Boolean set-of-support over the universe, one bit per sample."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.bits, dtype=bool).copy()
        if arr.ndim != 1:
            raise ValueError("mask bits must be one-dimensional")
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    def __len__(self) -> int:
        return self.bits.shape[0]


@dataclass(frozen=True)
class AlmostDisjointVerdict:
    """Outcome of the lower-dimension test for an intersection."""

    dim_a: float
    dim_b: float
    dim_intersection: float
    is_almost_disjoint: bool
    margin: float

    def to_dict(self) -> dict:
        return {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "dim_intersection": self.dim_intersection,
            "is_almost_disjoint": self.is_almost_disjoint,
            "margin": self.margin,
        }


def _require_same_rate(a: Gesture, b: Gesture) -> None:
    if a.buffer.rate_hz != b.buffer.rate_hz:
        raise RateMismatch(
            f"{a.id!r} at {a.buffer.rate_hz} Hz vs {b.id!r} at {b.buffer.rate_hz} Hz"
        )


def union_adjacent(a: Gesture, b: Gesture) -> SampleBuffer:
    """Concatenate a then b; their supports touch at one boundary index."""
    _require_same_rate(a, b)
    joined = np.concatenate([a.buffer.mono_samples, b.buffer.mono_samples])
    return SampleBuffer.mono(joined, a.buffer.rate_hz)


def intersect_overlay(a: Gesture, b: Gesture, offset: int = 0) -> SampleBuffer:
    """Overlay b at `offset` samples relative to a and keep only the overlap.

    Each output sample is the mean of the two active layers, so
    intersect_overlay(a, a, 0) == a exactly. Raises EmptyIntersection when
    the supports do not overlap (a disjoint pair).
    """
    _require_same_rate(a, b)
    xa = a.buffer.mono_samples
    xb = b.buffer.mono_samples
    lo = max(0, offset)
    hi = min(len(xa), offset + len(xb))
    if hi <= lo:
        raise EmptyIntersection(f"offset {offset} leaves no overlap")
    mixed = (xa[lo:hi] + xb[lo - offset:hi - offset]) / 2.0
    return SampleBuffer.mono(mixed, a.buffer.rate_hz)


def negate_support(a_mask: SupportMask) -> SupportMask:
    """Everything in the universe that is not in A."""
    return SupportMask(~a_mask.bits)


def support_mask(t: Timeline, row: int, threshold: float = 0.0) -> SupportMask:
    """Set-of-support for one row: bit i is true iff a placement covers sample i.

    With threshold > 0 the covered sample must also exceed that magnitude.
    Any nonnegative row is valid; a row with no placements is the empty set.
    """
    if row < 0:
        raise RowOutOfRange(f"row {row} is negative")
    if threshold < 0:
        raise OutOfRange("threshold must be nonnegative")
    bits = np.zeros(t.length, dtype=bool)
    for p in t.placements:
        if p.row != row:
            continue
        g = t.gestures[p.gesture_id].buffer.mono_samples
        if threshold > 0:
            bits[p.start:p.start + len(g)] |= np.abs(g) > threshold
        else:
            bits[p.start:p.start + len(g)] = True
    return SupportMask(bits)


def fuzzy_combine(a: Gesture, b: Gesture, mode: str) -> SampleBuffer:
    """Zadeh operators over membership |amplitude|, keeping the winner's sign.

    union picks the sample with the larger magnitude (max t-conorm),
    intersect the smaller (min t-norm); ties take a's sample. Requires full
    overlap: equal rates and equal lengths.
    """
    if mode not in FUZZY_MODES:
        raise ValueError(f"mode must be one of {FUZZY_MODES}")
    _require_same_rate(a, b)
    xa = a.buffer.mono_samples
    xb = b.buffer.mono_samples
    if len(xa) != len(xb):
        raise LengthMismatch(f"lengths {len(xa)} and {len(xb)} differ")
    if mode == "union":
        take_b = np.abs(xb) > np.abs(xa)
    else:
        take_b = np.abs(xb) < np.abs(xa)
    return SampleBuffer.mono(np.where(take_b, xb, xa), a.buffer.rate_hz)


def is_almost_disjoint(
    dim_a: float, dim_b: float, dim_intersection: float, tolerance: float = 0.0
) -> AlmostDisjointVerdict:
    """Test whether the intersection's dimension sits below both inputs'.

    True iff dim_intersection < min(dim_a, dim_b) - tolerance; symmetric in
    (dim_a, dim_b). margin is min(dim_a, dim_b) - dim_intersection.
    """
    dims = (dim_a, dim_b, dim_intersection)
    if not all(np.isfinite(d) for d in dims):
        raise OutOfRange("dimensions must be finite")
    if tolerance < 0:
        raise OutOfRange("tolerance must be nonnegative")
    floor = min(dim_a, dim_b)
    return AlmostDisjointVerdict(
        dim_a=dim_a,
        dim_b=dim_b,
        dim_intersection=dim_intersection,
        is_almost_disjoint=bool(dim_intersection < floor - tolerance),
        margin=floor - dim_intersection,
    )


def render_timeline(t: Timeline) -> SampleBuffer:
    """Mix all placements onto one mono buffer of the timeline's length.

    Each output sample is the sum of the active layers divided by the number
    of layers covering that index, so stacked identical layers cannot clip
    and a lone layer passes through unchanged. No placements means silence.
    """
    acc = np.zeros(t.length, dtype=np.float64)
    count = np.zeros(t.length, dtype=np.int64)
    for p in t.placements:
        g = t.gestures[p.gesture_id].buffer.mono_samples
        acc[p.start:p.start + len(g)] += g
        count[p.start:p.start + len(g)] += 1
    mixed = acc / np.maximum(count, 1)
    return SampleBuffer.mono(mixed, t.rate_hz)


def timeline_from_doc(doc: Mapping, buffers: Mapping[str, SampleBuffer]) -> Timeline:
    """Build a Timeline from its JSON document plus pre-decoded gesture buffers.

    The document schema is {rate_hz, length, gestures: [{id, file}],
    placements: [{gesture_id, row, start}]}; file resolution happens at the
    caller (the service never touches client paths).
    """
    gestures = {}
    for entry in doc.get("gestures", []):
        gid = entry["id"]
        if gid not in buffers:
            raise UnknownGesture(f"no decoded buffer supplied for gesture {gid!r}")
        gestures[gid] = Gesture(id=gid, buffer=buffers[gid])
    placements = tuple(
        Placement(gesture_id=p["gesture_id"], row=int(p["row"]), start=int(p["start"]))
        for p in doc.get("placements", [])
    )
    return Timeline(
        rate_hz=int(doc["rate_hz"]),
        length=int(doc["length"]),
        gestures=gestures,
        placements=placements,
    )
