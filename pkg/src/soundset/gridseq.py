"""Trigger grid: rows of gestures x columns of time, with optional CA evolution.

The cell state lives on the rows and evolves one step per column (time flows
left to right, as the grid is played). The update is the standard elementary
cellular automaton with a periodic row boundary: output bit r looks up the
rule table at the 3-bit neighborhood (r-1, r, r+1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .audio_io import SampleBuffer
from .errors import RateMismatch, UnknownGesture
from .gestures import Gesture, Placement, Timeline


@dataclass(frozen=True)
class CaRule:
    """Elementary CA rule number (Wolfram coding, 0-255)."""

    rule_number: int

    def __post_init__(self) -> None:
        if not (0 <= self.rule_number <= 255):
            raise ValueError("rule_number must lie in [0, 255]")


@dataclass(frozen=True)
class GridSpec:
    """Boolean trigger grid: one gesture per row, n_cols steps of `step` samples."""

    row_gestures: tuple[str, ...]
    n_cols: int
    step: int
    cells: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "row_gestures", tuple(self.row_gestures))
        cells = np.asarray(self.cells, dtype=bool).copy()
        if self.n_cols < 1 or self.step < 1:
            raise ValueError("n_cols and step must be positive")
        if cells.shape != (len(self.row_gestures), self.n_cols):
            raise ValueError(
                f"cells shape {cells.shape} != (rows={len(self.row_gestures)}, n_cols={self.n_cols})"
            )
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)


def ca_step(column, rule: CaRule) -> np.ndarray:
    """One synchronous CA update down the rows, periodic at both ends."""
    col = np.asarray(column, dtype=bool)
    if col.ndim != 1 or len(col) < 1:
        raise ValueError("column must be a nonempty 1-D boolean sequence")
    left = np.roll(col, 1)
    right = np.roll(col, -1)
    idx = (left.astype(np.uint8) << 2) | (col.astype(np.uint8) << 1) | right.astype(np.uint8)
    table = np.array([(rule.rule_number >> k) & 1 for k in range(8)], dtype=bool)
    return table[idx]


def ca_evolve(initial_column, rule: CaRule, n_cols: int) -> np.ndarray:
    """Evolve a seed column across n_cols steps; returns (rows, n_cols) cells."""
    if n_cols < 1:
        raise ValueError("n_cols must be positive")
    col = np.asarray(initial_column, dtype=bool)
    out = np.empty((len(col), n_cols), dtype=bool)
    out[:, 0] = col
    for t in range(1, n_cols):
        col = ca_step(col, rule)
        out[:, t] = col
    return out


def column_from_text(text: str) -> np.ndarray:
    """Parse a seed column written as a string of 0/1 characters."""
    bits = [c for c in text.strip() if not c.isspace()]
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"seed column must be a nonempty string of 0/1, got {text!r}")
    return np.array([c == "1" for c in bits], dtype=bool)


def cells_to_text(cells: np.ndarray) -> str:
    """Render a cell matrix as lines of 0/1, one row per line."""
    return "".join("".join("1" if c else "0" for c in row) + "\n" for row in np.asarray(cells, dtype=bool))


def grid_to_timeline(g: GridSpec, gestures: Mapping[str, Gesture]) -> Timeline:
    """Place every true cell (r, c) at sample c * step on row r.

    Gestures longer than one step are truncated at the cell boundary so cells
    stay independent; spill-over is available by placing on a Timeline
    directly. All gestures must share one sample rate.
    """
    table: dict[str, Gesture] = {}
    rate = None
    for gid in g.row_gestures:
        if gid in table:
            continue
        gesture = gestures.get(gid)
        if gesture is None:
            raise UnknownGesture(f"grid row references unknown gesture {gid!r}")
        if rate is None:
            rate = gesture.buffer.rate_hz
        elif gesture.buffer.rate_hz != rate:
            raise RateMismatch(
                f"gesture {gid!r} at {gesture.buffer.rate_hz} Hz, expected {rate}"
            )
        if len(gesture) > g.step:
            truncated = gesture.buffer.mono_samples[:g.step]
            gesture = Gesture(id=gid, buffer=SampleBuffer.mono(truncated, rate))
        table[gid] = gesture

    placements = []
    rows, cols = g.cells.shape
    for r in range(rows):
        for c in range(cols):
            if g.cells[r, c]:
                placements.append(
                    Placement(gesture_id=g.row_gestures[r], row=r, start=c * g.step)
                )
    return Timeline(
        rate_hz=rate if rate is not None else 44100,
        length=g.n_cols * g.step,
        gestures=table,
        placements=tuple(placements),
    )
