import numpy as np
import pytest

from soundset.audio_io import SampleBuffer
from soundset.errors import RateMismatch, UnknownGesture
from soundset.gestures import Gesture, render_timeline
from soundset.gridseq import (
    CaRule,
    GridSpec,
    ca_evolve,
    ca_step,
    cells_to_text,
    column_from_text,
    grid_to_timeline,
)


def brute_force_step(column, rule_number):
    """Truth-table oracle: look the neighborhood up bit by bit."""
    table = {
        (l, c, r): (rule_number >> (l * 4 + c * 2 + r)) & 1
        for l in (0, 1) for c in (0, 1) for r in (0, 1)
    }
    n = len(column)
    return [
        bool(table[(int(column[(i - 1) % n]), int(column[i]), int(column[(i + 1) % n]))])
        for i in range(n)
    ]


RULE_110_TABLE = {  # published update table, most significant neighborhood first
    (1, 1, 1): 0, (1, 1, 0): 1, (1, 0, 1): 1, (1, 0, 0): 0,
    (0, 1, 1): 1, (0, 1, 0): 1, (0, 0, 1): 1, (0, 0, 0): 0,
}


def test_rule_110_table_agrees_with_encoding():
    for (l, c, r), out in RULE_110_TABLE.items():
        assert (110 >> (l * 4 + c * 2 + r)) & 1 == out


def test_rule_zero_maps_everything_to_false():
    rng = np.random.default_rng(0)
    for _ in range(10):
        col = rng.integers(0, 2, size=rng.integers(1, 20)).astype(bool)
        assert not ca_step(col, CaRule(0)).any()


def test_rule_204_is_identity():
    rng = np.random.default_rng(1)
    for _ in range(10):
        col = rng.integers(0, 2, size=rng.integers(1, 20)).astype(bool)
        assert np.array_equal(ca_step(col, CaRule(204)), col)
        assert ca_step(col, CaRule(204)).tolist() == brute_force_step(col, 204)


def test_rule_110_single_seed_matches_hand_table():
    col = np.zeros(8, dtype=bool)
    col[4] = True
    stepped = ca_step(col, CaRule(110))
    expected = [
        bool(RULE_110_TABLE[(int(col[(i - 1) % 8]), int(col[i]), int(col[(i + 1) % 8]))])
        for i in range(8)
    ]
    assert stepped.tolist() == expected
    assert stepped.tolist() == brute_force_step(col, 110)


@pytest.mark.parametrize("rule", [0, 30, 110, 204, 255])
def test_ca_step_matches_brute_force_oracle(rule):
    rng = np.random.default_rng(rule)
    for _ in range(20):
        col = rng.integers(0, 2, size=rng.integers(1, 33)).astype(bool)
        assert ca_step(col, CaRule(rule)).tolist() == brute_force_step(col, rule)


def test_ca_step_preserves_length():
    for n in (1, 2, 7, 64):
        col = np.ones(n, dtype=bool)
        assert len(ca_step(col, CaRule(30))) == n


def test_ca_rule_validation():
    with pytest.raises(ValueError):
        CaRule(256)
    with pytest.raises(ValueError):
        CaRule(-1)


def test_ca_evolve_shapes_and_consistency():
    col = column_from_text("010011")
    cells = ca_evolve(col, CaRule(110), 12)
    assert cells.shape == (6, 12)
    assert np.array_equal(cells[:, 0], col)
    for t in range(11):
        assert np.array_equal(cells[:, t + 1], ca_step(cells[:, t], CaRule(110)))


def test_ca_evolve_single_column_and_absorbing_zero():
    col = column_from_text("101")
    assert ca_evolve(col, CaRule(110), 1).shape == (3, 1)
    dead = ca_evolve(col, CaRule(0), 5)
    assert not dead[:, 1:].any()
    frozen = ca_evolve(col, CaRule(204), 5)
    assert np.array_equal(frozen, np.tile(col[:, None], 5))


def test_column_from_text():
    assert column_from_text("0110").tolist() == [False, True, True, False]
    with pytest.raises(ValueError):
        column_from_text("01x0")
    with pytest.raises(ValueError):
        column_from_text("")


def test_cells_to_text():
    cells = np.array([[True, False], [False, True]])
    assert cells_to_text(cells) == "10\n01\n"


# --- grid -> timeline ---

def _gesture(gid, n, seed=0, rate=44100):
    samples = 0.5 * np.random.default_rng(seed).uniform(-1, 1, n)
    return Gesture(id=gid, buffer=SampleBuffer.mono(samples, rate))


def test_all_false_grid_renders_silence():
    spec = GridSpec(("kick",), n_cols=4, step=100, cells=np.zeros((1, 4), dtype=bool))
    t = grid_to_timeline(spec, {"kick": _gesture("kick", 80)})
    assert not t.placements
    out = render_timeline(t)
    assert out.n_samples == 400
    assert not out.mono_samples.any()


def test_single_cell_placement_arithmetic():
    cells = np.zeros((1, 8), dtype=bool)
    cells[0, 3] = True
    spec = GridSpec(("kick",), n_cols=8, step=1000, cells=cells)
    t = grid_to_timeline(spec, {"kick": _gesture("kick", 1000)})
    assert len(t.placements) == 1
    assert t.placements[0].start == 3000
    assert t.length == 8000


def test_full_row_tiles_the_gesture():
    n_cols, step = 5, 64
    kick = _gesture("kick", step, seed=3)
    cells = np.ones((1, n_cols), dtype=bool)
    spec = GridSpec(("kick",), n_cols=n_cols, step=step, cells=cells)
    out = render_timeline(grid_to_timeline(spec, {"kick": kick})).mono_samples
    assert np.array_equal(out, np.tile(kick.buffer.mono_samples, n_cols))


def test_placement_count_equals_true_cells():
    rng = np.random.default_rng(7)
    cells = rng.integers(0, 2, size=(3, 10)).astype(bool)
    spec = GridSpec(("a", "b", "c"), n_cols=10, step=32, cells=cells)
    table = {gid: _gesture(gid, 20, seed=i) for i, gid in enumerate("abc")}
    t = grid_to_timeline(spec, table)
    assert len(t.placements) == int(cells.sum())


def test_long_gesture_truncated_at_cell_boundary():
    step = 50
    long_g = _gesture("pad", 200, seed=5)
    cells = np.zeros((1, 2), dtype=bool)
    cells[0, 1] = True
    spec = GridSpec(("pad",), n_cols=2, step=step, cells=cells)
    t = grid_to_timeline(spec, {"pad": long_g})
    out = render_timeline(t).mono_samples
    assert len(out) == 100
    assert np.array_equal(out[50:], long_g.buffer.mono_samples[:50])


def test_grid_errors():
    cells = np.zeros((1, 2), dtype=bool)
    spec = GridSpec(("missing",), n_cols=2, step=10, cells=cells)
    with pytest.raises(UnknownGesture):
        grid_to_timeline(spec, {})
    two = GridSpec(("a", "b"), n_cols=2, step=10, cells=np.zeros((2, 2), dtype=bool))
    with pytest.raises(RateMismatch):
        grid_to_timeline(two, {"a": _gesture("a", 5, rate=44100), "b": _gesture("b", 5, rate=22050)})
    with pytest.raises(ValueError):
        GridSpec(("a",), n_cols=3, step=10, cells=np.zeros((1, 2), dtype=bool))
