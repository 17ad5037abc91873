import numpy as np
import pytest

from soundset.errors import AliasedFrequency, EmbeddingFallbackWarning, InvalidHurst, OutOfRange
from soundset import synthesis
from soundset.synthesis import (
    FbmSpec,
    gen_burst_fixture,
    gen_fbm,
    gen_sine,
    gen_white_noise,
)


# --- white noise ---

def test_white_noise_deterministic_and_seed_sensitive():
    assert np.array_equal(gen_white_noise(8, 42), gen_white_noise(8, 42))
    assert not np.array_equal(gen_white_noise(8, 1), gen_white_noise(8, 2))


def test_white_noise_moments():
    x = gen_white_noise(10**5, 0)
    assert abs(x.mean()) < 0.02
    assert abs(x.var() - 1.0) < 0.05


def test_white_noise_rejects_nonpositive_n():
    with pytest.raises(ValueError):
        gen_white_noise(0, 1)


# --- fbm ---

def test_fbm_half_is_cumsum_of_white_noise():
    out = gen_fbm(FbmSpec(hurst=0.5, length=128, seed=3))
    assert np.array_equal(out, np.cumsum(gen_white_noise(128, 3)))


def test_fbm_spec_validation():
    with pytest.raises(InvalidHurst):
        FbmSpec(hurst=1.0, length=128, seed=0)
    with pytest.raises(ValueError):
        FbmSpec(hurst=0.5, length=1, seed=0)


def test_fbm_deterministic():
    a = gen_fbm(FbmSpec(0.7, 512, 9))
    b = gen_fbm(FbmSpec(0.7, 512, 9))
    assert np.array_equal(a, b)
    assert len(a) == 512


def test_fgn_lag_one_autocorrelation_matches_closed_form():
    # fGn: rho_1 = 2^{2H-1} - 1
    for h in (0.3, 0.7):
        rhos = []
        for seed in range(20):
            g = np.diff(gen_fbm(FbmSpec(h, 2**14, seed)), prepend=0.0)
            rhos.append(np.corrcoef(g[:-1], g[1:])[0, 1])
        assert np.mean(rhos) == pytest.approx(2 ** (2 * h - 1) - 1, abs=0.1)


def test_fbm_variogram_slope_tracks_2h():
    lags = np.array([1, 2, 4, 8, 16, 32, 64, 128])
    slopes = []
    for seed in range(20):
        y = gen_fbm(FbmSpec(0.7, 2**14, seed))
        v = [np.mean((y[w:] - y[:-w]) ** 2) for w in lags]
        slopes.append(np.polyfit(np.log(lags), np.log(v), 1)[0])
    assert np.mean(slopes) == pytest.approx(1.4, abs=0.2)


def test_fbm_increment_variance_is_unit_at_lag_one():
    y = gen_fbm(FbmSpec(0.3, 2**14, 4))
    v1 = np.mean(np.diff(y) ** 2)
    assert v1 == pytest.approx(1.0, abs=0.1)


def test_fbm_fallback_synthesis_warns(monkeypatch):
    def broken(h, n, seed):
        raise FloatingPointError("forced non-PSD for test")

    monkeypatch.setattr(synthesis, "_fgn_circulant", broken)
    with pytest.warns(EmbeddingFallbackWarning):
        out = gen_fbm(FbmSpec(0.7, 256, 5))
    assert len(out) == 256
    assert np.all(np.isfinite(out))


def test_fbm_spectral_approx_is_deterministic():
    a = synthesis._fgn_spectral_approx(0.7, 512, 2)
    b = synthesis._fgn_spectral_approx(0.7, 512, 2)
    assert np.array_equal(a, b)
    assert np.std(a) == pytest.approx(1.0, abs=1e-9)


# --- sine ---

def test_sine_phase_and_bounds():
    y = gen_sine(441.0, 1000, 44100, amplitude=0.5)
    assert y[0] == 0.0
    assert np.max(np.abs(y)) <= 0.5


def test_sine_whole_periods_return_to_phase():
    rate, freq = 44100, 441.0  # 100-sample period
    k = 5
    y = gen_sine(freq, int(rate / freq) * k + 1, rate)
    assert abs(y[-1] - y[0]) < 1e-6


def test_sine_rejects_aliased_or_bad_amplitude():
    with pytest.raises(AliasedFrequency):
        gen_sine(22050.0, 100, 44100)
    with pytest.raises(AliasedFrequency):
        gen_sine(0.0, 100, 44100)
    with pytest.raises(OutOfRange):
        gen_sine(100.0, 100, 44100, amplitude=1.5)


# --- burst fixture ---

def test_burst_peak_is_exactly_09_and_deterministic():
    a = gen_burst_fixture(4096, 7, 5.0)
    b = gen_burst_fixture(4096, 7, 5.0)
    y = a.buffer.mono_samples
    assert np.max(np.abs(y)) == 0.9
    assert np.array_equal(y, b.buffer.mono_samples)
    assert a.buffer.rate_hz == 44100
    assert len(a) == 4096


def test_burst_envelope_decays():
    y = np.abs(gen_burst_fixture(2**15, 7, 5.0).buffer.mono_samples)
    assert y[0] <= 0.9
    block_maxima = y.reshape(8, -1).max(axis=1)
    assert np.all(np.diff(block_maxima) < 0)


def test_burst_validation():
    with pytest.raises(ValueError):
        gen_burst_fixture(32, 1, 5.0)
    with pytest.raises(ValueError):
        gen_burst_fixture(128, 1, 0.0)
