"""Hurst exponent estimators for one-dimensional amplitude series.

Three methods, each reducing to an ordinary least-squares slope in a log-log
(or level-log) plane, all treating the input as a self-affine trace:

  variogram   V(w) = mean_t (y(t+w) - y(t))^2 at log-spaced lags; slope = 2H
  spectral    periodogram of the linearly detrended series; slope = -(2H + 1)
  wavelet     Haar detail std per scale level j; log2(sigma_j) slope = H + 1/2

Estimates are clamped into [0.01, 0.99] with a flag rather than erroring:
real fits can leave the open unit interval and the violation should stay
observable. The fractal dimension is always D = 2 - H, computed exactly.

Fit windows are configurable through FitConfig. The spectral default keeps
only the lowest 1/64 of the positive-frequency bins (at least 8): the raw
full-band periodogram of a sampled trace flattens at high frequency through
aliasing and nonstationary leakage, which biases the slope far below its
asymptotic value. The default was calibrated against the fBm generator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSignal, OutOfRange, TooShort

_MIN_SERIES = 64
_HURST_FLOOR = 0.01
_HURST_CEIL = 0.99
_BOUNDARY_TOL = 1e-9  # raw estimates within float dust of {0, 1} count as outside

METHODS = ("variogram", "spectral", "wavelet")
PERSISTENCE_BAND = 0.05


@dataclass(frozen=True)
class FitConfig:
    """Fit-window settings shared by the estimators.

    min_lag / max_lag_fraction / lags_per_octave shape the variogram's lag
    grid; spectral_low_cut positive-frequency bins are dropped from the
    bottom of the periodogram fit, which extends up to spectral_high_fraction
    of the Nyquist range (a floor of 8 bins is kept so short series still
    have something to fit).
    """

    min_lag: int = 1
    max_lag_fraction: float = 0.25
    lags_per_octave: int = 8
    spectral_low_cut: int = 1
    spectral_high_fraction: float = 1.0 / 64.0

    def __post_init__(self) -> None:
        if self.min_lag < 1:
            raise ValueError("min_lag must be at least 1")
        if not (0.0 < self.max_lag_fraction <= 0.5):
            raise ValueError("max_lag_fraction must lie in (0, 0.5]")
        if self.lags_per_octave < 1:
            raise ValueError("lags_per_octave must be positive")
        if self.spectral_low_cut < 1:
            raise ValueError("spectral_low_cut must be a positive bin count")
        if not (0.0 < self.spectral_high_fraction <= 1.0):
            raise ValueError("spectral_high_fraction must lie in (0, 1]")

    def to_dict(self) -> dict:
        return {
            "min_lag": self.min_lag,
            "max_lag_fraction": self.max_lag_fraction,
            "lags_per_octave": self.lags_per_octave,
            "spectral_low_cut": self.spectral_low_cut,
            "spectral_high_fraction": self.spectral_high_fraction,
        }


@dataclass(frozen=True)
class HurstEstimate:
    method: str
    hurst: float
    dimension: float
    raw_slope: float
    intercept: float
    r_squared: float
    points_used: int
    clamped: bool

    def to_dict(self) -> dict:
        return {
            "hurst": self.hurst,
            "dimension": self.dimension,
            "raw_slope": self.raw_slope,
            "r_squared": self.r_squared,
            "points_used": self.points_used,
            "clamped": self.clamped,
        }


@dataclass(frozen=True)
class AnalysisReport:
    """One estimate per method plus their arithmetic mean (the summary row)."""

    estimates: tuple[HurstEstimate, HurstEstimate, HurstEstimate]
    mean_hurst: float
    mean_dimension: float
    persistence: str

    def estimate(self, method: str) -> HurstEstimate:
        for e in self.estimates:
            if e.method == method:
                return e
        raise KeyError(method)

    def to_dict(self) -> dict:
        out: dict = {e.method: e.to_dict() for e in self.estimates}
        out["mean_hurst"] = self.mean_hurst
        out["mean_dimension"] = self.mean_dimension
        out["persistence"] = self.persistence
        return out


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares line fit; returns (slope, intercept, r_squared)."""
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    sxx = float(np.dot(dx, dx))
    slope = float(np.dot(dx, y - ym) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    sst = float(np.dot(y - ym, y - ym))
    r2 = 1.0 - float(np.dot(resid, resid)) / sst if sst > 0 else 1.0
    return slope, intercept, float(np.clip(r2, 0.0, 1.0))


def _finish(method: str, raw_h: float, slope: float, intercept: float,
            r2: float, points: int) -> HurstEstimate:
    if not (np.isfinite(raw_h) and np.isfinite(slope) and np.isfinite(intercept)):
        raise DegenerateSignal("fit produced non-finite values")
    clamped = not (_BOUNDARY_TOL < raw_h < 1.0 - _BOUNDARY_TOL)
    h = float(np.clip(raw_h, _HURST_FLOOR, _HURST_CEIL))
    return HurstEstimate(
        method=method,
        hurst=h,
        dimension=2.0 - h,
        raw_slope=slope,
        intercept=intercept,
        r_squared=r2,
        points_used=points,
        clamped=clamped,
    )


def _checked_series(series) -> np.ndarray:
    y = np.asarray(series, dtype=np.float64)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if len(y) < _MIN_SERIES:
        raise TooShort(f"need at least {_MIN_SERIES} samples, got {len(y)}")
    return y


def variogram_hurst(series, cfg: FitConfig = FitConfig()) -> HurstEstimate:
    """Variance-of-increments estimate: log V(w) against log w, slope 2H."""
    y = _checked_series(series)
    n = len(y)
    max_lag = max(cfg.min_lag, int(cfg.max_lag_fraction * n))
    n_steps = int(np.ceil(np.log2(max_lag / cfg.min_lag) * cfg.lags_per_octave)) + 1
    grid = cfg.min_lag * 2.0 ** (np.arange(max(n_steps, 1)) / cfg.lags_per_octave)
    lags = np.unique(np.round(grid).astype(int))
    lags = lags[(lags >= cfg.min_lag) & (lags <= max_lag)]
    if len(lags) < 2:
        raise TooShort("lag grid has fewer than two points")
    v = np.array([np.mean((y[w:] - y[:-w]) ** 2) for w in lags])
    if np.any(v == 0):
        raise DegenerateSignal("variance of increments vanishes at some lag (constant input?)")
    slope, intercept, r2 = _ols(np.log(lags.astype(np.float64)), np.log(v))
    return _finish("variogram", slope / 2.0, slope, intercept, r2, len(lags))


def linear_detrend(series) -> np.ndarray:
    """Subtract the least-squares line over the sample index."""
    y = np.asarray(series, dtype=np.float64)
    if len(y) < 2:
        raise TooShort("detrend needs at least 2 samples")
    t = np.arange(len(y), dtype=np.float64)
    slope, intercept, _ = _ols(t, y)
    return y - (slope * t + intercept)


def spectral_hurst(series, cfg: FitConfig = FitConfig()) -> HurstEstimate:
    """Power-spectral estimate: detrend, periodogram, log-log slope -(2H+1)."""
    y = _checked_series(series)
    n = len(y)
    resid = linear_detrend(y)
    if np.max(np.abs(resid)) == 0.0:
        raise DegenerateSignal("series is constant after detrending")
    power = np.abs(np.fft.rfft(resid)) ** 2 / n
    nyquist_bins = n // 2
    lo = cfg.spectral_low_cut + 1
    hi = min(nyquist_bins, max(int(cfg.spectral_high_fraction * nyquist_bins), lo + 7))
    if hi < lo + 1:
        raise TooShort("spectral fit window has fewer than two bins")
    bins = np.arange(lo, hi + 1)
    pw = power[bins]
    nonzero = pw > 0
    if nonzero.sum() < 2:
        raise DegenerateSignal("spectral fit window has no usable power")
    bins, pw = bins[nonzero], pw[nonzero]
    freqs = bins.astype(np.float64) / n  # cycles per sample
    slope, intercept, r2 = _ols(np.log(freqs), np.log(pw))
    beta = -slope
    return _finish("spectral", (beta - 1.0) / 2.0, slope, intercept, r2, len(bins))


def _haar_detail_levels(y: np.ndarray) -> list[np.ndarray]:
    """Orthonormal Haar pyramid; element j-1 holds level-j detail coefficients."""
    n = 2 ** int(np.log2(len(y)))
    approx = y[:n]
    levels = []
    while len(approx) >= 2:
        levels.append((approx[0::2] - approx[1::2]) / np.sqrt(2.0))
        approx = (approx[0::2] + approx[1::2]) / np.sqrt(2.0)
    return levels


def wavelet_hurst(series, cfg: FitConfig = FitConfig()) -> HurstEstimate:
    """Haar-detail estimate: log2 sigma_j against level j, slope H + 1/2.

    The series is truncated to the largest power of two; levels are retained
    while at least 4 detail coefficients remain (tiny-count levels only add
    fit noise). For a self-affine trace sigma_j grows like 2^{j(H + 1/2)}.
    """
    y = _checked_series(series)
    js, log_sigmas = [], []
    for j, details in enumerate(_haar_detail_levels(y), start=1):
        if len(details) < 4:
            break
        sigma = float(np.std(details))
        if sigma == 0.0:
            raise DegenerateSignal(f"all Haar details vanish at level {j}")
        js.append(float(j))
        log_sigmas.append(np.log2(sigma))
    if len(js) < 2:
        raise TooShort("fewer than two usable wavelet levels")
    slope, intercept, r2 = _ols(np.array(js), np.array(log_sigmas))
    return _finish("wavelet", slope - 0.5, slope, intercept, r2, len(js))


def hurst_to_dimension(h: float) -> float:
    """The trace-dimension substitution D = 2 - H, exact."""
    if not (0.0 < h < 1.0):
        raise OutOfRange(f"hurst must lie in (0, 1), got {h}")
    return 2.0 - h


def classify_persistence(h: float, band: float = PERSISTENCE_BAND) -> str:
    """random within `band` of 1/2, persistent above it, antipersistent below."""
    if not (0.0 < h < 1.0):
        raise OutOfRange(f"hurst must lie in (0, 1), got {h}")
    if band < 0:
        raise OutOfRange("band must be nonnegative")
    if abs(h - 0.5) <= band:
        return "random"
    return "persistent" if h > 0.5 else "antipersistent"


def aggregate_report(estimates) -> AnalysisReport:
    """Combine one estimate per method into the summary row.

    The mean is the exact arithmetic mean of the three (clamped) exponents;
    the mean dimension is 2 minus it; persistence is classified from it.
    """
    estimates = tuple(estimates)
    if len(estimates) != 3:
        raise ValueError("expected exactly three per-method estimates")
    mean_h = (estimates[0].hurst + estimates[1].hurst + estimates[2].hurst) / 3.0
    return AnalysisReport(
        estimates=estimates,
        mean_hurst=mean_h,
        mean_dimension=2.0 - mean_h,
        persistence=classify_persistence(mean_h),
    )


def analyze_all(series, cfg: FitConfig = FitConfig()) -> AnalysisReport:
    """Run all three estimators and aggregate their mean (the summary row)."""
    y = np.asarray(series, dtype=np.float64)
    estimates = []
    for method, fn in (
        ("variogram", variogram_hurst),
        ("spectral", spectral_hurst),
        ("wavelet", wavelet_hurst),
    ):
        try:
            estimates.append(fn(y, cfg))
        except (TooShort, DegenerateSignal) as exc:
            raise type(exc)(f"{method}: {exc}") from exc
    return aggregate_report(estimates)
