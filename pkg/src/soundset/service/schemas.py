"""Request/response models for the HTTP service.

Binary payloads (WAV, PGM) travel base64-encoded inside JSON. Reports carry
no timestamps and embed every parameter needed to reproduce the run.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..estimators import FitConfig


class FitParams(BaseModel):
    min_lag: int = Field(default=1, ge=1)
    max_lag_fraction: float = Field(default=0.25, gt=0.0, le=0.5)
    lags_per_octave: int = Field(default=8, ge=1)
    spectral_low_cut: int = Field(default=1, ge=1)
    spectral_high_fraction: float = Field(default=1.0 / 64.0, gt=0.0, le=1.0)

    def to_config(self) -> FitConfig:
        return FitConfig(
            min_lag=self.min_lag,
            max_lag_fraction=self.max_lag_fraction,
            lags_per_octave=self.lags_per_octave,
            spectral_low_cut=self.spectral_low_cut,
            spectral_high_fraction=self.spectral_high_fraction,
        )


class EstimateOut(BaseModel):
    hurst: float
    dimension: float
    raw_slope: float
    r_squared: float
    points_used: int
    clamped: bool


class AnalysisOut(BaseModel):
    variogram: EstimateOut
    spectral: EstimateOut
    wavelet: EstimateOut
    mean_hurst: float
    mean_dimension: float
    persistence: str


class RecurrenceStats(BaseModel):
    m: int
    tau: int
    epsilon: float
    achieved_rate: float


class VerdictOut(BaseModel):
    dim_a: float
    dim_b: float
    dim_intersection: float
    is_almost_disjoint: bool
    margin: float


class InputDescriptor(BaseModel):
    path: Optional[str] = None
    synth_spec: Optional[str] = None
    samples: int
    rate_hz: Optional[int] = None


class RunReport(BaseModel):
    tool_version: str
    operation: str
    input_descriptors: list[InputDescriptor]
    params: dict
    analysis: Optional[AnalysisOut] = None
    recurrence_stats: Optional[RecurrenceStats] = None
    verdict: Optional[VerdictOut] = None
    seed: Optional[int] = None


class AnalyzeRequest(BaseModel):
    wav_b64: Optional[str] = None
    ascii_text: Optional[str] = None
    path: Optional[str] = None
    fit: FitParams = FitParams()

    @model_validator(mode="after")
    def _exactly_one_input(self) -> "AnalyzeRequest":
        if (self.wav_b64 is None) == (self.ascii_text is None):
            raise ValueError("give exactly one of wav_b64 or ascii_text")
        return self


CombineOp = Literal["union", "intersect", "fuzzy-union", "fuzzy-intersect"]


class CombineRequest(BaseModel):
    op: CombineOp
    a_wav_b64: str
    b_wav_b64: str
    a_path: Optional[str] = None
    b_path: Optional[str] = None
    offset: int = 0
    analyze: bool = False
    fit: FitParams = FitParams()


class CombineResponse(BaseModel):
    report: RunReport
    wav_b64: str


class RecurrenceRequest(BaseModel):
    wav_b64: str
    path: Optional[str] = None
    dim: int = Field(default=2, ge=1)
    delay: int = Field(default=1, ge=1)
    rate: Optional[float] = None
    epsilon: Optional[float] = None
    max_points: int = Field(default=8192, ge=2)
    decimate: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _at_most_one_mode(self) -> "RecurrenceRequest":
        if self.rate is not None and self.epsilon is not None:
            raise ValueError("give at most one of rate or epsilon")
        return self


class RecurrenceResponse(BaseModel):
    report: RunReport
    pgm_b64: str


class SynthRequest(BaseModel):
    kind: Literal["fbm", "burst", "sine"]
    n: int = Field(ge=1)
    seed: int = 0
    hurst: Optional[float] = None
    decay: Optional[float] = None
    freq_hz: Optional[float] = None
    rate_hz: int = Field(default=44100, ge=1)
    amplitude: float = 0.9
    as_ascii: bool = False

    @model_validator(mode="after")
    def _kind_params(self) -> "SynthRequest":
        required = {"fbm": "hurst", "burst": "decay", "sine": "freq_hz"}[self.kind]
        if getattr(self, required) is None:
            raise ValueError(f"synth kind {self.kind!r} requires {required}")
        return self


class SynthResponse(BaseModel):
    report: RunReport
    wav_b64: Optional[str] = None
    ascii_text: Optional[str] = None


class GestureWav(BaseModel):
    id: str
    wav_b64: str
    path: Optional[str] = None


class GridRequest(BaseModel):
    rule: int = Field(ge=0, le=255)
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    step: int = Field(ge=1)
    seed_column: str
    gestures: list[GestureWav]


class GridResponse(BaseModel):
    report: RunReport
    wav_b64: str
    cells_text: str


class HealthResponse(BaseModel):
    tool_version: str


class ErrorBody(BaseModel):
    error: str
    message: str
