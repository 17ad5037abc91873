"""FastAPI application wrapping the core package.

Every endpoint is a stateless transform: decode the request payload, run the
pure core functions, assemble a reproducible RunReport. Data-level failures
(SoundsetError) map to HTTP 400 with {"error", "message"}; schema violations
stay FastAPI's native 422.
"""
from __future__ import annotations

import base64
import binascii

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..audio_io import PcmSpec, SampleBuffer, downmix_mono, read_wav, to_ascii_text, write_wav
from ..errors import MalformedContainer, OutOfRange, SoundsetError
from ..estimators import AnalysisReport, analyze_all
from ..gestures import (
    Gesture,
    fuzzy_combine,
    intersect_overlay,
    is_almost_disjoint,
    render_timeline,
    union_adjacent,
)
from ..gridseq import CaRule, GridSpec, ca_evolve, cells_to_text, column_from_text, grid_to_timeline
from ..recurrence import (
    EmbeddingConfig,
    delay_embed,
    distance_matrix,
    pgm_bytes,
    recurrence_rate,
    threshold_recurrence,
)
from ..synthesis import FbmSpec, gen_burst_fixture, gen_fbm, gen_sine
from . import schemas


def _b64_decode(payload: str, what: str) -> bytes:
    try:
        return base64.b64decode(payload, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise MalformedContainer(f"{what} is not valid base64: {exc}") from exc


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _decode_mono(wav_b64: str, what: str) -> SampleBuffer:
    return downmix_mono(read_wav(_b64_decode(wav_b64, what)))


def _ascii_series(text: str) -> np.ndarray:
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            value = float(line)
        except ValueError as exc:
            raise MalformedContainer(f"ascii input line {lineno}: {line!r} is not a number") from exc
        if not np.isfinite(value):
            raise MalformedContainer(f"ascii input line {lineno}: {line!r} is not finite")
        values.append(value)
    return np.array(values, dtype=np.float64)


def _analysis_out(report: AnalysisReport) -> schemas.AnalysisOut:
    by_method = {e.method: schemas.EstimateOut(**e.to_dict()) for e in report.estimates}
    return schemas.AnalysisOut(
        variogram=by_method["variogram"],
        spectral=by_method["spectral"],
        wavelet=by_method["wavelet"],
        mean_hurst=report.mean_hurst,
        mean_dimension=report.mean_dimension,
        persistence=report.persistence,
    )


def _wav_b64(samples: np.ndarray, rate_hz: int) -> str:
    buf = SampleBuffer.mono(samples, rate_hz)
    return _b64(write_wav(buf, PcmSpec(bit_depth=16, rate_hz=rate_hz, channels=1)))


def create_app() -> FastAPI:
    app = FastAPI(title="soundset", version=__version__)

    @app.exception_handler(SoundsetError)
    async def _data_error(_request, exc: SoundsetError):
        body = schemas.ErrorBody(error=type(exc).__name__, message=str(exc))
        return JSONResponse(status_code=400, content=body.model_dump())

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(tool_version=__version__)

    @app.post("/analyze", response_model=schemas.RunReport, response_model_exclude_none=True)
    def analyze(req: schemas.AnalyzeRequest) -> schemas.RunReport:
        if req.wav_b64 is not None:
            buf = _decode_mono(req.wav_b64, "wav_b64")
            series = buf.mono_samples
            descriptor = schemas.InputDescriptor(
                path=req.path, samples=len(series), rate_hz=buf.rate_hz
            )
        else:
            series = _ascii_series(req.ascii_text)
            descriptor = schemas.InputDescriptor(path=req.path, samples=len(series))
        report = analyze_all(series, req.fit.to_config())
        return schemas.RunReport(
            tool_version=__version__,
            operation="analyze",
            input_descriptors=[descriptor],
            params={"fit": req.fit.model_dump()},
            analysis=_analysis_out(report),
        )

    @app.post("/combine", response_model=schemas.CombineResponse, response_model_exclude_none=True)
    def combine(req: schemas.CombineRequest) -> schemas.CombineResponse:
        buf_a = _decode_mono(req.a_wav_b64, "a_wav_b64")
        buf_b = _decode_mono(req.b_wav_b64, "b_wav_b64")
        a = Gesture(id="a", buffer=buf_a)
        b = Gesture(id="b", buffer=buf_b)
        if req.op == "union":
            combined = union_adjacent(a, b)
        elif req.op == "intersect":
            combined = intersect_overlay(a, b, offset=req.offset)
        elif req.op == "fuzzy-union":
            combined = fuzzy_combine(a, b, "union")
        else:
            combined = fuzzy_combine(a, b, "intersect")

        analysis = None
        verdict = None
        if req.analyze:
            cfg = req.fit.to_config()
            result = analyze_all(combined.mono_samples, cfg)
            analysis = _analysis_out(result)
            if req.op == "intersect":
                dim_a = analyze_all(buf_a.mono_samples, cfg).mean_dimension
                dim_b = analyze_all(buf_b.mono_samples, cfg).mean_dimension
                v = is_almost_disjoint(dim_a, dim_b, result.mean_dimension)
                verdict = schemas.VerdictOut(**v.to_dict())

        params: dict = {"op": req.op, "offset": req.offset, "analyze": req.analyze}
        if req.analyze:
            params["fit"] = req.fit.model_dump()
        report = schemas.RunReport(
            tool_version=__version__,
            operation=req.op,
            input_descriptors=[
                schemas.InputDescriptor(path=req.a_path, samples=buf_a.n_samples, rate_hz=buf_a.rate_hz),
                schemas.InputDescriptor(path=req.b_path, samples=buf_b.n_samples, rate_hz=buf_b.rate_hz),
            ],
            params=params,
            analysis=analysis,
            verdict=verdict,
        )
        return schemas.CombineResponse(
            report=report, wav_b64=_wav_b64(combined.mono_samples, combined.rate_hz)
        )

    @app.post("/recurrence", response_model=schemas.RecurrenceResponse, response_model_exclude_none=True)
    def recurrence(req: schemas.RecurrenceRequest) -> schemas.RecurrenceResponse:
        buf = _decode_mono(req.wav_b64, "wav_b64")
        series = buf.mono_samples[::req.decimate]
        vectors = delay_embed(series, EmbeddingConfig(dimension=req.dim, delay=req.delay))
        d = distance_matrix(vectors, max_points=req.max_points)
        if req.epsilon is not None:
            r = threshold_recurrence(d, epsilon=req.epsilon)
            mode = {"epsilon": req.epsilon}
        else:
            rate = 0.1 if req.rate is None else req.rate
            r = threshold_recurrence(d, rate=rate)
            mode = {"rate": rate}
        stats = schemas.RecurrenceStats(
            m=req.dim, tau=req.delay, epsilon=r.epsilon, achieved_rate=recurrence_rate(r)
        )
        report = schemas.RunReport(
            tool_version=__version__,
            operation="recurrence",
            input_descriptors=[
                schemas.InputDescriptor(path=req.path, samples=buf.n_samples, rate_hz=buf.rate_hz)
            ],
            params={
                "dim": req.dim,
                "delay": req.delay,
                "threshold": mode,
                "max_points": req.max_points,
                "decimate": req.decimate,
            },
            recurrence_stats=stats,
        )
        return schemas.RecurrenceResponse(report=report, pgm_b64=_b64(pgm_bytes(r)))

    @app.post("/synth", response_model=schemas.SynthResponse, response_model_exclude_none=True)
    def synth(req: schemas.SynthRequest) -> schemas.SynthResponse:
        seed: int | None = req.seed
        if req.kind == "fbm":
            path = gen_fbm(FbmSpec(hurst=req.hurst, length=req.n, seed=req.seed))
            peak = np.max(np.abs(path))
            samples = 0.9 * path / peak if peak > 0 else path
            spec_str = f"fbm(hurst={req.hurst:g},n={req.n},seed={req.seed})"
        elif req.kind == "burst":
            gesture = gen_burst_fixture(req.n, req.seed, req.decay, rate_hz=req.rate_hz)
            samples = gesture.buffer.mono_samples
            spec_str = f"burst(n={req.n},seed={req.seed},decay={req.decay:g})"
        else:
            samples = gen_sine(req.freq_hz, req.n, req.rate_hz, req.amplitude)
            spec_str = f"sine(freq_hz={req.freq_hz:g},n={req.n},rate_hz={req.rate_hz})"
            seed = None

        report = schemas.RunReport(
            tool_version=__version__,
            operation=f"synth-{req.kind}",
            input_descriptors=[
                schemas.InputDescriptor(synth_spec=spec_str, samples=len(samples), rate_hz=req.rate_hz)
            ],
            params=req.model_dump(exclude_none=True),
            seed=seed,
        )
        buf = SampleBuffer.mono(samples, req.rate_hz)
        if req.as_ascii:
            return schemas.SynthResponse(report=report, ascii_text=to_ascii_text(buf))
        return schemas.SynthResponse(report=report, wav_b64=_wav_b64(samples, req.rate_hz))

    @app.post("/grid", response_model=schemas.GridResponse, response_model_exclude_none=True)
    def grid(req: schemas.GridRequest) -> schemas.GridResponse:
        if req.rows > len(req.gestures):
            raise OutOfRange(
                f"grid needs {req.rows} row gestures, document supplies {len(req.gestures)}"
            )
        seed_col = column_from_text(req.seed_column)
        if len(seed_col) != req.rows:
            raise OutOfRange(f"seed column length {len(seed_col)} != rows {req.rows}")

        table = {}
        descriptors = []
        for entry in req.gestures:
            buf = _decode_mono(entry.wav_b64, f"gesture {entry.id!r}")
            table[entry.id] = Gesture(id=entry.id, buffer=buf)
            descriptors.append(
                schemas.InputDescriptor(path=entry.path, samples=buf.n_samples, rate_hz=buf.rate_hz)
            )
        row_ids = tuple(entry.id for entry in req.gestures[:req.rows])

        cells = ca_evolve(seed_col, CaRule(req.rule), req.cols)
        spec = GridSpec(row_gestures=row_ids, n_cols=req.cols, step=req.step, cells=cells)
        timeline = grid_to_timeline(spec, table)
        rendered = render_timeline(timeline)

        report = schemas.RunReport(
            tool_version=__version__,
            operation="grid",
            input_descriptors=descriptors,
            params={
                "rule": req.rule,
                "rows": req.rows,
                "cols": req.cols,
                "step": req.step,
                "seed_column": req.seed_column,
            },
        )
        return schemas.GridResponse(
            report=report,
            wav_b64=_wav_b64(rendered.mono_samples, rendered.rate_hz),
            cells_text=cells_to_text(cells),
        )

    return app
