"""soundset: set-algebra on audio gestures with self-affine complexity analysis.

Core layers:

    audio_io    WAV decode/encode, ASCII export
    gestures    timeline model and crisp/fuzzy set operations
    estimators  variogram / spectral / wavelet Hurst estimators, D = 2 - H
    synthesis   deterministic generators (white noise, fBm oracle, fixtures)
    recurrence  delay embedding, recurrence matrices, PGM export
    gridseq     elementary-CA trigger grid rendered onto a timeline
    service     FastAPI wrapper exposing the above
    cli         thin client over the service
"""

__version__ = "0.1.0"

from .audio_io import PcmSpec, SampleBuffer, downmix_mono, read_wav, to_ascii_text, write_wav
from .estimators import (
    AnalysisReport,
    FitConfig,
    HurstEstimate,
    aggregate_report,
    analyze_all,
    classify_persistence,
    hurst_to_dimension,
    linear_detrend,
    spectral_hurst,
    variogram_hurst,
    wavelet_hurst,
)
from .gestures import (
    AlmostDisjointVerdict,
    Gesture,
    Placement,
    SupportMask,
    Timeline,
    fuzzy_combine,
    intersect_overlay,
    is_almost_disjoint,
    negate_support,
    render_timeline,
    support_mask,
    timeline_from_doc,
    union_adjacent,
)
from .gridseq import CaRule, GridSpec, ca_evolve, ca_step, cells_to_text, column_from_text, grid_to_timeline
from .recurrence import (
    DistanceMatrix,
    EmbeddingConfig,
    RecurrenceMatrix,
    delay_embed,
    distance_matrix,
    export_image,
    pgm_bytes,
    recurrence_rate,
    threshold_recurrence,
)
from .synthesis import FbmSpec, gen_burst_fixture, gen_fbm, gen_sine, gen_white_noise

__all__ = [
    "__version__",
    "AlmostDisjointVerdict",
    "AnalysisReport",
    "CaRule",
    "DistanceMatrix",
    "EmbeddingConfig",
    "FbmSpec",
    "FitConfig",
    "Gesture",
    "GridSpec",
    "HurstEstimate",
    "PcmSpec",
    "Placement",
    "RecurrenceMatrix",
    "SampleBuffer",
    "SupportMask",
    "Timeline",
    "aggregate_report",
    "analyze_all",
    "ca_evolve",
    "ca_step",
    "cells_to_text",
    "classify_persistence",
    "column_from_text",
    "delay_embed",
    "distance_matrix",
    "downmix_mono",
    "export_image",
    "fuzzy_combine",
    "gen_burst_fixture",
    "gen_fbm",
    "gen_sine",
    "gen_white_noise",
    "grid_to_timeline",
    "hurst_to_dimension",
    "intersect_overlay",
    "is_almost_disjoint",
    "linear_detrend",
    "negate_support",
    "pgm_bytes",
    "read_wav",
    "recurrence_rate",
    "render_timeline",
    "spectral_hurst",
    "support_mask",
    "threshold_recurrence",
    "timeline_from_doc",
    "to_ascii_text",
    "union_adjacent",
    "variogram_hurst",
    "wavelet_hurst",
    "write_wav",
]
