"""Multivariate Hilbert-Huang toolkit.

Decomposes multichannel time series into scale-aligned intrinsic mode
functions (projection-based multivariate EMD), computes Hilbert and marginal
Hilbert spectra, and assembles channels x frequency x time feature blocks
for downstream classifiers.
"""

from .config import PipelineConfig
from .directions import DirectionSet, sample_directions
from .errors import InsufficientExtrema, ValidationError
from .features import (
    FeatureBlock,
    FeatureMap2D,
    assign_label,
    build_blocks,
    build_map,
    export_dataset,
    load_block,
    load_manifest,
    normalize_map,
)
from .io import (
    export_hilbert_spectrum,
    export_marginal_csv,
    load_imfset,
    load_signal,
    save_imfset,
    save_signal,
)
from .memd import (
    ImfSet,
    SiftConfig,
    decompose,
    envelope,
    find_maxima,
    mean_envelope,
    project,
    sift,
)
from .pipeline import preprocess, run_features, segment_maps
from .signal import (
    MultivariateSignal,
    Segment,
    common_average_reference,
    lowpass_filter,
    resample,
    segment,
)
from .spectrum import (
    AnalyticTrack,
    HilbertSpectrum,
    MarginalSpectrum,
    SpectrumConfig,
    analytic_signal,
    hilbert_spectrum,
    instantaneous_attributes,
    marginal_spectrum,
    median_frequency,
    select_imfs,
)
from .synth import (
    ToneSpec,
    format_report,
    mode_separation_score,
    run_verification,
    synth_multitone,
    tone_component,
)

__version__ = "0.1.0"
