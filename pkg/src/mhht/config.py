"""Declarative pipeline configuration.

One flat key-value schema drives every stage; a config round-trips through
JSON losslessly, and the effective config is echoed into every output
manifest so results are reproducible from their artifacts alone.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .errors import ValidationError
from .memd import SiftConfig
from .spectrum import SpectrumConfig

__all__ = ["PipelineConfig"]


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the feature pipeline, with the paper-scale defaults."""

    # preprocessing
    target_rate_hz: float = 128.0
    lowpass_hz: float = 45.0
    average_reference: bool = True
    segment_seconds: float = 1.0
    # decomposition
    num_directions: int = 64
    max_imfs: int = 11
    max_sift_iterations: int = 15
    sift_tolerance: float = 0.05
    min_extrema: int = 3
    decompose_scope: str = "segment"  # "segment" or "trial"
    # spectra
    freq_lo_hz: float = 0.0
    freq_hi_hz: float = 64.0
    freq_bins: int = 192
    # IMF selection
    imf_threshold_hz: float = 4.0
    max_selected: int = 3
    # blocks
    block_depth: int = 3
    block_stride: int | None = None  # None = non-overlapping
    normalize: bool = True
    label_threshold: float = 5.0
    # verification thresholds
    verify_recon_tol: float = 1e-9
    verify_min_correlation: float = 0.95
    verify_freq_tol: float = 0.01
    verify_mhs_tol: float = 0.05
    # reproducibility
    seed: int = 0

    def __post_init__(self):
        if self.decompose_scope not in ("segment", "trial"):
            raise ValidationError(
                f"decompose_scope must be 'segment' or 'trial', got {self.decompose_scope!r}"
            )

    def sift_config(self) -> SiftConfig:
        return SiftConfig(
            num_directions=self.num_directions,
            max_imfs=self.max_imfs,
            max_sift_iterations=self.max_sift_iterations,
            sift_tolerance=self.sift_tolerance,
            min_extrema=self.min_extrema,
        )

    def spectrum_config(self) -> SpectrumConfig:
        return SpectrumConfig(
            freq_lo_hz=self.freq_lo_hz, freq_hi_hz=self.freq_hi_hz, bins=self.freq_bins
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    def to_json_file(self, path) -> Path:
        path = Path(path)
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path

    @classmethod
    def from_json_file(cls, path) -> "PipelineConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def replace(self, **overrides) -> "PipelineConfig":
        merged = self.to_dict()
        merged.update(overrides)
        return self.from_dict(merged)
