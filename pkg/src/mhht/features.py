"""Spatial-temporal-spectral feature assembly.

Each 1-second segment yields one channels-by-frequency map: row c is the
marginal Hilbert spectrum of channel c, computed from the per-channel parts
of the selected multivariate IMFs. Stacking the maps of consecutive segments
gives the 3-D blocks consumed by the classifier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .memd import ImfSet, SiftConfig, decompose
from .signal import Segment
from .spectrum import (
    SpectrumConfig,
    channel_tracks,
    hilbert_spectrum,
    marginal_spectrum,
)

__all__ = [
    "FeatureMap2D",
    "FeatureBlock",
    "build_map",
    "build_blocks",
    "normalize_map",
    "export_dataset",
    "load_manifest",
    "load_block",
    "assign_label",
]

_F32 = np.dtype("<f4")


@dataclass(frozen=True)
class FeatureMap2D:
    """Per-segment channels x frequency-bins map of marginal spectra."""

    values: np.ndarray  # (E, W), >= 0
    segment_index: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError("feature map must be 2-D (channels x bins)")
        if np.any(values < 0):
            raise ValidationError("feature map entries must be non-negative")
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class FeatureBlock:
    """M consecutive feature maps stacked along a depth axis: (E, W, M)."""

    values: np.ndarray
    trial_id: str
    start_segment: int
    label: dict | str | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 3:
            raise ValidationError("feature block must be 3-D (channels x bins x depth)")
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.values.shape


def build_map(
    segment: Segment,
    selected_imfs=None,
    cfg: SpectrumConfig | None = None,
    imfset: ImfSet | None = None,
    sift_cfg: SiftConfig | None = None,
    seed: int = 0,
    segment_index: int = 0,
) -> FeatureMap2D:
    """Marginal-spectrum map of one segment.

    Decomposition runs internally unless ``imfset`` is supplied. When the
    decomposition produced no IMFs (a flat segment) the map is all zeros;
    otherwise an explicit empty selection is an error.
    """
    cfg = cfg or SpectrumConfig()
    if imfset is None:
        imfset = decompose(segment.to_signal(), sift_cfg or SiftConfig(), seed)
    E = segment.n_channels
    if imfset.count == 0:
        return FeatureMap2D(np.zeros((E, cfg.bins)), segment_index)
    if selected_imfs is None:
        selected_imfs = list(range(imfset.count))
    selected_imfs = list(selected_imfs)
    if not selected_imfs:
        raise ValidationError("empty IMF selection")
    if any(j < 0 or j >= imfset.count for j in selected_imfs):
        raise ValidationError(f"IMF index out of range (set has {imfset.count})")

    rows = np.empty((E, cfg.bins))
    per_channel = [channel_tracks(imfset.imfs[j], imfset.source_rate_hz) for j in selected_imfs]
    for c in range(E):
        tracks = [tracks_j[c] for tracks_j in per_channel]
        H = hilbert_spectrum(tracks, (cfg.freq_lo_hz, cfg.freq_hi_hz), cfg.bins)
        rows[c] = marginal_spectrum(H).power
    return FeatureMap2D(rows, segment_index)


def normalize_map(fmap: FeatureMap2D) -> FeatureMap2D:
    """Min-max scale one map to [0, 1]; a constant map is left at zero offset."""
    values = fmap.values
    lo, hi = values.min(), values.max()
    if hi > lo:
        values = (values - lo) / (hi - lo)
    else:
        values = np.zeros_like(values)
    return FeatureMap2D(values, fmap.segment_index)


def build_blocks(
    maps,
    depth: int,
    trial_id: str = "trial",
    label=None,
    stride: int | None = None,
) -> list[FeatureBlock]:
    """Stack consecutive maps into depth-M blocks.

    Maps must come from a single trial in temporal order. The default stride
    equals the depth (non-overlapping windows), giving floor(count / depth)
    blocks; fewer maps than one window yields an empty list.
    """
    maps = list(maps)
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    stride = depth if stride is None else stride
    if stride < 1:
        raise ValidationError("stride must be >= 1")
    if any(m.shape != maps[0].shape for m in maps):
        raise ValidationError("all maps must share one shape")
    blocks = []
    for start in range(0, len(maps) - depth + 1, stride):
        window = maps[start : start + depth]
        values = np.stack([m.values for m in window], axis=2)
        blocks.append(FeatureBlock(values, trial_id, window[0].segment_index, label))
    return blocks


def assign_label(score: float, threshold: float = 5.0) -> str | None:
    """Binarize a 1-9 self-assessment score at the threshold.

    Returns "low" below, "high" above, and None exactly at the threshold
    (the sample is excluded and flagged in the export manifest).
    """
    if not 1.0 <= score <= 9.0:
        raise ValidationError(f"score {score} outside [1, 9]")
    if score < threshold:
        return "low"
    if score > threshold:
        return "high"
    return None


def export_dataset(blocks, directory, config: dict | None = None, excluded=None) -> dict:
    """Write blocks as raw float32 tensors plus a manifest.

    Tensor layout is C-order over (channels, frequency, depth). Blocks are
    written in deterministic (trial_id, start_segment) order; the manifest
    lists one entry per file plus the effective pipeline config and any
    excluded trials. Returns the manifest dict.
    """
    directory = Path(directory)
    blocks = sorted(blocks, key=lambda b: (b.trial_id, b.start_segment))
    shapes = {b.shape for b in blocks}
    if len(shapes) > 1:
        raise ValidationError(f"blocks disagree on shape: {sorted(shapes)}")
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "blocks").mkdir(exist_ok=True)
    entries = []
    for i, block in enumerate(blocks):
        name = f"blocks/block_{i:05d}.bin"
        block.values.astype(_F32).tofile(directory / name)
        entries.append(
            {
                "file": name,
                "shape": list(block.shape),
                "trial": block.trial_id,
                "start_segment": block.start_segment,
                "label": block.label,
            }
        )
    manifest = {
        "dtype": "<f4",
        "layout": ["channel", "frequency", "depth"],
        "blocks": entries,
        "excluded": list(excluded or []),
        "config": config or {},
    }
    with open(directory / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def load_manifest(directory) -> dict:
    directory = Path(directory)
    with open(directory / "manifest.json") as fh:
        return json.load(fh)


def load_block(directory, entry: dict) -> np.ndarray:
    """Read one manifest entry back as a float64 (E, W, M) tensor."""
    raw = np.fromfile(Path(directory) / entry["file"], dtype=_F32)
    shape = tuple(entry["shape"])
    expected = int(np.prod(shape))
    if raw.size != expected:
        raise ValidationError(f"{entry['file']}: expected {expected} values, found {raw.size}")
    return raw.reshape(shape).astype(np.float64)
