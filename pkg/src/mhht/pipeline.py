"""End-to-end feature pipeline: raw signal in, feature-block dataset out.

The chain is preprocess (resample, low-pass, average reference), segment,
decompose, select IMFs, build per-segment maps, stack blocks, export.
Segments are independent, so map construction parallelizes over a process
pool; results are collected in segment order, keeping output bit-identical
for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .config import PipelineConfig
from .errors import ValidationError
from .features import FeatureMap2D, build_blocks, build_map, export_dataset, normalize_map
from .memd import ImfSet, decompose
from .signal import MultivariateSignal, Segment, common_average_reference, lowpass_filter, resample
from .signal import segment as cut_segments
from .spectrum import select_imfs

__all__ = ["preprocess", "segment_maps", "run_features"]


def preprocess(x: MultivariateSignal, cfg: PipelineConfig) -> MultivariateSignal:
    """Resample to the target rate, low-pass, and re-reference."""
    if cfg.target_rate_hz and x.sample_rate_hz != cfg.target_rate_hz:
        x = resample(x, cfg.target_rate_hz)
    if cfg.lowpass_hz:
        x = lowpass_filter(x, cfg.lowpass_hz)
    if cfg.average_reference and x.n_channels >= 2:
        x = common_average_reference(x)
    return x


def _segment_map(args) -> FeatureMap2D:
    index, seg, cfg = args
    imfset = decompose(seg.to_signal(), cfg.sift_config(), cfg.seed)
    if imfset.count == 0:
        selected = None  # flat segment: build_map returns a zero map
    else:
        selected = select_imfs(imfset, cfg.imf_threshold_hz, cfg.max_selected)
        if not selected:
            raise ValidationError(
                f"no IMFs selected in segment {index}: none exceed "
                f"{cfg.imf_threshold_hz} Hz median frequency"
            )
    fmap = build_map(
        seg, selected, cfg.spectrum_config(), imfset=imfset, segment_index=index
    )
    return normalize_map(fmap) if cfg.normalize else fmap


def segment_maps(segments: list[Segment], cfg: PipelineConfig, jobs: int = 1) -> list[FeatureMap2D]:
    """Per-segment feature maps, optionally across a process pool.

    Output order follows segment order regardless of worker count.
    """
    tasks = [(i, seg, cfg) for i, seg in enumerate(segments)]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(tasks) <= 1:
        return [_segment_map(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_segment_map, tasks))


def _trial_scope_maps(segments, cfg: PipelineConfig, trial: MultivariateSignal):
    # decompose the whole trial once, then build each segment's map from the
    # IMF slices covering that segment
    imfset = decompose(trial, cfg.sift_config(), cfg.seed)
    selected = select_imfs(imfset, cfg.imf_threshold_hz, cfg.max_selected) if imfset.count else None
    if imfset.count and not selected:
        raise ValidationError(
            f"no IMFs selected: none exceed {cfg.imf_threshold_hz} Hz median frequency"
        )
    maps = []
    for i, seg in enumerate(segments):
        window = slice(seg.start_sample, seg.start_sample + seg.length_samples)
        sliced = ImfSet(
            tuple(c[:, window] for c in imfset.imfs),
            imfset.residue[:, window],
            imfset.source_rate_hz,
        )
        fmap = build_map(seg, selected, cfg.spectrum_config(), imfset=sliced, segment_index=i)
        maps.append(normalize_map(fmap) if cfg.normalize else fmap)
    return maps


def run_features(
    x: MultivariateSignal,
    cfg: PipelineConfig,
    output_dir,
    trial_id: str = "trial",
    label=None,
    jobs: int = 1,
    excluded=None,
) -> dict:
    """Full pipeline on one trial; writes the dataset and returns its manifest."""
    x = preprocess(x, cfg)
    segments = cut_segments(x, cfg.segment_seconds, trial_id)
    if cfg.decompose_scope == "trial":
        maps = _trial_scope_maps(segments, cfg, x)
    else:
        maps = segment_maps(segments, cfg, jobs)
    blocks = build_blocks(
        maps, cfg.block_depth, trial_id=trial_id, label=label, stride=cfg.block_stride
    )
    return export_dataset(blocks, output_dir, config=cfg.to_dict(), excluded=excluded)
