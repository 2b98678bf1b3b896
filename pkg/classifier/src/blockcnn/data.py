"""Feature-block dataset loading.

Consumes the dataset directory format produced by the feature-extraction
pipeline: ``blocks/*.bin`` little-endian float32 tensors in C order over
(channel, frequency, depth), described by ``manifest.json`` entries
``{"file", "shape", "trial", "start_segment", "label"}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

CLASS_TO_INDEX = {"low": 0, "high": 1}


@dataclass(frozen=True)
class BlockDataset:
    """All blocks of one dataset with per-block trial ids and binary labels."""

    values: np.ndarray  # (N, E, W, M) float32
    labels: np.ndarray  # (N,) int64, 0 = low, 1 = high
    trials: tuple[str, ...]

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def block_shape(self) -> tuple[int, int, int]:
        return tuple(self.values.shape[1:])

    def trial_ids(self) -> list[str]:
        seen = dict.fromkeys(self.trials)
        return list(seen)

    def subset(self, trial_set) -> "BlockDataset":
        mask = np.array([t in trial_set for t in self.trials])
        return BlockDataset(
            self.values[mask],
            self.labels[mask],
            tuple(t for t, keep in zip(self.trials, mask) if keep),
        )


def _class_of(label, label_key: str | None) -> str:
    if isinstance(label, dict):
        if label_key is None:
            raise ValueError("dataset labels are per-axis dicts; pass label_key")
        if label_key not in label:
            raise ValueError(f"label {label} has no axis {label_key!r}")
        return label[label_key]
    if label is None:
        raise ValueError("block has no label; cannot train on it")
    return str(label)


def load_dataset(directory, label_key: str | None = None) -> BlockDataset:
    """Read every labelled block of a dataset directory.

    ``label_key`` picks the axis ("valence" / "arousal") when labels are
    dicts; plain string labels are used as-is. Class names must be
    "low" / "high".
    """
    directory = Path(directory)
    with open(directory / "manifest.json") as fh:
        manifest = json.load(fh)
    if not manifest["blocks"]:
        raise ValueError(f"{directory}: dataset holds no blocks")

    values, labels, trials = [], [], []
    for entry in manifest["blocks"]:
        shape = tuple(entry["shape"])
        raw = np.fromfile(directory / entry["file"], dtype="<f4")
        if raw.size != int(np.prod(shape)):
            raise ValueError(f"{entry['file']}: size does not match shape {shape}")
        cls = _class_of(entry["label"], label_key)
        if cls not in CLASS_TO_INDEX:
            raise ValueError(f"unknown class {cls!r}; expected 'low' or 'high'")
        values.append(raw.reshape(shape))
        labels.append(CLASS_TO_INDEX[cls])
        trials.append(entry["trial"])

    return BlockDataset(
        np.stack(values).astype(np.float32),
        np.array(labels, dtype=np.int64),
        tuple(trials),
    )
