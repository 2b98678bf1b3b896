"""Trial-level k-fold training of the block classifier.

Folds are cut at trial granularity so that no trial contributes blocks to
both sides of a split; trials are stratified by class across folds. Training
uses Adam with cross-entropy on two logits and is deterministic per seed on
a fixed backend.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn
from torch.utils.data import DataLoader, TensorDataset

from .data import BlockDataset, load_dataset
from .model import ModelSpec, build_model

__all__ = ["TrainConfig", "trial_folds", "train_eval", "write_report"]


@dataclass(frozen=True)
class TrainConfig:
    """Protocol constants; epochs defaults to a desk-scale 20 (200 upstream)."""

    learning_rate: float = 1e-4
    batch_size: int = 32
    epochs: int = 20
    folds: int = 5
    fc_hidden: int = 128
    dropout: float = 0.25


def trial_folds(dataset: BlockDataset, folds: int, seed: int) -> list[list[str]]:
    """Assign trials to folds, stratified by trial class, shuffled per seed."""
    trial_label = {}
    for trial, label in zip(dataset.trials, dataset.labels):
        trial_label.setdefault(trial, int(label))
    rng = np.random.default_rng(seed)
    assignment: list[list[str]] = [[] for _ in range(folds)]
    for cls in sorted(set(trial_label.values())):
        members = sorted(t for t, c in trial_label.items() if c == cls)
        rng.shuffle(members)
        for i, trial in enumerate(members):
            assignment[i % folds].append(trial)
    return assignment


def _accuracy(model: nn.Module, loader: DataLoader, device) -> float:
    model.eval()
    hits = total = 0
    with torch.no_grad():
        for x, y in loader:
            logits = model(x.to(device))
            hits += int((logits.argmax(dim=1).cpu() == y).sum())
            total += len(y)
    return hits / total


def _confusion(model: nn.Module, loader: DataLoader, device) -> np.ndarray:
    model.eval()
    counts = np.zeros((2, 2), dtype=int)
    with torch.no_grad():
        for x, y in loader:
            pred = model(x.to(device)).argmax(dim=1).cpu().numpy()
            for truth, guess in zip(y.numpy(), pred):
                counts[truth, guess] += 1
    return counts


def _loader(subset: BlockDataset, batch_size: int, shuffle: bool, seed: int) -> DataLoader:
    tensors = TensorDataset(
        torch.from_numpy(subset.values).unsqueeze(1),  # (N, 1, E, W, M)
        torch.from_numpy(subset.labels),
    )
    generator = torch.Generator().manual_seed(seed) if shuffle else None
    return DataLoader(tensors, batch_size=batch_size, shuffle=shuffle, generator=generator)


def train_eval(
    dataset_dir,
    cfg: TrainConfig | None = None,
    seed: int = 0,
    label_key: str | None = None,
    output_dir=None,
) -> dict:
    """K-fold cross-validated training on an exported block dataset.

    Returns a report with per-fold train/test accuracy and the mean/std over
    folds; folds missing a class on either side are skipped with a warning.
    When ``output_dir`` is given, the report JSON and per-fold confusion
    matrices (CSV) are written there.
    """
    cfg = cfg or TrainConfig()
    dataset = load_dataset(dataset_dir, label_key=label_key)
    if len(set(dataset.labels.tolist())) < 2:
        raise ValueError("training needs both classes present in the dataset")
    device = torch.device("cpu")

    folds = trial_folds(dataset, cfg.folds, seed)
    spec = ModelSpec(fc_hidden=cfg.fc_hidden, dropout=cfg.dropout)
    fold_reports = []
    confusions = []
    for k, test_trials in enumerate(folds):
        train_trials = [t for j, fold in enumerate(folds) if j != k for t in fold]
        train_set = dataset.subset(set(train_trials))
        test_set = dataset.subset(set(test_trials))
        if (
            len(test_set) == 0
            or len(set(train_set.labels.tolist())) < 2
            or len(set(test_set.labels.tolist())) < 2
        ):
            warnings.warn(f"fold {k}: a class is absent, skipping")
            fold_reports.append({"fold": k, "skipped": True})
            continue

        torch.manual_seed(seed + k)
        model = build_model(spec, dataset.block_shape).to(device)
        optimizer = torch.optim.Adam(model.parameters(), lr=cfg.learning_rate)
        loss_fn = nn.CrossEntropyLoss()
        train_loader = _loader(train_set, cfg.batch_size, shuffle=True, seed=seed + k)

        for _ in range(cfg.epochs):
            model.train()
            for x, y in train_loader:
                optimizer.zero_grad()
                loss = loss_fn(model(x.to(device)), y.to(device))
                loss.backward()
                optimizer.step()

        eval_train = _loader(train_set, cfg.batch_size, shuffle=False, seed=0)
        eval_test = _loader(test_set, cfg.batch_size, shuffle=False, seed=0)
        fold_reports.append(
            {
                "fold": k,
                "skipped": False,
                "train_trials": sorted(set(train_trials)),
                "test_trials": sorted(set(test_trials)),
                "train_accuracy": _accuracy(model, eval_train, device),
                "test_accuracy": _accuracy(model, eval_test, device),
            }
        )
        confusions.append((k, _confusion(model, eval_test, device)))

    scored = [f for f in fold_reports if not f["skipped"]]
    test_acc = [f["test_accuracy"] for f in scored]
    train_acc = [f["train_accuracy"] for f in scored]
    report = {
        "config": asdict(cfg),
        "seed": seed,
        "label_key": label_key,
        "block_shape": list(dataset.block_shape),
        "n_blocks": len(dataset),
        "n_trials": len(dataset.trial_ids()),
        "folds": fold_reports,
        "mean_train_accuracy": float(np.mean(train_acc)) if train_acc else None,
        "mean_test_accuracy": float(np.mean(test_acc)) if test_acc else None,
        "std_test_accuracy": float(np.std(test_acc)) if test_acc else None,
    }
    if output_dir is not None:
        write_report(report, confusions, output_dir)
    return report


def write_report(report: dict, confusions, output_dir) -> Path:
    """Write metrics JSON plus one confusion-matrix CSV per fold."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    with open(output_dir / "metrics.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for k, counts in confusions:
        with open(output_dir / f"confusion_fold{k}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["", "pred_low", "pred_high"])
            writer.writerow(["true_low", counts[0, 0], counts[0, 1]])
            writer.writerow(["true_high", counts[1, 0], counts[1, 1]])
    return output_dir
