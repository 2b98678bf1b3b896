"""Toy-scale 3D CNN harness for feature-block datasets."""

from .data import BlockDataset, load_dataset
from .model import BlockCnn3d, ModelSpec, build_model, parameter_count, propagate_shape
from .train import TrainConfig, train_eval, trial_folds, write_report

__version__ = "0.1.0"
