"""3D CNN for channels x frequency x depth feature blocks.

Three convolution blocks (3x3x3 kernel, padding 1, stride 1, batch norm,
ReLU, max-pool) feeding a small fully connected head with dropout and two
output logits. Pooling uses kernel 2 with floor semantics per axis; an axis
already reduced to size 1 is carried through unpooled, so the shallow
temporal depth (e.g. 3) collapses to 1 after the first block and survives
the remaining two.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn


@dataclass(frozen=True)
class ModelSpec:
    """Architecture constants for the 3-block classifier."""

    conv_channels: tuple[int, ...] = (1, 32, 64, 128)
    kernel: int = 3
    padding: int = 1
    stride: int = 1
    pool: int = 2
    fc_hidden: int = 128
    dropout: float = 0.25
    n_classes: int = 2


def propagate_shape(spec: ModelSpec, input_shape: tuple[int, int, int]):
    """Per-block output shapes and pooling kernels for a given input.

    Convolutions preserve resolution (padding 1, stride 1); each pool divides
    an axis by 2 with floor, or leaves it alone once it reaches size 1.
    Raises ValueError if any axis would vanish.
    """
    shapes = [tuple(input_shape)]
    pools = []
    shape = tuple(input_shape)
    for level in range(len(spec.conv_channels) - 1):
        if any(s < 1 for s in shape):
            raise ValueError(
                f"input {input_shape} is incompatible with {level + 1} pooling levels: "
                f"shape reached {shape}"
            )
        kernel = tuple(spec.pool if s >= spec.pool else 1 for s in shape)
        shape = tuple(s // k for s, k in zip(shape, kernel))
        if any(s < 1 for s in shape):
            raise ValueError(
                f"input {input_shape} is incompatible with {level + 1} pooling levels"
            )
        pools.append(kernel)
        shapes.append(shape)
    return shapes, pools


class BlockCnn3d(nn.Module):
    """conv(3x3x3) -> BN -> ReLU -> pool, three times, then FC head."""

    def __init__(self, spec: ModelSpec, input_shape: tuple[int, int, int]):
        super().__init__()
        self.spec = spec
        self.input_shape = tuple(input_shape)
        shapes, pools = propagate_shape(spec, input_shape)
        self.block_shapes = shapes

        blocks = []
        channels = spec.conv_channels
        for c_in, c_out, pool in zip(channels[:-1], channels[1:], pools):
            blocks.append(
                nn.Sequential(
                    nn.Conv3d(c_in, c_out, spec.kernel, stride=spec.stride, padding=spec.padding),
                    nn.BatchNorm3d(c_out),
                    nn.ReLU(),
                    nn.MaxPool3d(pool),
                )
            )
        self.blocks = nn.ModuleList(blocks)

        flat = channels[-1] * shapes[-1][0] * shapes[-1][1] * shapes[-1][2]
        self.head = nn.Sequential(
            nn.Flatten(),
            nn.Linear(flat, spec.fc_hidden),
            nn.ReLU(),
            nn.Dropout(spec.dropout),
            nn.Linear(spec.fc_hidden, spec.n_classes),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.ndim != 5 or tuple(x.shape[2:]) != self.input_shape:
            raise ValueError(
                f"expected (batch, 1, {', '.join(map(str, self.input_shape))}), "
                f"got {tuple(x.shape)}"
            )
        for block in self.blocks:
            x = block(x)
        return self.head(x)


def build_model(spec: ModelSpec | None = None, input_shape=(32, 192, 3)) -> BlockCnn3d:
    """Construct the classifier for blocks of the given (E, W, M) shape."""
    return BlockCnn3d(spec or ModelSpec(), tuple(input_shape))


def parameter_count(spec: ModelSpec, input_shape: tuple[int, int, int]) -> int:
    """Closed-form parameter count: conv + batch-norm + FC head."""
    shapes, _ = propagate_shape(spec, input_shape)
    k3 = spec.kernel**3
    total = 0
    for c_in, c_out in zip(spec.conv_channels[:-1], spec.conv_channels[1:]):
        total += c_in * c_out * k3 + c_out  # conv weights + bias
        total += 2 * c_out  # batch-norm affine
    flat = spec.conv_channels[-1] * shapes[-1][0] * shapes[-1][1] * shapes[-1][2]
    total += flat * spec.fc_hidden + spec.fc_hidden
    total += spec.fc_hidden * spec.n_classes + spec.n_classes
    return total
