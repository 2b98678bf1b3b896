"""Quasi-uniform direction vectors on the unit hypersphere.

Projection-based multivariate sifting needs a set of directions that covers
the sphere evenly; a Hammersley point set pushed through the inverse normal
CDF and normalized gives low-discrepancy coverage in any dimension. A seeded
random rotation decorrelates the set from the coordinate axes without
disturbing its uniformity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import ValidationError

__all__ = ["DirectionSet", "sample_directions"]


@dataclass(frozen=True)
class DirectionSet:
    """V unit vectors in R^n used for signal projection."""

    n: int
    vectors: np.ndarray  # (V, n), rows unit norm

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[1] != self.n:
            raise ValidationError(f"vectors must have shape (V, {self.n})")
        if vectors.shape[0] < self.n:
            raise ValidationError(
                f"need at least n={self.n} directions for a well-posed envelope mean"
            )
        norms = np.linalg.norm(vectors, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValidationError("direction vectors must have unit norm (1e-12)")
        if len({tuple(v) for v in vectors}) != len(vectors):
            raise ValidationError("direction vectors must be pairwise distinct")
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]


def _primes(count: int) -> list[int]:
    out, k = [], 2
    while len(out) < count:
        if all(k % p for p in out):
            out.append(k)
        k += 1
    return out


def _van_der_corput(indices: np.ndarray, base: int) -> np.ndarray:
    """Radical-inverse of each index in the given base, in (0, 1)."""
    seq = np.zeros(len(indices), dtype=np.float64)
    denom = float(base)
    rem = indices.copy()
    while rem.any():
        seq += (rem % base) / denom
        rem //= base
        denom *= base
    return seq


def _hammersley(count: int, dims: int) -> np.ndarray:
    """Hammersley set in (0, 1)^dims: one linear axis, the rest radical inverses."""
    idx = np.arange(1, count + 1)
    points = np.empty((count, dims))
    points[:, 0] = (idx - 0.5) / count
    for d, base in enumerate(_primes(dims - 1), start=1):
        points[:, d] = _van_der_corput(idx, base)
    return points


def _rotation(n: int, seed: int) -> np.ndarray:
    # Haar-distributed orthogonal matrix via QR of a seeded Gaussian draw.
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def sample_directions(n: int, count: int, seed: int = 0) -> DirectionSet:
    """Generate ``count`` quasi-uniform unit vectors in R^n.

    Deterministic for fixed (n, count, seed). ``count`` must be at least n.
    n = 1 is the 0-sphere {+1, -1}, so at most two directions exist there;
    n = 2 places the vectors at evenly spaced angles before rotation.
    """
    if n < 1:
        raise ValidationError(f"dimension must be >= 1, got {n}")
    if count < n:
        raise ValidationError(f"need at least n={n} directions, got {count}")

    if n == 1:
        if count > 2:
            raise ValidationError("the 0-sphere has only two distinct directions")
        return DirectionSet(1, np.array([[1.0], [-1.0]][:count]))

    if n == 2:
        theta = 2.0 * np.pi * (np.arange(count) + 0.5) / count
        vectors = np.column_stack([np.cos(theta), np.sin(theta)])
    else:
        gaussian = norm.ppf(_hammersley(count, n))
        vectors = gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True)

    vectors = vectors @ _rotation(n, seed).T
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    return DirectionSet(n, vectors)
