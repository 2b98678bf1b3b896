"""Multivariate empirical mode decomposition by projection-based sifting.

An n-variate signal is projected along many unit directions; the maxima of
each projection define knots for a cubic-spline envelope of the full vector
signal, and the envelopes averaged over directions give the multivariate
local mean. Repeatedly subtracting that mean isolates one scale-aligned
intrinsic mode function (IMF); subtracting each IMF in turn peels the signal
into a high-to-low frequency bank plus a residue. Because every direction
sees the same extrema timing, same-index IMFs carry the same frequency scale
in every channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .directions import DirectionSet, sample_directions
from .errors import InsufficientExtrema, ValidationError
from .signal import MultivariateSignal

__all__ = [
    "SiftConfig",
    "ImfSet",
    "project",
    "find_maxima",
    "envelope",
    "mean_envelope",
    "sift",
    "decompose",
]


@dataclass(frozen=True)
class SiftConfig:
    """Tunables for sifting and mode extraction."""

    num_directions: int = 64
    max_imfs: int = 11
    max_sift_iterations: int = 15
    sift_tolerance: float = 0.05
    min_extrema: int = 3

    def __post_init__(self):
        if self.num_directions < 1:
            raise ValidationError("num_directions must be >= 1")
        if self.max_imfs < 1:
            raise ValidationError("max_imfs must be >= 1")
        if self.max_sift_iterations < 1:
            raise ValidationError("max_sift_iterations must be >= 1")
        if self.sift_tolerance < 0:
            raise ValidationError("sift_tolerance must be >= 0")
        if self.min_extrema < 2:
            raise ValidationError("min_extrema must be >= 2 (envelope mirroring needs two knots)")


@dataclass(frozen=True)
class ImfSet:
    """Scale-aligned multivariate IMFs plus residue, ordered high-frequency first.

    The decomposition is a telescoping subtraction, so the IMFs and residue
    sum back to the source signal to near machine precision.
    """

    imfs: tuple[np.ndarray, ...]  # M arrays of shape (n, T)
    residue: np.ndarray  # (n, T)
    source_rate_hz: float
    config: SiftConfig | None = None
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "imfs", tuple(np.asarray(c, dtype=np.float64) for c in self.imfs))
        object.__setattr__(self, "residue", np.asarray(self.residue, dtype=np.float64))
        for c in self.imfs:
            if c.shape != self.residue.shape:
                raise ValidationError("all IMFs must share the residue's shape")

    @property
    def count(self) -> int:
        return len(self.imfs)

    @property
    def n_channels(self) -> int:
        return self.residue.shape[0]

    @property
    def n_samples(self) -> int:
        return self.residue.shape[1]

    def reconstruct(self) -> np.ndarray:
        """Sum of all IMFs and the residue."""
        total = self.residue.copy()
        for c in self.imfs:
            total += c
        return total


def project(x: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Scalar projection p[t] = <x[:, t], direction>."""
    x = np.asarray(x, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    if x.ndim != 2 or direction.shape != (x.shape[0],):
        raise ValidationError(
            f"direction of shape {direction.shape} does not match signal with {x.shape[0]} channels"
        )
    return direction @ x


def _maxima_indices(p: np.ndarray) -> np.ndarray:
    """Indices of strictly interior local maxima; plateaus yield their
    left-biased midpoint."""
    dy = np.diff(p)
    steps = np.flatnonzero(dy != 0)
    if steps.size < 2:
        return np.empty(0, dtype=np.intp)
    rising = dy[steps] > 0
    k = np.flatnonzero(rising[:-1] & ~rising[1:])
    starts = steps[k] + 1
    ends = steps[k + 1]
    return (starts + ends) // 2


def find_maxima(p: np.ndarray) -> list[tuple[int, float]]:
    """Locate interior local maxima of a series as (index, value) pairs.

    A flat plateau that rises on the left and falls on the right is reported
    once, at its midpoint (rounded toward the left). Boundary samples never
    qualify. Needs at least 3 samples; may return an empty list.
    """
    p = np.asarray(p, dtype=np.float64).ravel()
    if p.size < 3:
        raise ValidationError(f"need at least 3 samples to locate maxima, got {p.size}")
    idx = _maxima_indices(p)
    return [(int(i), float(p[i])) for i in idx]


def _interior_extrema_count(series: np.ndarray) -> int:
    return _maxima_indices(series).size + _maxima_indices(-series).size


def _natural_spline(knots: np.ndarray, values: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Evaluate the natural cubic spline through (knots, values) at query points.

    ``values`` is (n, m): one row of knot values per channel; all channels
    share the knots, so the tridiagonal system is solved once with n
    right-hand sides.
    """
    knots = np.asarray(knots, dtype=np.float64)
    m = knots.size
    h = np.diff(knots)
    curvature = np.zeros((values.shape[0], m))
    if m > 2:
        slopes = np.diff(values, axis=1) / h
        rhs = (slopes[:, 1:] - slopes[:, :-1]).T
        banded = np.zeros((3, m - 2))
        banded[0, 1:] = h[1:-1] / 6.0
        banded[1, :] = (h[:-1] + h[1:]) / 3.0
        banded[2, :-1] = h[1:-1] / 6.0
        curvature[:, 1:-1] = solve_banded((1, 1), banded, rhs).T
    idx = np.clip(np.searchsorted(knots, query, side="right") - 1, 0, m - 2)
    width = h[idx]
    left = (knots[idx + 1] - query) / width
    right = (query - knots[idx]) / width
    return (
        left * values[:, idx]
        + right * values[:, idx + 1]
        + ((left**3 - left) * curvature[:, idx] + (right**3 - right) * curvature[:, idx + 1])
        * width**2
        / 6.0
    )


def envelope(x: np.ndarray, maxima_times, min_extrema: int = 3) -> np.ndarray:
    """Natural cubic spline through x at the maxima times, per channel.

    The first and last two knots are mirrored about the signal edges before
    fitting, which keeps the spline from swinging wildly outside the
    outermost extrema. Raises InsufficientExtrema when fewer than
    ``min_extrema`` knots are available.
    """
    x = np.asarray(x, dtype=np.float64)
    times = np.asarray(maxima_times, dtype=np.intp).ravel()
    if times.size < max(min_extrema, 2):
        raise InsufficientExtrema(
            f"{times.size} extrema < required {max(min_extrema, 2)}"
        )
    n, T = x.shape
    last = T - 1
    knots = np.concatenate(([-times[1], -times[0]], times, [2 * last - times[-1], 2 * last - times[-2]]))
    values = x[:, times]
    values = np.concatenate((values[:, [1, 0]], values, values[:, [-1, -2]]), axis=1)
    return _natural_spline(knots, values, np.arange(T, dtype=np.float64))


def mean_envelope(x: np.ndarray, dirs: DirectionSet, min_extrema: int = 3) -> np.ndarray:
    """Average of the per-direction envelopes (the multivariate local mean).

    Directions whose projection has too few maxima are skipped; at least half
    of them must survive, otherwise InsufficientExtrema is raised. Summation
    order is fixed by the direction order, so results are reproducible.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != dirs.n:
        raise ValidationError(f"signal has {x.shape[0]} channels, directions expect {dirs.n}")
    total = np.zeros_like(x)
    valid = 0
    projections = dirs.vectors @ x
    for p in projections:
        times = _maxima_indices(p)
        if times.size < min_extrema:
            continue
        total += envelope(x, times, min_extrema)
        valid += 1
    if valid < dirs.count / 2:
        raise InsufficientExtrema(
            f"only {valid} of {dirs.count} directions had >= {min_extrema} maxima"
        )
    return total / valid


def sift(x: np.ndarray, dirs: DirectionSet, cfg: SiftConfig) -> np.ndarray:
    """Extract one multivariate IMF by repeated local-mean subtraction.

    Each pass subtracts the mean envelope from the running detail; sifting
    stops when the subtracted mean is small relative to the detail
    (||m|| / ||d|| < sift_tolerance) or the iteration cap is reached. Raises
    InsufficientExtrema if the very first envelope cannot be built.
    """
    d = np.array(x, dtype=np.float64)
    for iteration in range(cfg.max_sift_iterations):
        try:
            m = mean_envelope(d, dirs, cfg.min_extrema)
        except InsufficientExtrema:
            if iteration == 0:
                raise
            break  # detail ran out of extrema mid-sift: it is as sifted as it gets
        ratio = np.linalg.norm(m) / max(np.linalg.norm(d), np.finfo(float).tiny)
        d -= m
        if ratio < cfg.sift_tolerance:
            break
    return d


def decompose(
    x: MultivariateSignal, cfg: SiftConfig | None = None, seed: int = 0
) -> ImfSet:
    """Full MEMD: peel IMFs off the signal until the residue is featureless.

    Extraction stops at ``max_imfs``, when every channel of the residue is
    monotone (no interior extrema), when projections no longer carry enough
    extrema to envelope, or when the residue amplitude is negligible. The
    returned set reconstructs the input by construction.
    """
    cfg = cfg or SiftConfig()
    n, T = x.data.shape
    if T < 4 * cfg.min_extrema:
        raise ValidationError(
            f"signal of {T} samples too short to sift (need >= {4 * cfg.min_extrema})"
        )
    # the 0-sphere has exactly two directions; higher n uses the configured count
    v_count = min(cfg.num_directions, 2) if n == 1 else cfg.num_directions
    if v_count < n:
        raise ValidationError(
            f"num_directions={cfg.num_directions} must be >= number of channels ({n})"
        )
    dirs = sample_directions(n, v_count, seed)

    floor = 1e-10 * max(np.abs(x.data).max(), np.finfo(float).tiny)
    residue = x.data.copy()
    imfs: list[np.ndarray] = []
    while len(imfs) < cfg.max_imfs:
        if np.abs(residue).max() < floor:
            break
        if all(_interior_extrema_count(residue[c]) == 0 for c in range(n)):
            break
        try:
            imf = sift(residue, dirs, cfg)
        except InsufficientExtrema:
            break
        imfs.append(imf)
        residue = residue - imf
    return ImfSet(tuple(imfs), residue, x.sample_rate_hz, config=cfg, seed=seed)
