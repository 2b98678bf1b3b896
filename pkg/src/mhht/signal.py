"""Multichannel signal container and the preprocessing chain.

Preprocessing mirrors a standard EEG recipe: polyphase resampling to the
target rate, zero-phase FIR low-pass, common-average re-referencing, and
slicing into fixed-length analysis segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.signal import firwin, lfilter, resample_poly

from .errors import ValidationError

__all__ = [
    "MultivariateSignal",
    "Segment",
    "common_average_reference",
    "lowpass_filter",
    "resample",
    "segment",
]


@dataclass(frozen=True)
class MultivariateSignal:
    """An n-channel, uniformly sampled real signal.

    Parameters
    ----------
    channels : sequence of str
        Channel labels, one per row of ``data``.
    data : ndarray, shape (n, T)
        Samples in channel-major order (row c is channel c).
    sample_rate_hz : float
        Sampling rate, > 0.
    """

    channels: tuple[str, ...]
    data: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(str(c) for c in self.channels))
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValidationError(f"data must be 2-D (channels x samples), got ndim={data.ndim}")
        if data.shape[0] != len(self.channels):
            raise ValidationError(
                f"{len(self.channels)} channel labels but data has {data.shape[0]} rows"
            )
        if data.shape[1] < 2:
            raise ValidationError(f"need at least 2 samples per channel, got {data.shape[1]}")
        if not np.isfinite(data).all():
            bad = np.argwhere(~np.isfinite(data))[0]
            raise ValidationError(
                f"non-finite sample at channel {self.channels[bad[0]]!r}, sample {bad[1]}"
            )
        if not (float(self.sample_rate_hz) > 0):
            raise ValidationError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_seconds(self) -> float:
        return self.n_samples / self.sample_rate_hz

    def with_data(self, data: np.ndarray) -> "MultivariateSignal":
        """Same channels and rate, new samples."""
        return MultivariateSignal(self.channels, data, self.sample_rate_hz)


@dataclass(frozen=True)
class Segment:
    """A fixed-length slice of one trial's signal."""

    trial_id: str
    start_sample: int
    data: np.ndarray  # (n, L), read-only copy
    sample_rate_hz: float

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def length_samples(self) -> int:
        return self.data.shape[1]

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    def to_signal(self, channels=None) -> MultivariateSignal:
        labels = channels if channels is not None else [f"ch{i:02d}" for i in range(self.n_channels)]
        return MultivariateSignal(labels, self.data, self.sample_rate_hz)


def common_average_reference(x: MultivariateSignal) -> MultivariateSignal:
    """Subtract the per-sample mean over channels (global average reference).

    Idempotent: re-referencing an already referenced signal is a no-op up to
    rounding. Requires at least two channels.
    """
    if x.n_channels < 2:
        raise ValidationError("common average reference needs at least 2 channels")
    referenced = x.data - x.data.mean(axis=0, keepdims=True)
    return x.with_data(referenced)


def _lowpass_taps(cutoff_hz: float, rate_hz: float) -> np.ndarray:
    # Hamming-windowed sinc; tap count sized so the transition band fits inside
    # [0.8*cutoff, 1.2*cutoff] with >= 40 dB stopband and < 0.5 dB passband ripple.
    transition = 0.4 * cutoff_hz / rate_hz
    numtaps = int(math.ceil(3.6 / transition))
    if numtaps % 2 == 0:
        numtaps += 1
    return firwin(numtaps, cutoff_hz, window="hamming", fs=rate_hz)


def lowpass_filter(x: MultivariateSignal, cutoff_hz: float) -> MultivariateSignal:
    """Zero-phase FIR low-pass, applied per channel.

    The filter is a linear-phase windowed sinc; zero phase comes from
    filtering forward over a reflection-padded signal and discarding the
    group delay. Output length equals input length exactly.
    """
    nyquist = x.sample_rate_hz / 2.0
    if not (0 < cutoff_hz < nyquist):
        raise ValidationError(f"cutoff {cutoff_hz} Hz must lie in (0, Nyquist={nyquist} Hz)")
    taps = _lowpass_taps(cutoff_hz, x.sample_rate_hz)
    pad = len(taps)
    if x.n_samples <= pad:
        raise ValidationError(
            f"signal too short for filter: {x.n_samples} samples <= {pad} taps"
        )
    delay = (len(taps) - 1) // 2
    padded = np.pad(x.data, ((0, 0), (pad, pad)), mode="reflect")
    filtered = lfilter(taps, 1.0, padded, axis=1)
    out = filtered[:, pad + delay : pad + delay + x.n_samples]
    return x.with_data(out)


def resample(x: MultivariateSignal, target_rate_hz: float) -> MultivariateSignal:
    """Rational-ratio downsampling with polyphase anti-alias filtering.

    Upsampling is out of scope; target == source returns the signal unchanged.
    """
    if target_rate_hz <= 0:
        raise ValidationError(f"target rate must be > 0, got {target_rate_hz}")
    if target_rate_hz > x.sample_rate_hz:
        raise ValidationError(
            f"upsampling not supported: target {target_rate_hz} > source {x.sample_rate_hz}"
        )
    if target_rate_hz == x.sample_rate_hz:
        return x
    ratio = Fraction(target_rate_hz) / Fraction(x.sample_rate_hz)
    ratio = ratio.limit_denominator(10_000)
    if abs(float(ratio) - target_rate_hz / x.sample_rate_hz) > 1e-12:
        raise ValidationError(
            f"rate ratio {target_rate_hz}/{x.sample_rate_hz} is not a usable rational"
        )
    out = resample_poly(x.data, ratio.numerator, ratio.denominator, axis=1, padtype="line")
    return MultivariateSignal(x.channels, out, target_rate_hz)


def segment(x: MultivariateSignal, seconds: float, trial_id: str = "trial") -> list[Segment]:
    """Cut into consecutive non-overlapping segments of ``seconds`` duration.

    ``seconds * sample_rate_hz`` must be a whole number of samples. A trailing
    remainder shorter than one segment is discarded so every segment is
    full length.
    """
    length_f = seconds * x.sample_rate_hz
    length = round(length_f)
    if length < 1 or abs(length_f - length) > 1e-9:
        raise ValidationError(
            f"segment duration {seconds}s is not a whole number of samples at "
            f"{x.sample_rate_hz} Hz"
        )
    if length > x.n_samples:
        raise ValidationError(
            f"segment length {length} exceeds signal length {x.n_samples}"
        )
    count = x.n_samples // length
    return [
        Segment(trial_id, i * length, x.data[:, i * length : (i + 1) * length], x.sample_rate_hz)
        for i in range(count)
    ]
