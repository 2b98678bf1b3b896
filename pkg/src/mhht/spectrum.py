"""Hilbert spectral analysis of intrinsic mode functions.

The analytic signal of each IMF gives instantaneous amplitude, phase, and
frequency tracks. Depositing amplitude at the instantaneous frequency builds
the time-frequency energy distribution H(f, t); averaging it over a frame
gives the marginal spectrum, the per-frequency power of that frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .memd import ImfSet

__all__ = [
    "AnalyticTrack",
    "HilbertSpectrum",
    "MarginalSpectrum",
    "SpectrumConfig",
    "analytic_signal",
    "instantaneous_attributes",
    "hilbert_spectrum",
    "marginal_spectrum",
    "median_frequency",
    "select_imfs",
]


@dataclass(frozen=True)
class SpectrumConfig:
    """Frequency axis for Hilbert spectra: ``bins`` uniform bins over
    [freq_lo_hz, freq_hi_hz)."""

    freq_lo_hz: float = 0.0
    freq_hi_hz: float = 64.0
    bins: int = 192

    def __post_init__(self):
        if not self.freq_lo_hz < self.freq_hi_hz:
            raise ValidationError("freq_lo_hz must be < freq_hi_hz")
        if self.bins < 1:
            raise ValidationError("need at least one frequency bin")

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.freq_lo_hz, self.freq_hi_hz, self.bins + 1)


@dataclass(frozen=True)
class AnalyticTrack:
    """Instantaneous amplitude, unwrapped phase, and frequency of one component.

    ``clamped`` counts samples whose instantaneous frequency came out negative
    (a symptom of an imperfect IMF) and was clamped to zero.
    """

    amplitude: np.ndarray  # (T,), >= 0
    phase: np.ndarray  # (T,), radians, unwrapped
    inst_freq_hz: np.ndarray  # (T,), >= 0
    clamped: int = 0

    def __post_init__(self):
        for name in ("amplitude", "phase", "inst_freq_hz"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if not (self.amplitude.shape == self.phase.shape == self.inst_freq_hz.shape):
            raise ValidationError("track components must share one shape")

    def __len__(self) -> int:
        return self.amplitude.size


@dataclass(frozen=True)
class HilbertSpectrum:
    """Binned time-frequency energy H[w, t]: amplitude mass per frequency bin."""

    freq_edges: np.ndarray  # (W + 1,)
    energy: np.ndarray  # (W, T), >= 0

    def __post_init__(self):
        object.__setattr__(self, "freq_edges", np.asarray(self.freq_edges, dtype=np.float64))
        object.__setattr__(self, "energy", np.asarray(self.energy, dtype=np.float64))
        if self.energy.ndim != 2 or self.freq_edges.size != self.energy.shape[0] + 1:
            raise ValidationError("energy must be (W, T) with W+1 frequency edges")

    @property
    def bins(self) -> int:
        return self.energy.shape[0]

    @property
    def time_bins(self) -> int:
        return self.energy.shape[1]


@dataclass(frozen=True)
class MarginalSpectrum:
    """Time-averaged Hilbert spectrum of one frame: power per frequency bin."""

    freq_edges: np.ndarray  # (W + 1,)
    power: np.ndarray  # (W,), >= 0

    def __post_init__(self):
        object.__setattr__(self, "freq_edges", np.asarray(self.freq_edges, dtype=np.float64))
        object.__setattr__(self, "power", np.asarray(self.power, dtype=np.float64))
        if self.freq_edges.size != self.power.size + 1:
            raise ValidationError("power length must match number of bins")


def analytic_signal(c: np.ndarray) -> np.ndarray:
    """Discrete analytic signal via the frequency-domain construction.

    Negative frequencies are zeroed and positive ones doubled (DC and Nyquist
    kept as-is), so the real part of the result equals the input and the
    imaginary part is its Hilbert transform.
    """
    c = np.asarray(c, dtype=np.float64).ravel()
    T = c.size
    if T < 4:
        raise ValidationError(f"need at least 4 samples, got {T}")
    spectrum = np.fft.fft(c)
    gain = np.zeros(T)
    if T % 2 == 0:
        gain[0] = 1.0
        gain[1 : T // 2] = 2.0
        gain[T // 2] = 1.0
    else:
        gain[0] = 1.0
        gain[1 : (T + 1) // 2] = 2.0
    return np.fft.ifft(spectrum * gain)


def instantaneous_attributes(z: np.ndarray, rate_hz: float) -> AnalyticTrack:
    """Amplitude, unwrapped phase, and instantaneous frequency of an analytic signal.

    Frequency is the phase derivative (central differences inside, one-sided
    at the ends) converted to Hz. Negative frequencies are clamped to zero and
    counted in ``clamped``.
    """
    z = np.asarray(z, dtype=np.complex128).ravel()
    if rate_hz <= 0:
        raise ValidationError(f"rate must be > 0, got {rate_hz}")
    amplitude = np.abs(z)
    phase = np.unwrap(np.angle(z))
    freq = np.gradient(phase, 1.0 / rate_hz) / (2.0 * np.pi)
    clamped = int(np.count_nonzero(freq < 0))
    return AnalyticTrack(amplitude, phase, np.maximum(freq, 0.0), clamped)


def hilbert_spectrum(
    tracks, freq_range: tuple[float, float] = (0.0, 64.0), bins: int = 192
) -> HilbertSpectrum:
    """Deposit each track's amplitude at its instantaneous frequency.

    Bins are uniform over [lo, hi), left-closed; samples whose frequency
    falls outside the range are discarded. Tracks are summed in list order,
    so the spectrum of several IMFs is the sum of their individual spectra.
    """
    tracks = list(tracks)
    if not tracks:
        raise ValidationError("need at least one track")
    lo, hi = float(freq_range[0]), float(freq_range[1])
    if not lo < hi:
        raise ValidationError("freq_range must satisfy lo < hi")
    if bins < 1:
        raise ValidationError("need at least one frequency bin")
    T = len(tracks[0])
    if any(len(t) != T for t in tracks):
        raise ValidationError("all tracks must have the same length")

    energy = np.zeros((bins, T))
    for track in tracks:
        f = track.inst_freq_hz
        keep = (f >= lo) & (f < hi)
        idx = np.floor((f[keep] - lo) * bins / (hi - lo)).astype(np.intp)
        np.clip(idx, 0, bins - 1, out=idx)
        np.add.at(energy, (idx, np.flatnonzero(keep)), track.amplitude[keep])
    return HilbertSpectrum(np.linspace(lo, hi, bins + 1), energy)


def marginal_spectrum(spectrum: HilbertSpectrum) -> MarginalSpectrum:
    """Average the Hilbert spectrum over the frame: power[w] = mean_t H[w, t]."""
    return MarginalSpectrum(spectrum.freq_edges, spectrum.energy.mean(axis=1))


def median_frequency(track: AnalyticTrack) -> float:
    """Amplitude-weighted median of the instantaneous frequency.

    The smallest frequency f such that the amplitude mass at frequencies
    <= f reaches half the total. Raises on an identically zero track, where
    the median is undefined.
    """
    total = track.amplitude.sum()
    if total <= 0:
        raise ValidationError("median frequency undefined for a zero-amplitude track")
    order = np.argsort(track.inst_freq_hz, kind="stable")
    cumulative = np.cumsum(track.amplitude[order])
    k = int(np.searchsorted(cumulative, 0.5 * total, side="left"))
    return float(track.inst_freq_hz[order][min(k, len(order) - 1)])


def channel_tracks(imf: np.ndarray, rate_hz: float) -> list[AnalyticTrack]:
    """Analytic tracks of each channel of one multivariate IMF."""
    return [instantaneous_attributes(analytic_signal(row), rate_hz) for row in np.atleast_2d(imf)]


def select_imfs(imfs: ImfSet, min_median_hz: float = 4.0, max_count: int = 3) -> list[int]:
    """Pick the high-oscillation IMFs by channel-averaged median frequency.

    IMFs whose average median frequency exceeds ``min_median_hz`` are kept,
    ordered from highest to lowest median, truncated to ``max_count``.
    Channels with no amplitude are ignored; an IMF that is zero in every
    channel is never selected. May return an empty list.
    """
    if max_count < 1:
        raise ValidationError("max_count must be >= 1")
    candidates: list[tuple[float, int]] = []
    for j, imf in enumerate(imfs.imfs):
        medians = []
        for track in channel_tracks(imf, imfs.source_rate_hz):
            if track.amplitude.sum() > 0:
                medians.append(median_frequency(track))
        if medians and float(np.mean(medians)) > min_median_hz:
            candidates.append((float(np.mean(medians)), j))
    candidates.sort(key=lambda pair: (-pair[0], pair[1]))
    return [j for _, j in candidates[:max_count]]
