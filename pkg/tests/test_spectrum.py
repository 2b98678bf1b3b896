import numpy as np
import pytest
from scipy.signal import hilbert as scipy_hilbert

from mhht import (
    AnalyticTrack,
    SiftConfig,
    ToneSpec,
    ValidationError,
    analytic_signal,
    decompose,
    hilbert_spectrum,
    instantaneous_attributes,
    marginal_spectrum,
    median_frequency,
    select_imfs,
    synth_multitone,
)
from mhht.spectrum import HilbertSpectrum

from helpers import tone


# ---------------------------------------------------------------- oracles

def pv_convolution_analytic(x):
    """O(T^2) analytic signal: circular convolution with the closed-form
    discrete principal-value kernel (cot/tan form, by series summation)."""
    x = np.asarray(x, dtype=float)
    N = len(x)
    m = np.arange(N)
    g = np.zeros(N)
    if N % 2 == 0:
        odd = m % 2 == 1
        g[odd] = 2.0 / N / np.tan(np.pi * m[odd] / N)
    else:
        odd = m % 2 == 1
        even = (m % 2 == 0) & (m > 0)
        g[odd] = 1.0 / N / np.tan(np.pi * m[odd] / (2 * N))
        g[even] = -1.0 / N * np.tan(np.pi * m[even] / (2 * N))
    imag = np.array([np.dot(g, x[(i - m) % N]) for i in range(N)])
    return x + 1j * imag


def constant_track(freq_hz, amplitude, length):
    return AnalyticTrack(
        np.full(length, float(amplitude)),
        np.zeros(length),
        np.full(length, float(freq_hz)),
    )


# --------------------------------------------------------- analytic signal

class TestAnalyticSignal:
    def test_zero_series(self):
        z = analytic_signal(np.zeros(16))
        assert np.abs(z).max() == 0.0

    def test_cosine_quadrature_pair(self):
        t = np.arange(512) / 128.0
        z = analytic_signal(np.cos(2 * np.pi * 8 * t))
        edge = int(512 * 0.05)
        err = np.abs(z.imag - np.sin(2 * np.pi * 8 * t))[edge:-edge]
        assert err.max() < 1e-6

    def test_real_part_identity(self, rng):
        for T in (16, 127, 512):
            x = rng.standard_normal(T)
            assert np.abs(analytic_signal(x).real - x).max() < 1e-12

    @pytest.mark.parametrize("T", [64, 129, 500, 1024])
    def test_matches_pv_convolution_oracle(self, rng, T):
        x = rng.standard_normal(T)
        assert np.abs(analytic_signal(x) - pv_convolution_analytic(x)).max() < 1e-6

    def test_matches_scipy(self, rng):
        x = rng.standard_normal(300)
        np.testing.assert_allclose(analytic_signal(x), scipy_hilbert(x), atol=1e-10)

    def test_too_short(self):
        with pytest.raises(ValidationError):
            analytic_signal(np.ones(3))


# ------------------------------------------------- instantaneous attributes

class TestInstantaneousAttributes:
    def test_tone_amplitude_and_frequency(self):
        z = analytic_signal(tone(8.0, 128.0, 1024))
        track = instantaneous_attributes(z, 128.0)
        central = slice(102, 922)
        assert np.abs(track.amplitude[central] - 1.0).max() < 0.01
        assert np.abs(track.inst_freq_hz[central] - 8.0).max() / 8.0 < 0.01

    def test_phase_is_unwrapped(self):
        z = analytic_signal(tone(20.0, 128.0, 512))
        track = instantaneous_attributes(z, 128.0)
        assert np.abs(np.diff(track.phase)).max() < np.pi

    def test_linear_chirp_tracked(self):
        rate, dur = 128.0, 4.0
        T = int(rate * dur)
        t = np.arange(T) / rate
        phase = 2 * np.pi * (4.0 * t + (16.0 - 4.0) / (2 * dur) * t**2)
        track = instantaneous_attributes(analytic_signal(np.cos(phase)), rate)
        truth = 4.0 + (16.0 - 4.0) * t / dur
        central = slice(int(T * 0.1), int(T * 0.9))
        rel = np.abs(track.inst_freq_hz[central] - truth[central]) / truth[central]
        assert rel.max() < 0.05

    def test_zero_signal_flagged_zero(self):
        track = instantaneous_attributes(np.zeros(32, dtype=complex), 128.0)
        assert not track.amplitude.any()
        assert not track.inst_freq_hz.any()

    def test_negative_frequency_clamped_and_counted(self):
        # conjugate analytic signal sweeps phase backwards
        z = np.exp(-1j * 2 * np.pi * 5 * np.arange(64) / 128.0)
        track = instantaneous_attributes(z, 128.0)
        assert track.inst_freq_hz.min() >= 0.0
        assert track.clamped == 64

    @pytest.mark.parametrize("f0", [2.0, 8.0, 32.0, 45.0, 51.0])
    def test_pure_tone_within_one_percent(self, f0):
        z = analytic_signal(tone(f0, 128.0, 1024))
        track = instantaneous_attributes(z, 128.0)
        central = slice(102, 922)
        assert np.abs(track.inst_freq_hz[central] - f0).max() / f0 < 0.01


# --------------------------------------------------------- hilbert spectrum

class TestHilbertSpectrum:
    def test_single_tone_bin_arithmetic(self):
        track = constant_track(8.0, 1.0, 100)
        spec = hilbert_spectrum([track], (0.0, 64.0), 192)
        hot = np.flatnonzero(spec.energy.any(axis=1))
        assert hot.tolist() == [24]  # 8 Hz / (1/3 Hz per bin)
        np.testing.assert_array_equal(spec.energy[24], 1.0)

    def test_zero_amplitude_track(self):
        spec = hilbert_spectrum([constant_track(8.0, 0.0, 50)], (0.0, 64.0), 192)
        assert not spec.energy.any()

    def test_column_sums_are_additive(self, rng):
        T = 200
        tracks = [
            AnalyticTrack(np.abs(rng.standard_normal(T)), np.zeros(T), rng.uniform(1, 60, T)),
            AnalyticTrack(np.abs(rng.standard_normal(T)), np.zeros(T), rng.uniform(1, 60, T)),
        ]
        spec = hilbert_spectrum(tracks, (0.0, 64.0), 192)
        expected = tracks[0].amplitude + tracks[1].amplitude
        np.testing.assert_allclose(spec.energy.sum(axis=0), expected, atol=1e-9)

    def test_energy_bookkeeping_exact(self, rng):
        T = 300
        tracks = [
            AnalyticTrack(np.abs(rng.standard_normal(T)), np.zeros(T), rng.uniform(0.5, 63.5, T))
            for _ in range(3)
        ]
        spec = hilbert_spectrum(tracks, (0.0, 64.0), 192)
        total = sum(t.amplitude.sum() for t in tracks)
        assert abs(spec.energy.sum() - total) / total < 1e-12

    def test_out_of_range_discarded(self):
        track = constant_track(70.0, 1.0, 10)
        spec = hilbert_spectrum([track], (0.0, 64.0), 192)
        assert not spec.energy.any()

    def test_empty_track_list_rejected(self):
        with pytest.raises(ValidationError):
            hilbert_spectrum([], (0.0, 64.0), 192)

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValidationError):
            hilbert_spectrum([constant_track(1, 1, 10), constant_track(1, 1, 12)])


# -------------------------------------------------------- marginal spectrum

class TestMarginalSpectrum:
    def test_zero_spectrum(self):
        spec = HilbertSpectrum(np.linspace(0, 64, 193), np.zeros((192, 10)))
        assert not marginal_spectrum(spec).power.any()

    def test_constant_tone_mass(self):
        spec = hilbert_spectrum([constant_track(8.5, 2.5, 128)], (0.0, 64.0), 192)
        marginal = marginal_spectrum(spec)
        peak = marginal.power.argmax()
        assert peak == int(8.5 * 192 / 64)
        assert marginal.power[peak] == pytest.approx(2.5)
        assert marginal.power.sum() == pytest.approx(2.5)

    def test_time_average_identity(self, rng):
        energy = np.abs(rng.standard_normal((192, 77)))
        spec = HilbertSpectrum(np.linspace(0, 64, 193), energy)
        marginal = marginal_spectrum(spec)
        np.testing.assert_allclose(marginal.power.sum(), energy.sum() / 77, rtol=1e-12)

    def test_linearity(self, rng):
        edges = np.linspace(0, 64, 193)
        e1 = np.abs(rng.standard_normal((192, 50)))
        e2 = np.abs(rng.standard_normal((192, 50)))
        combined = marginal_spectrum(HilbertSpectrum(edges, 3.0 * e1 + e2)).power
        separate = 3.0 * marginal_spectrum(HilbertSpectrum(edges, e1)).power + marginal_spectrum(
            HilbertSpectrum(edges, e2)
        ).power
        np.testing.assert_allclose(combined, separate, atol=1e-12)


# --------------------------------------------------------- median frequency

class TestMedianFrequency:
    def test_pure_tone(self):
        track = instantaneous_attributes(analytic_signal(tone(8.0, 128.0, 1024)), 128.0)
        assert median_frequency(track) == pytest.approx(8.0, rel=0.02)

    def test_two_mass_left_bias(self):
        freqs = np.tile([4.0, 12.0], 32)
        track = AnalyticTrack(np.ones(64), np.zeros(64), freqs)
        assert median_frequency(track) == 4.0

    def test_amplitude_weighting(self):
        freqs = np.array([2.0] * 10 + [30.0] * 10)
        amps = np.array([0.01] * 10 + [1.0] * 10)
        track = AnalyticTrack(amps, np.zeros(20), freqs)
        assert median_frequency(track) == 30.0

    def test_zero_track_rejected(self):
        track = AnalyticTrack(np.zeros(16), np.zeros(16), np.zeros(16))
        with pytest.raises(ValidationError):
            median_frequency(track)


# -------------------------------------------------------------- select_imfs

@pytest.fixture(scope="module")
def two_tone_imfs():
    tones = [ToneSpec(16.0, (1.0, 0.8)), ToneSpec(2.0, (0.6, 1.1))]
    sig = synth_multitone(2, 128.0, 8.0, tones)
    return decompose(sig, SiftConfig(num_directions=8))


class TestSelectImfs:
    def test_threshold_keeps_only_fast_mode(self, two_tone_imfs):
        selected = select_imfs(two_tone_imfs, min_median_hz=4.0, max_count=3)
        assert selected == [0]
        # oracle: the selected IMF's per-channel median frequencies all beat
        # the threshold, every other IMF's fall below it
        from mhht.spectrum import channel_tracks

        for j in range(two_tone_imfs.count):
            medians = [
                median_frequency(t)
                for t in channel_tracks(two_tone_imfs.imfs[j], 128.0)
                if t.amplitude.sum() > 0
            ]
            if j == 0:
                assert min(medians) > 4.0
            else:
                assert np.mean(medians) <= 4.0

    def test_zero_threshold_selects_up_to_cap(self, two_tone_imfs):
        selected = select_imfs(two_tone_imfs, min_median_hz=0.0, max_count=2)
        assert len(selected) == 2
        assert selected[0] == 0  # ordered high-to-low median frequency

    def test_impossible_threshold_selects_none(self, two_tone_imfs):
        assert select_imfs(two_tone_imfs, min_median_hz=100.0) == []
