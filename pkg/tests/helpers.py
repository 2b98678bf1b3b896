import numpy as np

from mhht import MultivariateSignal


def make_signal(data, rate=128.0):
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    labels = [f"ch{i:02d}" for i in range(data.shape[0])]
    return MultivariateSignal(labels, data, rate)


def tone(freq_hz, rate_hz, n_samples, amplitude=1.0, phase=0.0):
    t = np.arange(n_samples) / rate_hz
    return amplitude * np.cos(2.0 * np.pi * freq_hz * t + phase)


def fft_amplitude(series, freq_hz, rate_hz):
    """Amplitude of a tone measured over an integer number of periods.

    The window length is trimmed so freq_hz lands exactly on an FFT bin,
    making the estimate exact for a pure tone.
    """
    n = len(series)
    cycles = np.floor(freq_hz * n / rate_hz)
    usable = int(round(cycles * rate_hz / freq_hz))
    window = series[:usable]
    k = int(round(freq_hz * usable / rate_hz))
    return 2.0 * np.abs(np.fft.rfft(window)[k]) / usable
