"""Time-frequency picture of a chirp riding on a steady tone.

The Hilbert spectrum places instantaneous amplitude at instantaneous
frequency, so a linear 4->16 Hz chirp shows up as a rising ridge while a
constant 30 Hz tone stays flat. The marginal spectrum (time average) then
smears the chirp across its swept band but keeps the tone in one bin.

Run:  python3 demos/hilbert_spectrum_chirp.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mhht import analytic_signal, hilbert_spectrum, instantaneous_attributes, marginal_spectrum

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

rate = 128.0
seconds = 8.0
T = int(rate * seconds)
t = np.arange(T) / rate

chirp_phase = 2 * np.pi * (4.0 * t + (16.0 - 4.0) / (2 * seconds) * t**2)
chirp = 1.0 * np.cos(chirp_phase)
steady = 0.6 * np.cos(2 * np.pi * 30.0 * t)

# each component gets its own analytic track, as IMFs would after decomposition
tracks = [
    instantaneous_attributes(analytic_signal(chirp), rate),
    instantaneous_attributes(analytic_signal(steady), rate),
]
spec = hilbert_spectrum(tracks, freq_range=(0.0, 64.0), bins=192)
marginal = marginal_spectrum(spec)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 4), width_ratios=[3, 1])
ax1.imshow(
    spec.energy,
    origin="lower",
    aspect="auto",
    extent=[0, seconds, 0, 64],
    cmap="magma",
)
ax1.set_xlabel("time (s)")
ax1.set_ylabel("frequency (Hz)")
ax1.set_title("Hilbert spectrum H(f, t)")

centers = (marginal.freq_edges[:-1] + marginal.freq_edges[1:]) / 2
ax2.plot(marginal.power, centers)
ax2.set_xlabel("power")
ax2.set_ylim(0, 64)
ax2.set_title("marginal spectrum")
fig.tight_layout()
fig.savefig(OUT / "hilbert_spectrum_chirp.png", dpi=120)
print(f"figure -> {OUT / 'hilbert_spectrum_chirp.png'}")

ridge = spec.energy.argmax(axis=0) * (64.0 / 192)
print(f"chirp ridge spans {ridge[T // 10]:.1f} Hz -> {ridge[-T // 10]:.1f} Hz")
print(f"steady tone bin: {marginal.power.argmax()} ({centers[marginal.power.argmax()]:.2f} Hz)")
