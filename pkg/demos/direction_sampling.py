"""How the projection directions cover the hypersphere.

The decomposition quality depends on sampling the unit sphere evenly; this
script draws the quasi-uniform direction sets used for 2- and 3-channel
signals and prints a nearest-neighbour spread statistic for a 32-channel
set, where plotting is no longer possible.

Run:  python3 demos/direction_sampling.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mhht import sample_directions

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

fig = plt.figure(figsize=(10, 5))

ax1 = fig.add_subplot(1, 2, 1)
circle = sample_directions(2, 16, seed=1).vectors
ax1.scatter(circle[:, 0], circle[:, 1], s=25)
ax1.add_artist(plt.Circle((0, 0), 1.0, fill=False, ls=":"))
ax1.set_aspect("equal")
ax1.set_title("n=2: 16 directions on the circle")

ax2 = fig.add_subplot(1, 2, 2, projection="3d")
sphere = sample_directions(3, 128, seed=1).vectors
ax2.scatter(sphere[:, 0], sphere[:, 1], sphere[:, 2], s=12)
ax2.set_title("n=3: 128 directions on the sphere")

fig.tight_layout()
fig.savefig(OUT / "direction_sets.png", dpi=120)
print(f"figure -> {OUT / 'direction_sets.png'}")

# spread check in high dimension: nearest-neighbour angles should cluster,
# not collapse toward zero
vectors = sample_directions(32, 64, seed=1).vectors
cosines = np.clip(vectors @ vectors.T, -1, 1)
np.fill_diagonal(cosines, -1)
nn_angles = np.degrees(np.arccos(cosines.max(axis=1)))
print(f"n=32, V=64: nearest-neighbour angle min {nn_angles.min():.1f} deg, "
      f"median {np.median(nn_angles):.1f} deg")
