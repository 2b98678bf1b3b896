"""On-disk formats: signals, IMF sets, and spectra.

Two signal formats are supported. CSV holds a header row of channel labels
followed by one row per sample; it carries no rate, so loading CSV requires
an explicit sample rate. Raw binary is little-endian float32 in
channel-major order (all samples of channel 0, then channel 1, ...), with a
JSON sidecar ``<file>.json`` of the form
``{"channels": [...], "samples": T, "rate_hz": r}``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .errors import ValidationError
from .memd import ImfSet, SiftConfig
from .signal import MultivariateSignal
from .spectrum import HilbertSpectrum, MarginalSpectrum

import numpy as np

__all__ = [
    "load_signal",
    "save_signal",
    "save_imfset",
    "load_imfset",
    "export_marginal_csv",
    "export_hilbert_spectrum",
]

_F32 = np.dtype("<f4")


def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def _detect_format(path: Path, format: str | None) -> str:
    if format is not None:
        if format not in ("csv", "raw-binary"):
            raise ValidationError(f"unknown format {format!r}; use 'csv' or 'raw-binary'")
        return format
    if path.suffix.lower() == ".csv":
        return "csv"
    if path.suffix.lower() in (".bin", ".raw"):
        return "raw-binary"
    raise ValidationError(f"cannot infer format from {path.name!r}; pass format explicitly")


def _load_csv(path: Path, rate_hz: float | None) -> MultivariateSignal:
    if rate_hz is None:
        raise ValidationError("CSV carries no sample rate; pass rate_hz")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            channels = [label.strip() for label in next(reader)]
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        rows = []
        for row_num, row in enumerate(reader, start=2):
            if len(row) != len(channels):
                raise ValidationError(
                    f"{path}: row {row_num} has {len(row)} cells, expected {len(channels)}"
                )
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                bad = next(i for i, cell in enumerate(row) if not _is_float(cell))
                raise ValidationError(
                    f"{path}: non-numeric cell at row {row_num}, channel {channels[bad]!r}"
                ) from None
            for i, v in enumerate(values):
                if not math.isfinite(v):
                    raise ValidationError(
                        f"{path}: non-finite sample at row {row_num}, channel {channels[i]!r}"
                    )
            rows.append(values)
    data = np.array(rows, dtype=np.float64).T if rows else np.empty((len(channels), 0))
    return MultivariateSignal(channels, data, rate_hz)


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _load_raw(path: Path) -> MultivariateSignal:
    sidecar = _sidecar_path(path)
    if not sidecar.exists():
        raise FileNotFoundError(f"missing sidecar {sidecar}")
    with open(sidecar) as fh:
        meta = json.load(fh)
    for key in ("channels", "samples", "rate_hz"):
        if key not in meta:
            raise ValidationError(f"{sidecar}: sidecar missing key {key!r}")
    channels = meta["channels"]
    samples = int(meta["samples"])
    raw = np.fromfile(path, dtype=_F32)
    if raw.size != len(channels) * samples:
        raise ValidationError(
            f"{path}: expected {len(channels) * samples} float32 values, found {raw.size}"
        )
    data = raw.reshape(len(channels), samples).astype(np.float64)
    return MultivariateSignal(channels, data, float(meta["rate_hz"]))


def load_signal(path, format: str | None = None, rate_hz: float | None = None) -> MultivariateSignal:
    """Load a multichannel signal from CSV or raw binary.

    Format is inferred from the extension (.csv / .bin / .raw) unless given.
    Channel order is preserved from the file.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    fmt = _detect_format(path, format)
    return _load_csv(path, rate_hz) if fmt == "csv" else _load_raw(path)


def save_signal(x: MultivariateSignal, path, format: str | None = None) -> Path:
    """Write a signal to CSV or raw binary (float32 + sidecar).

    Raw binary round-trips exactly for float32-representable data; CSV is
    written with 17 significant digits, enough to round-trip float64.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fmt = _detect_format(path, format)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(x.channels)
            for t in range(x.n_samples):
                writer.writerow([f"{v:.17g}" for v in x.data[:, t]])
    else:
        x.data.astype(_F32).tofile(path)
        meta = {"channels": list(x.channels), "samples": x.n_samples, "rate_hz": x.sample_rate_hz}
        with open(_sidecar_path(path), "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return path


def save_imfset(imfs: ImfSet, directory) -> Path:
    """Write an IMF set as imf_01.bin ... imf_MM.bin + residue.bin + manifest.json.

    Matrices are little-endian float32 in channel-major order, matching the
    raw signal format.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width = max(2, len(str(imfs.count)))
    for j, imf in enumerate(imfs.imfs, start=1):
        imf.astype(_F32).tofile(directory / f"imf_{j:0{width}d}.bin")
    imfs.residue.astype(_F32).tofile(directory / "residue.bin")
    manifest = {
        "n": imfs.n_channels,
        "T": imfs.n_samples,
        "M": imfs.count,
        "rate_hz": imfs.source_rate_hz,
        "config": _config_dict(imfs.config),
        "seed": imfs.seed,
    }
    with open(directory / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return directory


def _config_dict(cfg: SiftConfig | None) -> dict:
    if cfg is None:
        return {}
    return {
        "num_directions": cfg.num_directions,
        "max_imfs": cfg.max_imfs,
        "max_sift_iterations": cfg.max_sift_iterations,
        "sift_tolerance": cfg.sift_tolerance,
        "min_extrema": cfg.min_extrema,
    }


def load_imfset(directory) -> ImfSet:
    """Read an IMF set directory written by :func:`save_imfset`."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise FileNotFoundError(f"missing manifest {manifest_path}")
    with open(manifest_path) as fh:
        meta = json.load(fh)
    n, T, M = int(meta["n"]), int(meta["T"]), int(meta["M"])
    width = max(2, len(str(M)))

    def read_matrix(name: str) -> np.ndarray:
        raw = np.fromfile(directory / name, dtype=_F32)
        if raw.size != n * T:
            raise ValidationError(f"{name}: expected {n * T} values, found {raw.size}")
        return raw.reshape(n, T).astype(np.float64)

    imfs = tuple(read_matrix(f"imf_{j:0{width}d}.bin") for j in range(1, M + 1))
    residue = read_matrix("residue.bin")
    cfg = SiftConfig(**meta["config"]) if meta.get("config") else None
    return ImfSet(imfs, residue, float(meta["rate_hz"]), config=cfg, seed=meta.get("seed"))


def export_marginal_csv(spectrum: MarginalSpectrum, path) -> Path:
    """Write a marginal spectrum as (bin_low_hz, bin_high_hz, power) rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_low_hz", "bin_high_hz", "power"])
        for lo, hi, p in zip(spectrum.freq_edges[:-1], spectrum.freq_edges[1:], spectrum.power):
            writer.writerow([f"{lo:.17g}", f"{hi:.17g}", f"{p:.17g}"])
    return path


def export_hilbert_spectrum(spectrum: HilbertSpectrum, path) -> Path:
    """Write H[w, t] as raw float32 (frequency-major) plus a JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    spectrum.energy.astype(_F32).tofile(path)
    meta = {
        "bins": spectrum.bins,
        "time_bins": spectrum.time_bins,
        "freq_lo_hz": float(spectrum.freq_edges[0]),
        "freq_hi_hz": float(spectrum.freq_edges[-1]),
        "dtype": "<f4",
        "layout": "frequency-major",
    }
    with open(_sidecar_path(path), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
