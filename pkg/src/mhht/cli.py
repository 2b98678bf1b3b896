"""Command-line entry point.

Subcommands: decompose, spectrum, features, synth, verify. Every command is
deterministic given its inputs, config, and seed. Exit codes: 0 success,
1 validation error, 2 I/O error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import PipelineConfig
from .errors import ValidationError
from .io import (
    export_hilbert_spectrum,
    export_marginal_csv,
    load_imfset,
    load_signal,
    save_imfset,
    save_signal,
)
from .memd import decompose
from .pipeline import run_features
from .spectrum import channel_tracks, hilbert_spectrum, marginal_spectrum
from .synth import ToneSpec, run_verification, synth_multitone

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    # usage mistakes are validation errors, not the default argparse code 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _load_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_json_file(args.config) if args.config else PipelineConfig()
    if getattr(args, "seed", None) is not None:
        cfg = cfg.replace(seed=args.seed)
    return cfg


def _load_input_signal(args, cfg: PipelineConfig):
    return load_signal(args.input, rate_hz=args.rate)


def _cmd_decompose(args) -> int:
    cfg = _load_config(args)
    sig = _load_input_signal(args, cfg)
    imfs = decompose(sig, cfg.sift_config(), cfg.seed)
    save_imfset(imfs, args.output)
    print(f"decomposed {sig.n_channels} channels x {sig.n_samples} samples "
          f"into {imfs.count} IMFs + residue -> {args.output}")
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    cfg = _load_config(args)
    imfs = load_imfset(args.input)
    out = Path(args.output)
    spec_cfg = cfg.spectrum_config()
    for c in range(imfs.n_channels):
        tracks = [
            channel_tracks(imf, imfs.source_rate_hz)[c] for imf in imfs.imfs
        ]
        if not tracks:
            continue
        H = hilbert_spectrum(tracks, (spec_cfg.freq_lo_hz, spec_cfg.freq_hi_hz), spec_cfg.bins)
        export_hilbert_spectrum(H, out / f"hilbert_ch{c:02d}.bin")
        export_marginal_csv(marginal_spectrum(H), out / f"marginal_ch{c:02d}.csv")
    print(f"wrote spectra for {imfs.n_channels} channels -> {out}")
    return EXIT_OK


def _cmd_features(args) -> int:
    cfg = _load_config(args)
    sig = _load_input_signal(args, cfg)
    trial_id = args.trial_id or Path(args.input).stem
    label, excluded = None, []
    if args.score_valence is not None or args.score_arousal is not None:
        from .features import assign_label

        label = {}
        for axis, score in (("valence", args.score_valence), ("arousal", args.score_arousal)):
            if score is None:
                continue
            cls = assign_label(score, cfg.label_threshold)
            if cls is None:
                excluded.append({"trial": trial_id, "axis": axis, "reason": "score at threshold"})
            else:
                label[axis] = cls
        label = label or None
    if any(e["axis"] in ("valence", "arousal") for e in excluded) and not label:
        # every requested axis fell on the threshold: trial is excluded
        from .features import export_dataset

        export_dataset([], args.output, config=cfg.to_dict(), excluded=excluded)
        print(f"trial {trial_id} excluded (scores at threshold); empty dataset -> {args.output}")
        return EXIT_OK
    manifest = run_features(
        sig, cfg, args.output, trial_id=trial_id, label=label, jobs=args.jobs, excluded=excluded
    )
    print(f"exported {len(manifest['blocks'])} blocks -> {args.output}")
    return EXIT_OK


def _parse_tone(text: str, n_channels: int) -> ToneSpec:
    # "freq" or "freq:amplitude", one shared amplitude for all channels
    parts = text.split(":")
    freq = float(parts[0])
    amp = float(parts[1]) if len(parts) > 1 else 1.0
    return ToneSpec(freq, (amp,) * n_channels)


def _cmd_synth(args) -> int:
    tones = [_parse_tone(t, args.channels) for t in (args.tone or ["4.0", "32.0"])]
    sig = synth_multitone(
        args.channels, args.rate, args.seconds, tones, noise_sigma=args.noise, seed=args.seed or 0
    )
    save_signal(sig, args.output)
    summary = {
        "channels": sig.n_channels,
        "samples": sig.n_samples,
        "rate_hz": sig.sample_rate_hz,
        "tones_hz": [t.freq_hz for t in tones],
        "noise_sigma": args.noise,
        "output": str(args.output),
    }
    print(json.dumps(summary, sort_keys=True) if args.json else
          f"wrote {sig.n_channels} x {sig.n_samples} synthetic signal -> {args.output}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _load_config(args)
    report = run_verification(
        recon_tol=cfg.verify_recon_tol,
        min_correlation=cfg.verify_min_correlation,
        freq_tol=cfg.verify_freq_tol,
        mhs_tol=cfg.verify_mhs_tol,
        seed=cfg.seed,
    )
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for check in report["checks"]:
            status = "PASS" if check["passed"] else "FAIL"
            print(f"[{status}] {check['name']}: {check['value']:.3g} "
                  f"{check['comparison']} {check['threshold']:.3g}")
        print("verification " + ("passed" if report["passed"] else "FAILED"))
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mhht", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_required=True):
        p.add_argument("--config", help="pipeline config JSON file")
        p.add_argument("--seed", type=int, help="override the config seed")
        if output_required:
            p.add_argument("--output", required=True, help="output path or directory")

    p = sub.add_parser("decompose", help="MEMD of a signal file into an IMF directory")
    p.add_argument("--input", required=True)
    p.add_argument("--rate", type=float, help="sample rate (required for CSV input)")
    common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("spectrum", help="Hilbert + marginal spectra of an IMF directory")
    p.add_argument("--input", required=True, help="IMF directory from 'decompose'")
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("features", help="full pipeline: signal file -> feature-block dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--rate", type=float, help="sample rate (required for CSV input)")
    p.add_argument("--trial-id", help="trial identifier (default: input file stem)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: cores)")
    p.add_argument("--score-valence", type=float, help="valence self-assessment score in [1, 9]")
    p.add_argument("--score-arousal", type=float, help="arousal self-assessment score in [1, 9]")
    common(p)
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("synth", help="generate a synthetic multitone signal file")
    p.add_argument("--channels", type=int, default=8)
    p.add_argument("--rate", type=float, default=128.0)
    p.add_argument("--seconds", type=float, default=8.0)
    p.add_argument("--tone", action="append", help="freq or freq:amplitude (repeatable)")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--json", action="store_true", help="print a JSON summary")
    common(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("verify", help="run the synthetic oracle suite")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    common(p, output_required=False)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"mhht: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"mhht: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
