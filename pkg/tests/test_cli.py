import json

import numpy as np
import pytest

from mhht import PipelineConfig, save_signal, synth_multitone, ToneSpec
from mhht.cli import main



@pytest.fixture
def two_tone_file(tmp_path):
    sig = synth_multitone(2, 128.0, 4.0, [ToneSpec(16.0, (1.0, 0.8)), ToneSpec(2.0, (0.5, 1.1))])
    return save_signal(sig, tmp_path / "input.bin")


def read_tree(root):
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


class TestConfig:
    def test_json_round_trip_lossless(self, tmp_path):
        cfg = PipelineConfig(sift_tolerance=0.07, freq_hi_hz=50.5, seed=123, block_stride=2)
        path = cfg.to_json_file(tmp_path / "cfg.json")
        assert PipelineConfig.from_json_file(path) == cfg

    def test_unknown_key_rejected(self):
        from mhht import ValidationError

        with pytest.raises(ValidationError, match="unknown config"):
            PipelineConfig.from_dict({"no_such_knob": 1})

    def test_bad_scope_rejected(self):
        from mhht import ValidationError

        with pytest.raises(ValidationError):
            PipelineConfig(decompose_scope="sideways")


class TestDecomposeCommand:
    def test_valid_input_writes_imf_directory(self, two_tone_file, tmp_path, capsys):
        rc = main(["decompose", "--input", str(two_tone_file), "--output", str(tmp_path / "imfs")])
        assert rc == 0
        manifest = json.loads((tmp_path / "imfs" / "manifest.json").read_text())
        assert 1 <= manifest["M"] <= 11
        assert manifest["n"] == 2

    def test_missing_file_exits_io_code(self, tmp_path, capsys):
        rc = main(["decompose", "--input", str(tmp_path / "ghost.bin"), "--output", str(tmp_path / "o")])
        assert rc == 2
        assert "ghost.bin" in capsys.readouterr().err

    def test_csv_without_rate_is_validation_error(self, tmp_path, capsys):
        (tmp_path / "x.csv").write_text("a,b\n1,2\n3,4\n")
        rc = main(["decompose", "--input", str(tmp_path / "x.csv"), "--output", str(tmp_path / "o")])
        assert rc == 1

    def test_valid_csv_input(self, tmp_path):
        sig = synth_multitone(2, 128.0, 4.0, [ToneSpec(10.0, (1.0, 0.5))])
        save_signal(sig, tmp_path / "in.csv")
        rc = main(["decompose", "--input", str(tmp_path / "in.csv"), "--rate", "128",
                   "--output", str(tmp_path / "out")])
        assert rc == 0
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert 1 <= manifest["M"] <= 11

    def test_seeded_reruns_identical(self, two_tone_file, tmp_path):
        for name in ("a", "b"):
            rc = main(
                ["decompose", "--input", str(two_tone_file), "--output", str(tmp_path / name),
                 "--seed", "5"]
            )
            assert rc == 0
        assert read_tree(tmp_path / "a") == read_tree(tmp_path / "b")


class TestSpectrumCommand:
    def test_spectrum_outputs_per_channel(self, two_tone_file, tmp_path):
        main(["decompose", "--input", str(two_tone_file), "--output", str(tmp_path / "imfs")])
        rc = main(["spectrum", "--input", str(tmp_path / "imfs"), "--output", str(tmp_path / "spec")])
        assert rc == 0
        names = {p.name for p in (tmp_path / "spec").iterdir()}
        assert {"marginal_ch00.csv", "marginal_ch01.csv", "hilbert_ch00.bin"} <= names


class TestFeaturesCommand:
    def test_dataset_geometry_small(self, tmp_path):
        sig = synth_multitone(
            2, 128.0, 6.0, [ToneSpec(16.0, (1.0, 0.8)), ToneSpec(6.0, (0.5, 1.1))], noise_sigma=0.05
        )
        save_signal(sig, tmp_path / "six.bin")
        rc = main(
            ["features", "--input", str(tmp_path / "six.bin"), "--output", str(tmp_path / "ds"),
             "--jobs", "1"]
        )
        assert rc == 0
        manifest = json.loads((tmp_path / "ds" / "manifest.json").read_text())
        assert len(manifest["blocks"]) == 2
        assert manifest["blocks"][0]["shape"] == [2, 192, 3]

    def test_threshold_too_high_fails_validation(self, two_tone_file, tmp_path, capsys):
        cfg = PipelineConfig(imf_threshold_hz=100.0)
        cfg.to_json_file(tmp_path / "cfg.json")
        rc = main(
            ["features", "--input", str(two_tone_file), "--output", str(tmp_path / "ds"),
             "--config", str(tmp_path / "cfg.json"), "--jobs", "1"]
        )
        assert rc == 1
        assert "no IMFs selected" in capsys.readouterr().err

    def test_labels_written_and_threshold_scores_excluded(self, two_tone_file, tmp_path):
        rc = main(
            ["features", "--input", str(two_tone_file), "--output", str(tmp_path / "ds"),
             "--jobs", "1", "--score-valence", "6.5", "--score-arousal", "5.0"]
        )
        assert rc == 0
        manifest = json.loads((tmp_path / "ds" / "manifest.json").read_text())
        assert manifest["blocks"][0]["label"] == {"valence": "high"}
        assert manifest["excluded"][0]["axis"] == "arousal"


class TestSynthAndVerifyCommands:
    def test_synth_writes_loadable_signal(self, tmp_path, capsys):
        rc = main(
            ["synth", "--output", str(tmp_path / "s.bin"), "--channels", "3", "--seconds", "2",
             "--tone", "8:1.5", "--json"]
        )
        assert rc == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["channels"] == 3
        from mhht import load_signal

        sig = load_signal(tmp_path / "s.bin")
        assert sig.n_channels == 3 and sig.n_samples == 256

    def test_verify_passes_with_defaults(self, capsys):
        assert main(["verify"]) == 0
        assert "verification passed" in capsys.readouterr().out

    def test_verify_json_schema(self, capsys):
        assert main(["verify", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["passed"] is True
        assert {"name", "value", "threshold", "comparison", "passed"} == set(report["checks"][0])

    def test_injected_failure_exits_verify_code(self, tmp_path, capsys):
        cfg = PipelineConfig(verify_recon_tol=0.0)
        cfg.to_json_file(tmp_path / "cfg.json")
        rc = main(["verify", "--config", str(tmp_path / "cfg.json")])
        assert rc == 3

    def test_usage_error_is_validation_exit(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["decompose"])  # missing required flags
        assert exc.value.code == 1
