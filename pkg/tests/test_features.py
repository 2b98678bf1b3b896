import json

import numpy as np
import pytest

from mhht import (
    FeatureBlock,
    FeatureMap2D,
    SiftConfig,
    SpectrumConfig,
    ToneSpec,
    ValidationError,
    assign_label,
    build_blocks,
    build_map,
    decompose,
    export_dataset,
    load_block,
    load_manifest,
    normalize_map,
    segment,
    synth_multitone,
)
from mhht.spectrum import channel_tracks, hilbert_spectrum, marginal_spectrum


def one_second_segment(tones, n_channels=2, seed=0):
    sig = synth_multitone(n_channels, 128.0, 1.0, tones, seed=seed)
    return segment(sig, 1.0, trial_id="t")[0]


def make_maps(count, shape=(2, 4)):
    rng = np.random.default_rng(count)
    return [FeatureMap2D(np.abs(rng.standard_normal(shape)), i) for i in range(count)]


class TestBuildMap:
    def test_zero_segment_gives_zero_map(self):
        seg = one_second_segment([])
        fmap = build_map(seg, None, SpectrumConfig())
        assert fmap.shape == (2, 192)
        assert not fmap.values.any()

    def test_silent_channel_row_near_zero(self):
        # 16.2 Hz sits mid-bin, away from the 1/3 Hz bin edges
        seg = one_second_segment([ToneSpec(16.2, (1.0, 0.0))])
        fmap = build_map(seg, None, SpectrumConfig())
        row0, row1 = fmap.values
        assert row0.argmax() == int(16.2 * 192 / 64)
        assert row1.max() < 0.05 * row0.max()

    def test_map_shape_matches_config(self, rng):
        sig = synth_multitone(4, 128.0, 1.0, [ToneSpec(20.0, (1, 1, 1, 1))], noise_sigma=0.1)
        seg = segment(sig, 1.0)[0]
        fmap = build_map(seg, None, SpectrumConfig(bins=192), sift_cfg=SiftConfig(num_directions=8))
        assert fmap.shape == (4, 192)

    def test_rows_match_per_channel_mhs_oracle(self):
        seg = one_second_segment([ToneSpec(16.2, (1.0, 0.5)), ToneSpec(3.1, (0.4, 0.9))])
        cfg = SpectrumConfig()
        imfset = decompose(seg.to_signal(), SiftConfig(num_directions=8), 0)
        selected = [0, 1]
        fmap = build_map(seg, selected, cfg, imfset=imfset)
        for c in range(2):
            tracks = [channel_tracks(imfset.imfs[j], 128.0)[c] for j in selected]
            expected = marginal_spectrum(
                hilbert_spectrum(tracks, (cfg.freq_lo_hz, cfg.freq_hi_hz), cfg.bins)
            ).power
            np.testing.assert_allclose(fmap.values[c], expected, atol=1e-12)

    def test_empty_selection_rejected(self):
        seg = one_second_segment([ToneSpec(16.0, (1.0, 0.5))])
        with pytest.raises(ValidationError, match="empty IMF selection"):
            build_map(seg, [], SpectrumConfig())

    def test_out_of_range_selection_rejected(self):
        seg = one_second_segment([ToneSpec(16.0, (1.0, 0.5))])
        with pytest.raises(ValidationError, match="out of range"):
            build_map(seg, [99], SpectrumConfig())


class TestNormalizeMap:
    def test_scales_to_unit_interval(self, rng):
        fmap = FeatureMap2D(np.abs(rng.standard_normal((3, 5))) + 1.0, 0)
        out = normalize_map(fmap)
        assert out.values.min() == 0.0
        assert out.values.max() == 1.0

    def test_constant_map_stays_zero(self):
        out = normalize_map(FeatureMap2D(np.full((2, 3), 4.0), 1))
        assert not out.values.any()


class TestBuildBlocks:
    def test_sixty_maps_three_deep(self):
        blocks = build_blocks(make_maps(60), depth=3, trial_id="t")
        assert len(blocks) == 20
        assert all(b.shape == (2, 4, 3) for b in blocks)

    def test_exact_fit_single_block(self):
        maps = make_maps(3)
        blocks = build_blocks(maps, depth=3)
        assert len(blocks) == 1
        for k in range(3):
            np.testing.assert_array_equal(blocks[0].values[:, :, k], maps[k].values)

    def test_too_few_maps_empty(self):
        assert build_blocks(make_maps(2), depth=3) == []

    def test_content_preserved_in_order(self):
        maps = make_maps(7)
        blocks = build_blocks(maps, depth=3, trial_id="x", label="high")
        assert len(blocks) == 2
        assert [b.start_segment for b in blocks] == [0, 3]
        assert all(b.label == "high" for b in blocks)
        flattened = [blocks[i].values[:, :, k] for i in range(2) for k in range(3)]
        for got, src in zip(flattened, maps):
            np.testing.assert_array_equal(got, src.values)

    def test_overlapping_stride(self):
        blocks = build_blocks(make_maps(5), depth=3, stride=1)
        assert [b.start_segment for b in blocks] == [0, 1, 2]

    def test_mixed_shapes_rejected(self):
        maps = make_maps(2) + make_maps(1, shape=(3, 4))
        with pytest.raises(ValidationError):
            build_blocks(maps, depth=1)


class TestAssignLabel:
    @pytest.mark.parametrize("score,expected", [(3.2, "low"), (7.0, "high"), (1.0, "low"), (9.0, "high")])
    def test_classes(self, score, expected):
        assert assign_label(score, 5.0) == expected

    def test_threshold_score_excluded(self):
        assert assign_label(5.0, 5.0) is None

    @pytest.mark.parametrize("score", [0.5, 9.5, -1.0])
    def test_out_of_range_rejected(self, score):
        with pytest.raises(ValidationError):
            assign_label(score)


class TestExportDataset:
    def test_count_and_manifest(self, tmp_path):
        blocks = build_blocks(make_maps(60), depth=3, trial_id="t", label={"valence": "low"})
        manifest = export_dataset(blocks, tmp_path, config={"seed": 0})
        assert len(manifest["blocks"]) == 20
        files = sorted((tmp_path / "blocks").iterdir())
        assert len(files) == 20
        reloaded = load_manifest(tmp_path)
        assert reloaded == manifest
        assert reloaded["blocks"][0]["label"] == {"valence": "low"}
        assert reloaded["config"]["seed"] == 0

    def test_round_trip_bitwise(self, tmp_path, rng):
        values = np.abs(rng.standard_normal((4, 6, 3))).astype("<f4").astype(np.float64)
        block = FeatureBlock(values, "t", 0)
        export_dataset([block], tmp_path)
        entry = load_manifest(tmp_path)["blocks"][0]
        back = load_block(tmp_path, entry)
        assert np.array_equal(back, values)

    def test_empty_list_gives_empty_manifest(self, tmp_path):
        manifest = export_dataset([], tmp_path)
        assert manifest["blocks"] == []
        assert (tmp_path / "manifest.json").exists()

    def test_shape_mismatch_rejected(self, tmp_path):
        blocks = [
            FeatureBlock(np.zeros((2, 4, 3)), "a", 0),
            FeatureBlock(np.zeros((2, 5, 3)), "b", 0),
        ]
        with pytest.raises(ValidationError):
            export_dataset(blocks, tmp_path)

    def test_deterministic_ordering(self, tmp_path):
        blocks = [
            FeatureBlock(np.full((1, 2, 1), v), trial, start)
            for v, (trial, start) in enumerate(
                [("b", 3), ("a", 3), ("b", 0), ("a", 0)], start=1
            )
        ]
        manifest = export_dataset(blocks, tmp_path)
        order = [(e["trial"], e["start_segment"]) for e in manifest["blocks"]]
        assert order == [("a", 0), ("a", 3), ("b", 0), ("b", 3)]

    def test_excluded_trials_flagged(self, tmp_path):
        manifest = export_dataset(
            [], tmp_path, excluded=[{"trial": "t9", "reason": "score at threshold"}]
        )
        assert manifest["excluded"][0]["trial"] == "t9"
        on_disk = json.loads((tmp_path / "manifest.json").read_text())
        assert on_disk["excluded"] == manifest["excluded"]
