import numpy as np
import pytest

from cameratile import evaluation as ev
from cameratile import synth
from cameratile.errors import InvalidSpec
from cameratile.fusion import fuse
from cameratile.types import Activation, TileClass, TilePosition


class TestRender:
    def test_no_camera_truth(self):
        sf = synth.render(synth.SynthSpec(seed=1))
        assert sf.tile_truth == (TileClass.NO_CAMERA,) * 4
        assert sf.truth.activation is Activation.NONE

    def test_seed_determinism(self):
        spec = synth.SynthSpec(seed=123, camera_position=TilePosition.T2, camera_active=True)
        a = synth.render(spec)
        b = synth.render(spec)
        assert np.array_equal(a.frame, b.frame)
        assert a.tile_truth == b.tile_truth

    def test_different_seeds_differ(self):
        a = synth.render(synth.SynthSpec(seed=1))
        b = synth.render(synth.SynthSpec(seed=2))
        assert not np.array_equal(a.frame, b.frame)

    def test_truth_fusion_consistency(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            pos = None if rng.random() < 0.3 else TilePosition(int(rng.integers(0, 4)))
            spec = synth.SynthSpec(
                seed=int(rng.integers(0, 2**32)),
                camera_position=pos,
                camera_active=pos is not None and bool(rng.integers(0, 2)),
                ui_shift=(int(rng.integers(-4, 5)), int(rng.integers(-4, 5))),
                border=int(rng.choice(synth.BORDER_CHOICES)),
                output_scale=float(rng.choice(synth.SCALE_CHOICES)),
            )
            sf = synth.render(spec)
            assert synth.check_truth_consistency(sf)
            assert fuse(sf.tile_truth)[1] == sf.truth.camera_position

    def test_output_geometry(self):
        sf = synth.render(synth.SynthSpec(seed=4, border=6, output_scale=2.0))
        assert sf.frame.shape == ((521 + 12) * 2, (640 + 12) * 2, 3)

    def test_invalid_specs(self):
        with pytest.raises(InvalidSpec):
            synth.render(synth.SynthSpec(seed=0, camera_active=True))
        with pytest.raises(InvalidSpec):
            synth.render(synth.SynthSpec(seed=0, ui_shift=(5, 0)))
        with pytest.raises(InvalidSpec):
            synth.render(synth.SynthSpec(seed=0, border=-1))
        with pytest.raises(InvalidSpec):
            synth.render(synth.SynthSpec(seed=0, background=(0, 0, 0)))


class TestRenderCorpus:
    def test_single_class_mix(self, tmp_path):
        frames = synth.render_corpus(30, seed=9, class_mix={"inactive": 1.0})
        for cf in frames:
            assert cf.synth.truth.activation is Activation.INACTIVE

    def test_mix_within_multinomial_bounds(self):
        n = 1000
        mix = {"none": 0.4, "inactive": 0.35, "active": 0.25}
        frames = synth.render_corpus(n, seed=10, class_mix=mix)
        counts = {"none": 0, "inactive": 0, "active": 0}
        for cf in frames:
            act = cf.synth.truth.activation
            counts[{"NONE": "none", "INACTIVE": "inactive", "ACTIVE": "active"}[act.value]] += 1
        for k, p in mix.items():
            sigma = np.sqrt(n * p * (1 - p))
            assert abs(counts[k] - n * p) <= 3 * sigma

    def test_reproducible(self):
        a = synth.render_corpus(10, seed=11)
        b = synth.render_corpus(10, seed=11)
        for x, y in zip(a, b):
            assert np.array_equal(x.synth.frame, y.synth.frame)
            assert x.synth.truth == y.synth.truth

    def test_csv_round_trip(self, tmp_path):
        frames = synth.render_corpus(25, seed=12, out_dir=tmp_path)
        loaded = ev.load_annotations(tmp_path / "annotations.csv")
        assert loaded == [cf.synth.truth for cf in frames]
        assert len(list(tmp_path.glob("frame_*.png"))) == 25

    def test_rejects_empty(self):
        with pytest.raises(InvalidSpec):
            synth.render_corpus(0, seed=0)
