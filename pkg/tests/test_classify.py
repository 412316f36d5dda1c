import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cameratile.classify import (
    TemplateBackend,
    TemplateBackendConfig,
    classify_tile,
    decide,
    ncc,
)
from cameratile.errors import SizeMismatch
from cameratile.geometry import GeometryConfig, crop_tiles, normalize
from cameratile.synth import SynthSpec, render
from cameratile.types import TileClass, TilePosition

CFG = GeometryConfig()


def synth_crops(spec):
    sf = render(spec)
    return crop_tiles(normalize(sf.frame, CFG), CFG), sf


class TestDecide:
    @pytest.mark.parametrize(
        "scores,expected",
        [
            ((0.1, 0.9, 0.2), TileClass.INACTIVE_CAMERA),
            ((0.5, 0.5, 0.5), TileClass.NO_CAMERA),  # tie-break by class order
            ((-3.2, -0.1, 4.7), TileClass.ACTIVE_CAMERA),
            ((1.0, 0.0, 1.0), TileClass.NO_CAMERA),
            ((0.0, 2.0, 2.0), TileClass.INACTIVE_CAMERA),
        ],
    )
    def test_cases(self, scores, expected):
        assert decide(np.array(scores)) is expected

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            decide(np.array([0.0, np.nan, 1.0]))

    @given(arrays(np.float64, 3, elements=st.floats(-100, 100)))
    def test_total_and_first_max(self, scores):
        cls = decide(scores)
        assert scores[cls.value] == scores.max()
        assert all(scores[i] < scores.max() for i in range(cls.value))


class TestNcc:
    def test_self_correlation(self):
        x = np.random.default_rng(0).integers(0, 256, (12, 17)).astype(float)
        assert ncc(x, x) == pytest.approx(1.0, abs=1e-9)

    def test_inversion(self):
        x = np.random.default_rng(1).integers(0, 256, (12, 17)).astype(float)
        assert ncc(x, 255 - x) == pytest.approx(-1.0, abs=1e-9)

    def test_random_pairs_near_zero(self):
        # Monte-Carlo: independent noise images decorrelate
        rng = np.random.default_rng(2)
        vals = [
            ncc(rng.uniform(0, 255, (32, 32)), rng.uniform(0, 255, (32, 32)))
            for _ in range(1000)
        ]
        assert np.mean(np.abs(vals) < 0.2) > 0.99

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            ncc(np.zeros((3, 3)), np.zeros((4, 3)))

    def test_constant_image_is_zero(self):
        x = np.random.default_rng(3).integers(0, 256, (8, 8)).astype(float)
        assert ncc(np.full((8, 8), 9.0), x) == 0.0

    @given(
        a=st.floats(0.1, 10),
        b=st.floats(-50, 50),
        seed=st.integers(0, 1000),
    )
    @settings(max_examples=50, deadline=None)
    def test_affine_invariance_and_symmetry(self, a, b, seed):
        rng = np.random.default_rng(seed)
        x = rng.uniform(0, 255, (10, 10))
        y = rng.uniform(0, 255, (10, 10))
        base = ncc(x, y)
        assert -1 - 1e-9 <= base <= 1 + 1e-9
        assert ncc(y, x) == pytest.approx(base, abs=1e-9)
        assert ncc(a * x + b, y) == pytest.approx(base, abs=1e-7)


class TestTemplateBackend:
    def test_active_camera_tile(self):
        crops, _ = synth_crops(
            SynthSpec(seed=5, camera_position=TilePosition.T2, camera_active=True)
        )
        be = TemplateBackend()
        assert decide(be.classify(crops[1])) is TileClass.ACTIVE_CAMERA

    def test_inactive_camera_tile(self):
        crops, _ = synth_crops(SynthSpec(seed=6, camera_position=TilePosition.T3))
        be = TemplateBackend()
        assert decide(be.classify(crops[2])) is TileClass.INACTIVE_CAMERA

    def test_instrument_tile_is_no_camera(self):
        crops, _ = synth_crops(SynthSpec(seed=7, camera_position=TilePosition.T2))
        be = TemplateBackend()
        for i in (0, 2, 3):
            assert decide(be.classify(crops[i])) is TileClass.NO_CAMERA

    def test_uniform_gray_tile(self):
        tile = np.full((28, 168, 3), 128, dtype=np.uint8)
        scores = TemplateBackend().classify(tile)
        assert decide(scores) is TileClass.NO_CAMERA

    def test_pure_function(self):
        crops, _ = synth_crops(
            SynthSpec(seed=8, camera_position=TilePosition.T1, camera_active=True)
        )
        be = TemplateBackend()
        a = be.classify(crops[0])
        b = be.classify(crops[0])
        assert np.array_equal(a, b)

    def test_matches_ground_truth_on_synthetic_tiles(self):
        be = TemplateBackend()
        rng = np.random.default_rng(9)
        for _ in range(25):
            pos = TilePosition(int(rng.integers(0, 4)))
            active = bool(rng.integers(0, 2))
            spec = SynthSpec(
                seed=int(rng.integers(0, 2**32)),
                camera_position=pos,
                camera_active=active,
                ui_shift=(int(rng.integers(-4, 5)), int(rng.integers(-4, 5))),
            )
            crops, sf = synth_crops(spec)
            got = tuple(decide(classify_tile(be, c)) for c in crops)
            assert got == sf.tile_truth

    def test_config_validation(self):
        with pytest.raises(ValueError):
            TemplateBackendConfig(templates=[])
        with pytest.raises(ValueError):
            TemplateBackendConfig(ncc_threshold=1.5)
