"""Per-tile classification: template-matching oracle backend and the
serialized-model production backend, behind one interface."""

from __future__ import annotations

import colorsys
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BackendFailure, SizeMismatch
from .geometry import luma
from .icon import camera_icon
from .types import TileClass

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


def decide(scores: np.ndarray) -> TileClass:
    """Argmax over the 3 class scores; ties break toward the lower class."""
    s = np.asarray(scores, dtype=np.float64)
    if s.shape != (3,):
        raise ValueError("expected exactly 3 scores")
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    return TileClass(int(np.argmax(s)))


def ncc(a: np.ndarray, b: np.ndarray) -> float:
    """Zero-normalized cross-correlation of two equal-size grayscale images.

    Returns 0 when either image has zero variance.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise SizeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise SizeMismatch("empty image")
    a0 = a - a.mean()
    b0 = b - b.mean()
    denom = np.sqrt((a0 * a0).sum() * (b0 * b0).sum())
    if denom <= 0.0:
        return 0.0
    return float((a0 * b0).sum() / denom)


def _validate_tile(tile: np.ndarray) -> None:
    if tile.ndim != 3 or tile.shape[2] != 3 or tile.dtype != np.uint8:
        raise ValueError("tile must be (H, W, 3) uint8")


@dataclass
class TemplateBackendConfig:
    """Settings for the template-matching backend.

    The camera-ness score is the best sliding-window NCC against any
    template; the activation cue is the mean tile color falling into a
    light-blue hue/saturation/value range.
    """

    templates: list[np.ndarray] = field(default_factory=lambda: [camera_icon()])
    ncc_threshold: float = 0.7
    highlight_hue_range: tuple[float, float] = (190.0, 230.0)
    highlight_min_saturation: float = 0.25
    highlight_min_value: float = 0.5

    def __post_init__(self):
        if not self.templates:
            raise ValueError("at least one template required")
        if not -1.0 <= self.ncc_threshold <= 1.0:
            raise ValueError("ncc_threshold must be in [-1, 1]")


class TemplateBackend:
    """Desk-scale oracle backend: NCC template match + highlight color cue.

    Calibrated against the synthetic renderer, which draws from the same
    templates; on real footage the templates and thresholds come from the
    pipeline config.
    """

    def __init__(self, cfg: TemplateBackendConfig | None = None):
        self.cfg = cfg or TemplateBackendConfig()
        self._templates = [np.asarray(t, dtype=np.float64) for t in self.cfg.templates]

    @property
    def descriptor(self) -> str:
        return f"template/1 ({len(self._templates)} templates, thr={self.cfg.ncc_threshold})"

    def camera_score(self, tile: np.ndarray) -> float:
        gray = luma(tile)
        return max(kernels.ncc_max(gray, t) for t in self._templates)

    def highlight_flag(self, tile: np.ndarray) -> bool:
        r, g, b = tile.reshape(-1, 3).mean(axis=0) / 255.0
        h, s, v = colorsys.rgb_to_hsv(r, g, b)
        lo, hi = self.cfg.highlight_hue_range
        return (
            lo <= h * 360.0 <= hi
            and s >= self.cfg.highlight_min_saturation
            and v >= self.cfg.highlight_min_value
        )

    def classify(self, tile: np.ndarray) -> np.ndarray:
        _validate_tile(tile)
        found = self.camera_score(tile) >= self.cfg.ncc_threshold
        if not found:
            return np.array([1.0, 0.0, 0.0])
        if self.highlight_flag(tile):
            return np.array([0.0, 0.0, 1.0])
        return np.array([0.0, 1.0, 0.0])


@dataclass
class ModelBackendConfig:
    """Contract for the serialized neural-network backend.

    The model file takes a float batch named "tiles" shaped N x 3 x H x W
    (channel-first, (x/255 - mean)/std normalized) and returns N x 3 raw
    scores named "scores", ordered as TileClass.
    """

    model_path: str = ""
    mean: tuple[float, float, float] = IMAGENET_MEAN
    std: tuple[float, float, float] = IMAGENET_STD


class ModelBackend:
    """Runs a TorchScript-serialized classifier on tile crops."""

    def __init__(self, cfg: ModelBackendConfig):
        self.cfg = cfg
        try:
            import torch
        except ImportError as e:
            raise BackendFailure("torch is required for the model backend") from e
        self._torch = torch
        try:
            self._model = torch.jit.load(cfg.model_path, map_location="cpu")
        except Exception as e:
            raise BackendFailure(f"could not load model file {cfg.model_path!r}: {e}") from e
        self._model.eval()
        self._mean = np.array(cfg.mean, dtype=np.float32).reshape(3, 1, 1)
        self._std = np.array(cfg.std, dtype=np.float32).reshape(3, 1, 1)

    @property
    def descriptor(self) -> str:
        return f"model/1 ({self.cfg.model_path})"

    def classify(self, tile: np.ndarray) -> np.ndarray:
        _validate_tile(tile)
        x = tile.astype(np.float32).transpose(2, 0, 1) / 255.0
        x = (x - self._mean) / self._std
        torch = self._torch
        try:
            with torch.no_grad():
                scores = self._model(torch.from_numpy(x[None]))
        except Exception as e:
            raise BackendFailure(f"model forward pass failed: {e}") from e
        out = scores.numpy()
        if out.shape != (1, 3):
            raise BackendFailure(f"model emitted shape {out.shape}, expected (1, 3)")
        out = out[0].astype(np.float64)
        if not np.all(np.isfinite(out)):
            raise BackendFailure("model emitted non-finite scores")
        return out


def classify_tile(backend, tile: np.ndarray) -> np.ndarray:
    """Run one tile through a backend, checking the score contract."""
    scores = backend.classify(tile)
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != (3,) or not np.all(np.isfinite(scores)):
        raise BackendFailure(f"backend {backend.descriptor} broke the score contract")
    return scores
