"""Deterministic renderer for Xi-UI-like frames with known ground truth.

The renderer shares the geometry config and the icon template with the
pipeline under test, so the template backend is an exact oracle on these
frames. All randomness comes from NumPy's PCG64 generator seeded per
spec, so corpora are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from . import evaluation, kernels
from .errors import InvalidSpec
from .fusion import fuse
from .geometry import CANONICAL_HEIGHT, CANONICAL_WIDTH, GeometryConfig
from .icon import ICON_HEIGHT, ICON_WIDTH, camera_icon
from .types import Activation, FrameAnnotation, FrameClass, TileClass, TilePosition

TILE_COLOR = np.array([25.0, 25.0, 32.0])
TILE_ALPHA = 0.8
HIGHLIGHT_COLOR = np.array([110.0, 190.0, 235.0])
HIGHLIGHT_ALPHA = 0.7
ICON_VALUE = 255

BORDER_CHOICES = (0, 6, 12)
SCALE_CHOICES = (1.0, 1.25, 2.0)


@dataclass
class SynthSpec:
    seed: int
    camera_position: TilePosition | None = None
    camera_active: bool = False
    ui_shift: tuple[int, int] = (0, 0)
    border: int = 0
    output_scale: float = 1.0
    background: str | tuple[int, int, int] = "noise"

    def validate(self, cfg: GeometryConfig) -> None:
        if self.camera_active and self.camera_position is None:
            raise InvalidSpec("active camera requires a camera position")
        dx, dy = self.ui_shift
        if abs(dx) > cfg.margin or abs(dy) > cfg.margin:
            raise InvalidSpec(f"ui shift {self.ui_shift} exceeds crop margin {cfg.margin}")
        if self.border < 0:
            raise InvalidSpec("border must be >= 0")
        if self.output_scale <= 0:
            raise InvalidSpec("output_scale must be positive")
        if isinstance(self.background, tuple):
            r, g, b = self.background
            if 0.299 * r + 0.587 * g + 0.114 * b < 2 * cfg.border_luma_threshold:
                raise InvalidSpec("solid background too dark; indistinguishable from border")


@dataclass
class SynthFrame:
    frame: np.ndarray
    truth: FrameAnnotation
    tile_truth: tuple[TileClass, ...]
    tile_rects: list[tuple[int, int, int, int]]  # normalized coords, shifted cores


def _clip_rect(frame: np.ndarray, x: int, y: int, w: int, h: int) -> np.ndarray:
    """View of the rect intersected with the frame (shifted cores can poke out)."""
    x0, y0 = max(x, 0), max(y, 0)
    x1 = min(x + w, frame.shape[1])
    y1 = min(y + h, frame.shape[0])
    return frame[y0:y1, x0:x1]


def _blend(region: np.ndarray, color: np.ndarray, alpha: float) -> None:
    region[:] = np.clip(
        np.rint(region * (1.0 - alpha) + color * alpha), 0, 255
    ).astype(np.uint8)


def _draw_instrument_text(rng, frame, x, y, w, h) -> None:
    """Light dashes standing in for an instrument name."""
    rows = (y + 5, y + h - 8)
    for row in rows:
        cx = x + 10
        while cx < x + w - 24:
            dash = int(rng.integers(8, 20))
            if rng.random() < 0.75:
                frame[row : row + 3, cx : cx + dash] = 205
            cx += dash + int(rng.integers(4, 10))


def render(spec: SynthSpec, cfg: GeometryConfig | None = None) -> SynthFrame:
    """Render one frame plus exact ground truth."""
    cfg = cfg or GeometryConfig()
    spec.validate(cfg)
    rng = np.random.default_rng(spec.seed)

    if spec.background == "noise":
        gray = rng.integers(35, 170, size=(CANONICAL_HEIGHT, CANONICAL_WIDTH), dtype=np.uint8)
        frame = np.repeat(gray[:, :, None], 3, axis=2)
    else:
        frame = np.empty((CANONICAL_HEIGHT, CANONICAL_WIDTH, 3), dtype=np.uint8)
        frame[:] = np.array(spec.background, dtype=np.uint8)

    dx, dy = spec.ui_shift
    icon = camera_icon()
    tile_truth = []
    tile_rects = []
    for pos in TilePosition:
        cx, cy, cw, ch = cfg.tile_core_rect(pos)
        x, y = cx + dx, cy + dy
        tile_rects.append((x, y, cw, ch))
        region = _clip_rect(frame, x, y, cw, ch)
        _blend(region, TILE_COLOR, TILE_ALPHA)
        if pos is spec.camera_position:
            if spec.camera_active:
                _blend(region, HIGHLIGHT_COLOR, HIGHLIGHT_ALPHA)
                tile_truth.append(TileClass.ACTIVE_CAMERA)
            else:
                tile_truth.append(TileClass.INACTIVE_CAMERA)
            iy = y + (ch - ICON_HEIGHT) // 2
            ix = x + (cw - ICON_WIDTH) // 2
            mask = icon > 0
            frame[iy : iy + ICON_HEIGHT, ix : ix + ICON_WIDTH][mask] = ICON_VALUE
        else:
            _draw_instrument_text(rng, frame, x, y, cw, ch)
            tile_truth.append(TileClass.NO_CAMERA)

    if spec.border:
        b = spec.border
        frame = np.pad(frame, ((b, b), (b, b), (0, 0)))
    if spec.output_scale != 1.0:
        out_h = max(16, round(frame.shape[0] * spec.output_scale))
        out_w = max(16, round(frame.shape[1] * spec.output_scale))
        frame = kernels.resize_bilinear(frame, out_h, out_w)

    if spec.camera_position is None:
        activation = Activation.NONE
    elif spec.camera_active:
        activation = Activation.ACTIVE
    else:
        activation = Activation.INACTIVE
    truth = FrameAnnotation(0, spec.camera_position, activation)
    return SynthFrame(frame, truth, tuple(tile_truth), tile_rects)


DEFAULT_MIX = {"none": 0.4, "inactive": 0.35, "active": 0.25}


@dataclass
class CorpusFrame:
    index: int
    spec: SynthSpec
    synth: SynthFrame


def _draw_spec(rng, index: int, mix: dict) -> SynthSpec:
    kinds = list(mix)
    probs = np.array([mix[k] for k in kinds], dtype=np.float64)
    kind = rng.choice(kinds, p=probs / probs.sum())
    if kind == "none":
        pos, active = None, False
    else:
        pos = TilePosition(int(rng.integers(0, 4)))
        active = kind == "active"
    return SynthSpec(
        seed=int(rng.integers(0, 2**63)),
        camera_position=pos,
        camera_active=active,
        ui_shift=(int(rng.integers(-4, 5)), int(rng.integers(-4, 5))),
        border=int(rng.choice(BORDER_CHOICES)),
        output_scale=float(rng.choice(SCALE_CHOICES)),
        background="noise",
    )


def render_corpus(
    n: int,
    seed: int,
    class_mix: dict | None = None,
    out_dir: str | Path | None = None,
    cfg: GeometryConfig | None = None,
) -> list[CorpusFrame]:
    """Render a reproducible corpus; optionally write PNGs + annotation CSV."""
    if n < 1:
        raise InvalidSpec("corpus size must be >= 1")
    mix = class_mix or DEFAULT_MIX
    master = np.random.default_rng(seed)
    frames = []
    for i in range(n):
        spec = _draw_spec(master, i, mix)
        synth = render(spec, cfg)
        synth.truth = FrameAnnotation(i, synth.truth.camera_position, synth.truth.activation)
        frames.append(CorpusFrame(i, spec, synth))

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for cf in frames:
            Image.fromarray(cf.synth.frame).save(out / f"frame_{cf.index:06d}.png")
        evaluation.save_annotations(out / "annotations.csv", [cf.synth.truth for cf in frames])
    return frames


def check_truth_consistency(sf: SynthFrame) -> bool:
    """Generator invariant: fusing tile truth reproduces the frame truth."""
    frame_class, pos = fuse(sf.tile_truth)
    expected = {
        Activation.NONE: FrameClass.NO_CAMERA,
        Activation.INACTIVE: FrameClass.ONE_INACTIVE,
        Activation.ACTIVE: FrameClass.ONE_ACTIVE,
    }[sf.truth.activation]
    return frame_class is expected and pos == sf.truth.camera_position
