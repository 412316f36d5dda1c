"""Shared enums and result records."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class TilePosition(enum.IntEnum):
    """Tile slot in the UI bar, left to right."""

    T1 = 0
    T2 = 1
    T3 = 2
    T4 = 3

    @property
    def label(self) -> str:
        return self.name


class TileClass(enum.IntEnum):
    """Per-tile decision. Argmax ties break toward the lower value."""

    NO_CAMERA = 0
    INACTIVE_CAMERA = 1
    ACTIVE_CAMERA = 2

    @property
    def short(self) -> str:
        return {0: "NO", 1: "INACTIVE", 2: "ACTIVE"}[self.value]

    @classmethod
    def from_short(cls, s: str) -> "TileClass":
        return {"NO": cls.NO_CAMERA, "INACTIVE": cls.INACTIVE_CAMERA, "ACTIVE": cls.ACTIVE_CAMERA}[s]


class FrameClass(enum.Enum):
    """Fused frame-level outcome."""

    NO_CAMERA = "NO_CAMERA"
    ONE_INACTIVE = "ONE_INACTIVE"
    ONE_ACTIVE = "ONE_ACTIVE"
    TOO_MANY = "TOO_MANY"


class Activation(enum.Enum):
    """Annotated camera activation state."""

    NONE = "NONE"
    INACTIVE = "INACTIVE"
    ACTIVE = "ACTIVE"


@dataclass
class FrameResult:
    """One frame's fused prediction."""

    frame_index: int
    frame_class: FrameClass
    camera_position: TilePosition | None
    tile_classes: tuple[TileClass, TileClass, TileClass, TileClass]
    tile_scores: tuple[np.ndarray, ...] | None = None
    decode_error: bool = False

    def __post_init__(self):
        has_pos = self.camera_position is not None
        wants_pos = self.frame_class in (FrameClass.ONE_INACTIVE, FrameClass.ONE_ACTIVE)
        if has_pos != wants_pos:
            raise ValueError("camera_position must be present iff exactly one camera was found")


@dataclass(frozen=True)
class FrameAnnotation:
    """One frame's ground-truth camera position and activation."""

    frame_index: int
    camera_position: TilePosition | None
    activation: Activation

    def __post_init__(self):
        if (self.camera_position is None) != (self.activation is Activation.NONE):
            raise ValueError("activation must be NONE iff there is no camera tile")


@dataclass(frozen=True)
class ActivationSegment:
    """Half-open [start, end) run of active frames."""

    start_frame: int
    end_frame: int

    def __post_init__(self):
        if self.start_frame >= self.end_frame:
            raise ValueError("segment must span at least one frame")

    @property
    def frame_count(self) -> int:
        return self.end_frame - self.start_frame
