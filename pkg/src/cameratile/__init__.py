"""Camera-tile position and activation detection in Da Vinci Xi UI frames.

Pipeline: normalize frame geometry -> crop four UI tiles -> classify each
tile -> fuse into a frame class -> smooth over time -> activation segments.
"""

from .types import (
    Activation,
    ActivationSegment,
    FrameAnnotation,
    FrameClass,
    FrameResult,
    TileClass,
    TilePosition,
)

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "ActivationSegment",
    "FrameAnnotation",
    "FrameClass",
    "FrameResult",
    "TileClass",
    "TilePosition",
    "__version__",
]
