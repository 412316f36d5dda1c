"""Combine four per-tile classes into one frame-level class and position."""

from __future__ import annotations

from .types import FrameClass, TileClass, TilePosition


def fuse(tile_classes) -> tuple[FrameClass, TilePosition | None]:
    """Frame class by camera-tile count.

    0 camera tiles -> NO_CAMERA, 1 -> ONE_INACTIVE/ONE_ACTIVE with its
    position, 2+ -> TOO_MANY (regardless of the active/inactive mix).
    """
    tiles = list(tile_classes)
    if len(tiles) != 4:
        raise ValueError("exactly four tile classes required")
    cameras = [
        (TilePosition(i), c) for i, c in enumerate(tiles) if c is not TileClass.NO_CAMERA
    ]
    if not cameras:
        return (FrameClass.NO_CAMERA, None)
    if len(cameras) > 1:
        return (FrameClass.TOO_MANY, None)
    pos, cls = cameras[0]
    if cls is TileClass.ACTIVE_CAMERA:
        return (FrameClass.ONE_ACTIVE, pos)
    return (FrameClass.ONE_INACTIVE, pos)
