"""Built-in endoscope-tile icon, shared by the template backend and the
synthetic renderer (which makes the template backend an exact oracle on
synthetic frames)."""

import numpy as np

ICON_HEIGHT = 16
ICON_WIDTH = 24


def camera_icon() -> np.ndarray:
    """Deterministic grayscale camera glyph: body outline, lens ring, top bump."""
    icon = np.zeros((ICON_HEIGHT, ICON_WIDTH), dtype=np.uint8)

    # body outline
    icon[3, 1:23] = 255
    icon[15, 1:23] = 255
    icon[3:16, 1] = 255
    icon[3:16, 22] = 255

    # viewfinder bump
    icon[0:4, 6:12] = 255
    icon[1:3, 7:11] = 0

    # lens ring
    yy, xx = np.mgrid[0:ICON_HEIGHT, 0:ICON_WIDTH]
    dist = np.hypot(yy - 9.5, xx - 14.0)
    icon[(dist >= 2.0) & (dist <= 4.2)] = 255
    return icon
