"""Temporal smoothing of the per-frame activation bit and segment extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import ActivationSegment, FrameClass, FrameResult


@dataclass
class SmoothingConfig:
    window: int = 5
    min_segment_frames: int = 1

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError("window must be an odd count >= 1")
        if self.min_segment_frames < 1:
            raise ValueError("min_segment_frames must be >= 1")

    @classmethod
    def from_dict(cls, d: dict | None) -> "SmoothingConfig":
        return cls(**(d or {}))


def binarize(result: FrameResult) -> int:
    """1 iff exactly one active camera; anomalies (TOO_MANY) count as 0."""
    return 1 if result.frame_class is FrameClass.ONE_ACTIVE else 0


def smooth(signal, cfg: SmoothingConfig) -> np.ndarray:
    """Sliding-window majority vote.

    Near the edges the window shrinks symmetrically to the available
    frames, so it stays odd and the output keeps the input length.
    """
    bits = np.asarray(signal, dtype=np.int64)
    n = len(bits)
    if n == 0 or cfg.window == 1:
        return bits.copy()
    half = cfg.window // 2
    csum = np.concatenate(([0], np.cumsum(bits)))
    idx = np.arange(n)
    reach = np.minimum(np.minimum(idx, n - 1 - idx), half)
    ones = csum[idx + reach + 1] - csum[idx - reach]
    return (2 * ones > 2 * reach + 1).astype(np.int64)


def segments(signal, cfg: SmoothingConfig) -> list[ActivationSegment]:
    """Maximal runs of 1s with at least min_segment_frames frames, in order."""
    bits = np.asarray(signal, dtype=np.int64)
    out = []
    start = None
    for i, b in enumerate(bits):
        if b and start is None:
            start = i
        elif not b and start is not None:
            if i - start >= cfg.min_segment_frames:
                out.append(ActivationSegment(start, i))
            start = None
    if start is not None and len(bits) - start >= cfg.min_segment_frames:
        out.append(ActivationSegment(start, len(bits)))
    return out
