"""Pure-NumPy implementations of the hot per-frame kernels.

These are the fallback used when the compiled extension is unavailable,
and the ground truth the extension is tested against.
"""

import numpy as np

BACKEND = "reference"


def resize_bilinear(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize of an 8-bit RGB raster.

    Sampling is center-aligned (source coordinate ``(i + 0.5) * scale - 0.5``)
    and the final 8-bit quantization rounds half to even, so resizing to the
    input size is an exact identity.
    """
    if src.ndim != 3 or src.shape[2] != 3 or src.dtype != np.uint8:
        raise ValueError("expected (H, W, 3) uint8 raster")
    if out_h < 1 or out_w < 1:
        raise ValueError("output dimensions must be positive")
    h, w = src.shape[:2]

    ys = np.clip((np.arange(out_h, dtype=np.float64) + 0.5) * (h / out_h) - 0.5, 0.0, h - 1.0)
    xs = np.clip((np.arange(out_w, dtype=np.float64) + 0.5) * (w / out_w) - 0.5, 0.0, w - 1.0)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = (ys - y0)[:, None, None]
    wx = (xs - x0)[None, :, None]

    f = src.astype(np.float64)
    top = f[y0][:, x0] * (1.0 - wx) + f[y0][:, x1] * wx
    bot = f[y1][:, x0] * (1.0 - wx) + f[y1][:, x1] * wx
    out = top * (1.0 - wy) + bot * wy
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def ncc_max(image: np.ndarray, template: np.ndarray) -> float:
    """Maximum zero-normalized cross-correlation over all valid placements.

    A window or template with zero variance correlates to 0 by convention.
    """
    img = np.ascontiguousarray(image, dtype=np.float64)
    tpl = np.ascontiguousarray(template, dtype=np.float64)
    if img.ndim != 2 or tpl.ndim != 2:
        raise ValueError("expected 2-D grayscale arrays")
    th, tw = tpl.shape
    ih, iw = img.shape
    if th > ih or tw > iw:
        raise ValueError("template larger than image")

    n = th * tw
    t0 = tpl - tpl.mean()
    t_norm = np.sqrt((t0 * t0).sum() / n)
    if t_norm <= 0.0:
        return 0.0

    windows = np.lib.stride_tricks.sliding_window_view(img, (th, tw))
    cross = np.einsum("ijkl,kl->ij", windows, t0)
    s1 = np.einsum("ijkl->ij", windows)
    s2 = np.einsum("ijkl,ijkl->ij", windows, windows)
    var_n = np.maximum(n * s2 - s1 * s1, 0.0)  # clamp fp cancellation noise
    denom = np.sqrt(var_n) * t_norm
    with np.errstate(divide="ignore", invalid="ignore"):
        ncc = np.where(denom > 1e-12, cross / denom, 0.0)
    return float(ncc.max())
