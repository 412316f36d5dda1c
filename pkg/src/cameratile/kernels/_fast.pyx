# Compiled counterparts of kernels.reference; same contracts, same results.

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, rint, sqrt

cnp.import_array()

BACKEND = "cython"


def resize_bilinear(src, int out_h, int out_w):
    if src.ndim != 3 or src.shape[2] != 3 or src.dtype != np.uint8:
        raise ValueError("expected (H, W, 3) uint8 raster")
    if out_h < 1 or out_w < 1:
        raise ValueError("output dimensions must be positive")

    cdef const unsigned char[:, :, ::1] s = np.ascontiguousarray(src)
    cdef int h = s.shape[0]
    cdef int w = s.shape[1]
    out = np.empty((out_h, out_w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] o = out

    cdef double sy = h / <double>out_h
    cdef double sx = w / <double>out_w
    cdef Py_ssize_t i, j, c
    cdef double yf, xf, wy, wx, top, bot, v
    cdef Py_ssize_t y0, y1, x0, x1

    cdef cnp.ndarray[cnp.float64_t, ndim=1] xfs = np.empty(out_w)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] x0s = np.empty(out_w, dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] x1s = np.empty(out_w, dtype=np.intp)
    for j in range(out_w):
        xf = (j + 0.5) * sx - 0.5
        if xf < 0.0:
            xf = 0.0
        if xf > w - 1.0:
            xf = w - 1.0
        x0 = <Py_ssize_t>floor(xf)
        x1 = x0 + 1 if x0 + 1 < w else w - 1
        xfs[j] = xf - x0
        x0s[j] = x0
        x1s[j] = x1

    for i in range(out_h):
        yf = (i + 0.5) * sy - 0.5
        if yf < 0.0:
            yf = 0.0
        if yf > h - 1.0:
            yf = h - 1.0
        y0 = <Py_ssize_t>floor(yf)
        y1 = y0 + 1 if y0 + 1 < h else h - 1
        wy = yf - y0
        for j in range(out_w):
            x0 = x0s[j]
            x1 = x1s[j]
            wx = xfs[j]
            for c in range(3):
                top = s[y0, x0, c] * (1.0 - wx) + s[y0, x1, c] * wx
                bot = s[y1, x0, c] * (1.0 - wx) + s[y1, x1, c] * wx
                v = rint(top * (1.0 - wy) + bot * wy)
                if v < 0.0:
                    v = 0.0
                if v > 255.0:
                    v = 255.0
                o[i, j, c] = <unsigned char>v
    return out


def ncc_max(image, template):
    img_arr = np.ascontiguousarray(image, dtype=np.float64)
    tpl_arr = np.ascontiguousarray(template, dtype=np.float64)
    if img_arr.ndim != 2 or tpl_arr.ndim != 2:
        raise ValueError("expected 2-D grayscale arrays")

    cdef const double[:, ::1] img = img_arr
    cdef Py_ssize_t th = tpl_arr.shape[0]
    cdef Py_ssize_t tw = tpl_arr.shape[1]
    cdef Py_ssize_t ih = img.shape[0]
    cdef Py_ssize_t iw = img.shape[1]
    if th > ih or tw > iw:
        raise ValueError("template larger than image")

    cdef double n = <double>(th * tw)
    t0_arr = tpl_arr - tpl_arr.mean()
    cdef const double[:, ::1] t0 = t0_arr
    cdef double t_norm = sqrt((t0_arr * t0_arr).sum() / n)
    if t_norm <= 0.0:
        return 0.0

    cdef double best = -2.0
    cdef double s1, s2, cross, a, var_n, denom, v
    cdef Py_ssize_t y, x, i, j
    for y in range(ih - th + 1):
        for x in range(iw - tw + 1):
            s1 = 0.0
            s2 = 0.0
            cross = 0.0
            for i in range(th):
                for j in range(tw):
                    a = img[y + i, x + j]
                    s1 += a
                    s2 += a * a
                    cross += a * t0[i, j]
            var_n = n * s2 - s1 * s1
            if var_n < 0.0:
                var_n = 0.0
            denom = sqrt(var_n) * t_norm
            v = cross / denom if denom > 1e-12 else 0.0
            if v > best:
                best = v
    return best
