"""Hot per-frame kernels: bilinear resize and sliding-window NCC.

A compiled Cython extension is used when present; otherwise the pure-NumPy
reference implementation takes over. Both expose the same functions and
produce the same results (see tests/test_kernels.py and benchmarks/).
"""

from . import reference

try:
    from . import _fast as _impl

    HAVE_COMPILED = True
except ImportError:
    _impl = reference
    HAVE_COMPILED = False

BACKEND = _impl.BACKEND
resize_bilinear = _impl.resize_bilinear
ncc_max = _impl.ncc_max

__all__ = ["BACKEND", "HAVE_COMPILED", "ncc_max", "reference", "resize_bilinear"]
