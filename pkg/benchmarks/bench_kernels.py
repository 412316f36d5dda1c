#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-NumPy fallback, plus
the end-to-end per-frame pipeline on both.

Usage: python3 benchmarks/bench_kernels.py [--frames N]
"""

import argparse
import time

import numpy as np

from cameratile import geometry, kernels, synth
from cameratile.classify import TemplateBackend, classify_tile, decide
from cameratile.fusion import fuse
from cameratile.geometry import GeometryConfig
from cameratile.kernels import reference


def timeit(fn, repeat):
    fn()
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench_kernels():
    rng = np.random.default_rng(0)
    big = rng.integers(0, 256, (1090, 1328, 3), dtype=np.uint8)
    tile = rng.integers(0, 256, (28, 168)).astype(np.float64)
    tpl = rng.integers(0, 256, (16, 24)).astype(np.float64)

    impls = [("reference", reference)]
    if kernels.HAVE_COMPILED:
        from cameratile.kernels import _fast

        impls.append(("cython", _fast))

    print(f"{'kernel':<34}" + "".join(f"{name:>12}" for name, _ in impls))
    rows = [
        ("resize_bilinear 1328x1090->640x521", lambda m: m.resize_bilinear(big, 521, 640), 10),
        ("ncc_max 168x28 vs 24x16 template", lambda m: m.ncc_max(tile, tpl), 50),
    ]
    for label, call, repeat in rows:
        cells = []
        for _, mod in impls:
            ms = timeit(lambda: call(mod), repeat) * 1e3
            cells.append(f"{ms:9.2f} ms")
        print(f"{label:<34}" + "".join(f"{c:>12}" for c in cells))


def bench_pipeline(n_frames):
    cfg = GeometryConfig()
    be = TemplateBackend()
    frames = [cf.synth.frame for cf in synth.render_corpus(n_frames, seed=1)]

    def run(resize, ncc_max):
        kernels.resize_bilinear, kernels.ncc_max = resize, ncc_max
        t0 = time.perf_counter()
        for f in frames:
            nf = geometry.normalize(f, cfg)
            tiles = tuple(decide(classify_tile(be, c)) for c in geometry.crop_tiles(nf, cfg))
            fuse(tiles)
        return n_frames / (time.perf_counter() - t0)

    saved = (kernels.resize_bilinear, kernels.ncc_max)
    try:
        print(f"\npipeline throughput over {n_frames} frames:")
        print(f"  reference kernels: {run(reference.resize_bilinear, reference.ncc_max):8.1f} FPS")
        if kernels.HAVE_COMPILED:
            from cameratile.kernels import _fast

            print(f"  compiled kernels:  {run(_fast.resize_bilinear, _fast.ncc_max):8.1f} FPS")
        else:
            print("  compiled kernels:  not built")
    finally:
        kernels.resize_bilinear, kernels.ncc_max = saved


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--frames", type=int, default=200)
    args = ap.parse_args()
    bench_kernels()
    bench_pipeline(args.frames)
