"""Batch extraction: frame files in, activation metadata JSON out.

Classification runs on a worker pool; temporal smoothing consumes the
results in frame-index order, so worker count never changes the output.
"""

from __future__ import annotations

import json
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from . import geometry, temporal
from .classify import classify_tile, decide
from .config import PipelineConfig
from .fusion import fuse
from .types import ActivationSegment, FrameClass, FrameResult, TileClass, TilePosition

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff", ".webp"}

SCHEMA_VERSION = 1


@dataclass
class ExtractionOutput:
    frames: list[FrameResult]
    smoothed: np.ndarray
    segments: list[ActivationSegment]
    summary: dict


def list_frame_files(input_path) -> list[tuple[int, Path]]:
    """Resolve an input directory (numeric order) or a list file.

    A list file has one `index path` pair per line; paths are relative to
    the list file.
    """
    p = Path(input_path)
    if p.is_dir():
        files = sorted(
            (f for f in p.iterdir() if f.suffix.lower() in IMAGE_EXTENSIONS),
            key=_numeric_key,
        )
        return list(enumerate(files))
    out = []
    with open(p, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            idx_s, path_s = line.split(maxsplit=1)
            out.append((int(idx_s), p.parent / path_s))
    return sorted(out)


def _numeric_key(path: Path):
    nums = re.findall(r"\d+", path.stem)
    return (int(nums[-1]) if nums else -1, path.name)


def _process_frame(args):
    index, path, cfg, backend = args
    try:
        raw = np.asarray(Image.open(path).convert("RGB"))
        normalized = geometry.normalize(raw, cfg.geometry)
    except Exception:
        # unreadable frame: degrade to NO_CAMERA with an error flag
        return FrameResult(
            index, FrameClass.NO_CAMERA, None, (TileClass.NO_CAMERA,) * 4, decode_error=True
        )
    crops = geometry.crop_tiles(normalized, cfg.geometry)
    scores = tuple(classify_tile(backend, c) for c in crops)
    tiles = tuple(decide(s) for s in scores)
    frame_class, pos = fuse(tiles)
    return FrameResult(
        index, frame_class, pos, tiles, tile_scores=scores if cfg.emit_scores else None
    )


def run_extract(input_path, cfg: PipelineConfig, out_dir=None) -> ExtractionOutput:
    """Run the full pipeline over a frame source; optionally write outputs."""
    backend = cfg.make_backend()
    entries = list_frame_files(input_path)
    jobs = [(idx, path, cfg, backend) for idx, path in entries]

    t0 = time.perf_counter()
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_process_frame, jobs))
    else:
        results = [_process_frame(j) for j in jobs]
    elapsed = time.perf_counter() - t0

    results.sort(key=lambda r: r.frame_index)
    bits = np.array([temporal.binarize(r) for r in results], dtype=np.int64)
    smoothed = temporal.smooth(bits, cfg.smoothing)
    segs = temporal.segments(smoothed, cfg.smoothing)

    class_counts = {fc.value: 0 for fc in FrameClass}
    for r in results:
        class_counts[r.frame_class.value] += 1
    summary = {
        "frame_count": len(results),
        "class_counts": class_counts,
        "active_frame_ratio": float(smoothed.mean()) if len(smoothed) else 0.0,
        "decode_errors": sum(r.decode_error for r in results),
        "backend": backend.descriptor,
        "throughput_fps": len(results) / elapsed if elapsed > 0 else 0.0,
        "elapsed_seconds": elapsed,
        "workers": cfg.workers,
    }
    output = ExtractionOutput(results, smoothed, segs, summary)
    if out_dir is not None:
        write_output(output, out_dir)
    return output


def result_to_record(r: FrameResult) -> dict:
    rec = {
        "i": r.frame_index,
        "class": r.frame_class.value,
        "pos": r.camera_position.name if r.camera_position is not None else None,
        "tiles": [t.short for t in r.tile_classes],
    }
    if r.tile_scores is not None:
        rec["scores"] = [[float(v) for v in s] for s in r.tile_scores]
    if r.decode_error:
        rec["error"] = True
    return rec


def record_to_result(rec: dict) -> FrameResult:
    return FrameResult(
        frame_index=rec["i"],
        frame_class=FrameClass(rec["class"]),
        camera_position=TilePosition[rec["pos"]] if rec.get("pos") else None,
        tile_classes=tuple(TileClass.from_short(t) for t in rec["tiles"]),
        decode_error=bool(rec.get("error", False)),
    )


def output_to_json(output: ExtractionOutput) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "frames": [result_to_record(r) for r in output.frames],
        "segments": [{"start": s.start_frame, "end": s.end_frame} for s in output.segments],
        "summary": output.summary,
    }


def write_output(output: ExtractionOutput, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "output.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(output_to_json(output), f, indent=1)
        f.write("\n")
    return path


def write_frames_csv(output: ExtractionOutput, path) -> None:
    """Optional flat per-frame CSV next to the JSON."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["frame_index", "frame_class", "camera_position", "t1", "t2", "t3", "t4", "smoothed_active"])
        for r, bit in zip(output.frames, output.smoothed):
            w.writerow(
                [
                    r.frame_index,
                    r.frame_class.value,
                    r.camera_position.name if r.camera_position is not None else "NONE",
                    *[t.short for t in r.tile_classes],
                    int(bit),
                ]
            )


def run_eval(pred_path, truth_path, out_dir) -> dict:
    """Score an extraction JSON against a canonical annotation CSV.

    Writes metrics.json plus binary, 10-class frame, and tile confusion
    matrices into out_dir, and returns the metrics dict.
    """
    from . import evaluation

    preds, _ = load_output(pred_path)
    truth = evaluation.load_annotations(truth_path)

    reports = {}
    for scope in evaluation.Scope:
        m = evaluation.binary_frame_metrics(preds, truth, scope)
        reports[scope.value] = {
            "accuracy": m.accuracy,
            "precision": m.precision,
            "recall": m.recall,
            "f1": m.f1,
            "support": m.support,
        }

    pairs = evaluation.align_by_index(preds, truth)
    pred_frame_labels = [evaluation.frame_label(p) for p, _ in pairs]
    true_frame_labels = [evaluation.annotation_label(t) for _, t in pairs]
    frame_cm = evaluation.confusion(pred_frame_labels, true_frame_labels, evaluation.FRAME_LABELS)

    from .types import FrameClass as FC

    pred_bin = ["ACTIVE" if p.frame_class is FC.ONE_ACTIVE else "NOT_ACTIVE" for p, _ in pairs]
    true_bin = [
        "ACTIVE" if t.activation.value == "ACTIVE" else "NOT_ACTIVE" for _, t in pairs
    ]
    binary_cm = evaluation.confusion(pred_bin, true_bin, ["NOT_ACTIVE", "ACTIVE"])

    pred_tiles = [tc for p, _ in pairs for tc in p.tile_classes]
    true_tiles = [tc for _, t in pairs for tc in evaluation.tiles_from_annotation(t)]
    tile_cm = evaluation.confusion(
        [t.short for t in pred_tiles], [t.short for t in true_tiles], evaluation.TILE_LABELS
    )
    metrics = {
        "binary": reports,
        "tile_macro_f1": evaluation.tile_macro_f1(pred_tiles, true_tiles),
        "scored_frames": len(pairs),
    }

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "metrics.json", "w", encoding="utf-8") as f:
        json.dump(metrics, f, indent=1)
        f.write("\n")
    frame_cm.write_csv(out / "confusion_frame.csv")
    binary_cm.write_csv(out / "confusion_binary.csv")
    tile_cm.write_csv(out / "confusion_tile.csv")
    return metrics


def load_output(path) -> tuple[list[FrameResult], list[ActivationSegment]]:
    """Read an extraction JSON back into result records."""
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {data.get('schema')!r}")
    frames = [record_to_result(rec) for rec in data["frames"]]
    segs = [ActivationSegment(s["start"], s["end"]) for s in data["segments"]]
    return frames, segs
