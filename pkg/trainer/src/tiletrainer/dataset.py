"""Tile dataset extraction from annotated frame sequences.

Consumes the pipeline's canonical annotation CSV plus the frame images,
and writes one labeled 168x28 tile crop per (frame, position)."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from cameratile import TileClass, TilePosition
from cameratile.evaluation import load_annotations, tiles_from_annotation
from cameratile.geometry import GeometryConfig, crop_tiles, normalize
from cameratile.pipeline import list_frame_files

log = logging.getLogger(__name__)

RECORDS_FILENAME = "tiles.csv"
RECORDS_HEADER = ["tile_path", "label", "position", "source"]


@dataclass(frozen=True)
class TileRecord:
    tile_path: str
    label: TileClass
    position: TilePosition
    source: str


def extract_tiles(
    frames_path,
    annotations_path,
    out_dir,
    geometry: GeometryConfig | None = None,
    source: str = "default",
) -> list[TileRecord]:
    """Cut labeled tiles out of every annotated frame.

    The annotated camera tile gets its INACTIVE/ACTIVE label; the other
    three positions are labeled no-camera. Unreadable frames are skipped
    with a log entry.
    """
    cfg = geometry or GeometryConfig()
    annotations = {a.frame_index: a for a in load_annotations(annotations_path)}
    out = Path(out_dir)
    (out / "tiles").mkdir(parents=True, exist_ok=True)

    records = []
    for index, path in list_frame_files(frames_path):
        ann = annotations.get(index)
        if ann is None:
            continue
        try:
            raw = np.asarray(Image.open(path).convert("RGB"))
            crops = crop_tiles(normalize(raw, cfg), cfg)
        except Exception as e:
            log.warning("skipping frame %d (%s): %s", index, path, e)
            continue
        labels = tiles_from_annotation(ann)
        for pos, crop, label in zip(TilePosition, crops, labels):
            tile_path = out / "tiles" / f"{source}_{index:06d}_{pos.name}.png"
            Image.fromarray(crop).save(tile_path)
            records.append(TileRecord(str(tile_path), label, pos, source))

    save_records(out / RECORDS_FILENAME, records)
    return records


def save_records(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(RECORDS_HEADER)
        for r in records:
            w.writerow([r.tile_path, r.label.short, r.position.name, r.source])


def load_records(path) -> list[TileRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != RECORDS_HEADER:
            raise ValueError(f"bad records header {header!r}")
        for row in reader:
            tile_path, label, position, source = row
            records.append(
                TileRecord(tile_path, TileClass.from_short(label), TilePosition[position], source)
            )
    return records


def stratified_split(records, val_fraction: float = 0.1, seed: int = 0):
    """Deterministic held-out split, stratified by (label, position)."""
    rng = np.random.default_rng(seed)
    groups: dict = {}
    for r in records:
        groups.setdefault((r.label, r.position), []).append(r)
    train, val = [], []
    for key in sorted(groups, key=lambda k: (k[0].value, k[1].value)):
        members = groups[key]
        order = rng.permutation(len(members))
        n_val = max(1, round(len(members) * val_fraction)) if len(members) > 1 else 0
        for j, i in enumerate(order):
            (val if j < n_val else train).append(members[i])
    return train, val
