"""Metrics against frame-wise annotations: tile macro F1, binary
activation metrics (including/excluding no-UI frames), confusion matrices,
and the canonical annotation CSV format."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, AnnotationParseError, EmptyInput, LengthMismatch, UnknownLabel
from .types import Activation, FrameAnnotation, FrameClass, FrameResult, TileClass, TilePosition

ANNOTATION_HEADER = ["frame_index", "camera_position", "activation"]

# Frame-level 10-class layout: no camera, inactive x T1-T4, active x T1-T4,
# plus a dedicated row for multi-camera anomalies.
FRAME_LABELS = (
    ["NO_CAMERA"]
    + [f"INACTIVE_{p.name}" for p in TilePosition]
    + [f"ACTIVE_{p.name}" for p in TilePosition]
    + ["TOO_MANY"]
)

TILE_LABELS = [c.short for c in TileClass]


class Scope(enum.Enum):
    INCLUDING_NO_UI = "including_no_ui"
    EXCLUDING_NO_UI = "excluding_no_ui"


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    scope: Scope
    support: int


@dataclass
class ConfusionMatrix:
    labels: list[str]
    counts: np.ndarray  # rows = true, cols = predicted

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def normalized(self) -> np.ndarray:
        """Row-normalized percentages over true labels; empty rows stay 0."""
        sums = self.counts.sum(axis=1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            pct = np.where(sums > 0, 100.0 * self.counts / sums, 0.0)
        return pct

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["true\\pred"] + self.labels)
            for lbl, row in zip(self.labels, self.counts):
                w.writerow([lbl] + [int(v) for v in row])


def load_annotations(path) -> list[FrameAnnotation]:
    """Parse the canonical annotation CSV; errors name the 1-based line."""
    out = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise AnnotationParseError(1, "empty file") from None
        if [h.strip() for h in header] != ANNOTATION_HEADER:
            raise AnnotationParseError(1, f"bad header {header!r}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise AnnotationParseError(line_no, f"expected 3 fields, got {len(row)}")
            idx_s, pos_s, act_s = (v.strip() for v in row)
            try:
                idx = int(idx_s)
            except ValueError:
                raise AnnotationParseError(line_no, f"bad frame_index {idx_s!r}") from None
            if pos_s == "NONE":
                pos = None
            else:
                try:
                    pos = TilePosition[pos_s]
                except KeyError:
                    raise AnnotationParseError(line_no, f"bad camera_position {pos_s!r}") from None
            try:
                act = Activation(act_s)
            except ValueError:
                raise AnnotationParseError(line_no, f"bad activation {act_s!r}") from None
            try:
                out.append(FrameAnnotation(idx, pos, act))
            except ValueError as e:
                raise AnnotationParseError(line_no, str(e)) from None
    return out


def save_annotations(path, annotations) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(ANNOTATION_HEADER)
        for a in annotations:
            pos = a.camera_position.name if a.camera_position is not None else "NONE"
            w.writerow([a.frame_index, pos, a.activation.value])


def tiles_from_annotation(ann: FrameAnnotation) -> tuple[TileClass, ...]:
    """Per-tile truth implied by a frame annotation."""
    tiles = [TileClass.NO_CAMERA] * 4
    if ann.camera_position is not None:
        tiles[int(ann.camera_position)] = (
            TileClass.ACTIVE_CAMERA
            if ann.activation is Activation.ACTIVE
            else TileClass.INACTIVE_CAMERA
        )
    return tuple(tiles)


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def tile_macro_f1(pred, truth) -> float:
    """Unweighted mean of per-class F1 over the tile classes.

    Classes absent from both prediction and truth are left out of the mean.
    """
    pred = list(pred)
    truth = list(truth)
    if len(pred) != len(truth):
        raise LengthMismatch(f"{len(pred)} predictions vs {len(truth)} truths")
    if not pred:
        raise EmptyInput("no tiles to score")
    f1s = []
    for cls in TileClass:
        tp = sum(1 for p, t in zip(pred, truth) if p is cls and t is cls)
        fp = sum(1 for p, t in zip(pred, truth) if p is cls and t is not cls)
        fn = sum(1 for p, t in zip(pred, truth) if p is not cls and t is cls)
        if tp + fp + fn == 0:
            continue
        f1s.append(_prf(tp, fp, fn)[2])
    return float(np.mean(f1s))


def align_by_index(pred, truth):
    """Pair predictions with annotations by frame_index, sorted ascending."""
    pred_by_idx = {p.frame_index: p for p in pred}
    truth_by_idx = {t.frame_index: t for t in truth}
    missing_in_pred = set(truth_by_idx) - set(pred_by_idx)
    missing_in_truth = set(pred_by_idx) - set(truth_by_idx)
    if missing_in_pred or missing_in_truth:
        raise AlignmentError(missing_in_pred, missing_in_truth)
    return [(pred_by_idx[i], truth_by_idx[i]) for i in sorted(pred_by_idx)]


def binary_frame_metrics(pred, truth, scope: Scope = Scope.INCLUDING_NO_UI) -> MetricReport:
    """Active-camera-versus-rest metrics over index-aligned frames.

    EXCLUDING_NO_UI drops frames whose annotation has no camera tile
    before scoring.
    """
    pairs = align_by_index(pred, truth)
    if scope is Scope.EXCLUDING_NO_UI:
        pairs = [(p, t) for p, t in pairs if t.camera_position is not None]
    if not pairs:
        raise EmptyInput("no frames in scope")
    tp = fp = fn = tn = 0
    for p, t in pairs:
        pa = p.frame_class is FrameClass.ONE_ACTIVE
        ta = t.activation is Activation.ACTIVE
        if pa and ta:
            tp += 1
        elif pa:
            fp += 1
        elif ta:
            fn += 1
        else:
            tn += 1
    precision, recall, f1 = _prf(tp, fp, fn)
    accuracy = (tp + tn) / len(pairs)
    return MetricReport(accuracy, precision, recall, f1, scope, len(pairs))


def confusion(pred, truth, labels) -> ConfusionMatrix:
    """Absolute-count confusion matrix, rows = true, cols = predicted."""
    pred = list(pred)
    truth = list(truth)
    if len(pred) != len(truth):
        raise LengthMismatch(f"{len(pred)} predictions vs {len(truth)} truths")
    index = {lbl: i for i, lbl in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for p, t in zip(pred, truth):
        if t not in index:
            raise UnknownLabel(f"true label {t!r}")
        if p not in index:
            raise UnknownLabel(f"predicted label {p!r}")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(list(labels), counts)


def frame_label(result: FrameResult) -> str:
    """10-class frame label for a prediction."""
    if result.frame_class is FrameClass.NO_CAMERA:
        return "NO_CAMERA"
    if result.frame_class is FrameClass.TOO_MANY:
        return "TOO_MANY"
    prefix = "ACTIVE" if result.frame_class is FrameClass.ONE_ACTIVE else "INACTIVE"
    return f"{prefix}_{result.camera_position.name}"


def annotation_label(ann: FrameAnnotation) -> str:
    """10-class frame label for an annotation."""
    if ann.camera_position is None:
        return "NO_CAMERA"
    prefix = "ACTIVE" if ann.activation is Activation.ACTIVE else "INACTIVE"
    return f"{prefix}_{ann.camera_position.name}"
