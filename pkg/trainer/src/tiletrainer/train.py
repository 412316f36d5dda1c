"""Fine-tuning recipe for the 3-class tile classifier.

ResNet18 backbone with a 3-output head, SGD momentum 0.9 under a
one-cycle LR schedule (max 1e-3), per-class one-vs-rest BCE with
positive weighting from label frequencies, gradient-norm clipping at 5,
stem + first residual stage frozen.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
import torchvision
from PIL import Image
from torch import nn
from torch.utils.data import DataLoader, Dataset

from cameratile import TileClass
from cameratile.classify import IMAGENET_MEAN, IMAGENET_STD

from .dataset import TileRecord, stratified_split

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 128
    momentum: float = 0.9
    max_lr: float = 1e-3
    grad_clip_norm: float = 5.0
    freeze_first_block: bool = True
    pretrained: bool = True
    val_fraction: float = 0.1
    split_seed: int = 0
    torch_seed: int = 0
    stop_on_perfect_f1: bool = False
    num_workers: int = 0


class TileImageDataset(Dataset):
    def __init__(self, records: list[TileRecord]):
        self.records = records
        self._mean = np.array(IMAGENET_MEAN, dtype=np.float32).reshape(3, 1, 1)
        self._std = np.array(IMAGENET_STD, dtype=np.float32).reshape(3, 1, 1)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        r = self.records[i]
        img = np.asarray(Image.open(r.tile_path).convert("RGB"))
        x = img.astype(np.float32).transpose(2, 0, 1) / 255.0
        x = (x - self._mean) / self._std
        target = np.zeros(3, dtype=np.float32)
        target[r.label.value] = 1.0
        return torch.from_numpy(x), torch.from_numpy(target)


def build_model(cfg: TrainConfig) -> nn.Module:
    weights = None
    if cfg.pretrained:
        try:
            weights = torchvision.models.ResNet18_Weights.IMAGENET1K_V1
            model = torchvision.models.resnet18(weights=weights)
        except Exception as e:
            log.warning("pretrained weights unavailable (%s); using random init", e)
            model = torchvision.models.resnet18(weights=None)
    else:
        model = torchvision.models.resnet18(weights=None)
    model.fc = nn.Linear(model.fc.in_features, 3)
    if cfg.freeze_first_block:
        # "first block" = stem (conv1 + bn1) plus the first residual stage
        for module in (model.conv1, model.bn1, model.layer1):
            for p in module.parameters():
                p.requires_grad_(False)
    return model


def positive_weights(records) -> torch.Tensor:
    """Per-class pos_weight = negatives / positives over the training split."""
    counts = np.zeros(3)
    for r in records:
        counts[r.label.value] += 1
    total = len(records)
    pos = np.maximum(counts, 1.0)
    return torch.tensor((total - counts) / pos, dtype=torch.float32)


def macro_f1(pred: np.ndarray, truth: np.ndarray) -> float:
    """Unweighted mean per-class F1; classes absent on both sides excluded."""
    f1s = []
    for c in range(3):
        tp = int(np.sum((pred == c) & (truth == c)))
        fp = int(np.sum((pred == c) & (truth != c)))
        fn = int(np.sum((pred != c) & (truth == c)))
        if tp + fp + fn == 0:
            continue
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f1s.append(2 * p * r / (p + r) if p + r else 0.0)
    return float(np.mean(f1s))


@torch.no_grad()
def evaluate(model, loader) -> float:
    model.eval()
    preds, truths = [], []
    for x, y in loader:
        scores = model(x)
        preds.append(scores.argmax(dim=1).numpy())
        truths.append(y.argmax(dim=1).numpy())
    return macro_f1(np.concatenate(preds), np.concatenate(truths))


def train(records, cfg: TrainConfig, out_dir) -> dict:
    """Run the full recipe; writes model.pt and metrics.jsonl to out_dir.

    Returns a summary with the per-epoch log and the first epoch that
    reached a perfect held-out macro F1 (or None).
    """
    present = {r.label for r in records}
    if present != set(TileClass):
        missing = [c.name for c in set(TileClass) - present]
        raise ValueError(f"dataset is missing classes: {missing}")

    torch.manual_seed(cfg.torch_seed)
    train_recs, val_recs = stratified_split(records, cfg.val_fraction, cfg.split_seed)
    train_loader = DataLoader(
        TileImageDataset(train_recs),
        batch_size=cfg.batch_size,
        shuffle=True,
        num_workers=cfg.num_workers,
        generator=torch.Generator().manual_seed(cfg.torch_seed),
    )
    val_loader = DataLoader(
        TileImageDataset(val_recs), batch_size=cfg.batch_size, num_workers=cfg.num_workers
    )

    model = build_model(cfg)
    frozen_before = {
        name: p.detach().clone() for name, p in model.named_parameters() if not p.requires_grad
    }
    criterion = nn.BCEWithLogitsLoss(pos_weight=positive_weights(train_recs))
    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.SGD(trainable, lr=cfg.max_lr / 25, momentum=cfg.momentum)
    scheduler = torch.optim.lr_scheduler.OneCycleLR(
        optimizer, max_lr=cfg.max_lr, total_steps=cfg.epochs * max(1, len(train_loader))
    )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    log_path = out / "metrics.jsonl"
    epoch_log = []
    first_perfect = None
    with open(log_path, "w", encoding="utf-8") as log_file:
        for epoch in range(1, cfg.epochs + 1):
            model.train()
            losses = []
            for x, y in train_loader:
                optimizer.zero_grad()
                loss = criterion(model(x), y)
                loss.backward()
                nn.utils.clip_grad_norm_(trainable, cfg.grad_clip_norm)
                optimizer.step()
                scheduler.step()
                losses.append(loss.detach().item())
            if not all(np.isfinite(losses)):
                raise RuntimeError(f"non-finite loss in epoch {epoch}")
            f1 = evaluate(model, val_loader)
            entry = {"epoch": epoch, "macro_f1": f1, "loss": float(np.mean(losses))}
            epoch_log.append(entry)
            log_file.write(json.dumps(entry) + "\n")
            log_file.flush()
            log.info("epoch %d: loss %.4f, held-out macro F1 %.4f", epoch, entry["loss"], f1)
            if f1 == 1.0 and first_perfect is None:
                first_perfect = epoch
                if cfg.stop_on_perfect_f1:
                    break

    for name, p in model.named_parameters():
        if name in frozen_before and not torch.equal(p.detach(), frozen_before[name]):
            raise RuntimeError(f"frozen parameter {name} changed during training")

    model_path = out / "model.pt"
    export_model(model, model_path)
    return {
        "model_path": str(model_path),
        "metrics_path": str(log_path),
        "epochs_run": len(epoch_log),
        "first_perfect_epoch": first_perfect,
        "final_macro_f1": epoch_log[-1]["macro_f1"],
        "epoch_log": epoch_log,
        "val_size": len(val_recs),
        "train_size": len(train_recs),
    }


class ScoreModel(nn.Module):
    """Export wrapper: normalized tile batch in, raw class scores out.

    Input contract: float tensor `tiles` of shape N x 3 x 28 x 168,
    already (x/255 - mean)/std normalized with the ImageNet statistics
    (normalization stays on the consumer side, not in the graph).
    """

    def __init__(self, backbone: nn.Module):
        super().__init__()
        self.backbone = backbone

    def forward(self, tiles):
        scores = self.backbone(tiles)
        return scores


def export_model(model: nn.Module, path) -> None:
    model.eval()
    wrapped = ScoreModel(model)
    example = torch.zeros(1, 3, 28, 168)
    traced = torch.jit.trace(wrapped, example)
    torch.jit.save(traced, str(path))


@torch.no_grad()
def scores_for_tiles(model: nn.Module, tiles: np.ndarray) -> np.ndarray:
    """Trainer-side inference on raw uint8 tiles (N x 28 x 168 x 3)."""
    model.eval()
    mean = np.array(IMAGENET_MEAN, dtype=np.float32).reshape(1, 3, 1, 1)
    std = np.array(IMAGENET_STD, dtype=np.float32).reshape(1, 3, 1, 1)
    x = tiles.astype(np.float32).transpose(0, 3, 1, 2) / 255.0
    x = (x - mean) / std
    return model(torch.from_numpy(x)).numpy()
