"""Trainer CLI: extract labeled tiles, then fine-tune and export."""

from __future__ import annotations

import logging
import sys

import click

from cameratile.geometry import GeometryConfig

from . import dataset, train as train_mod


@click.group()
def main():
    """Tile-classifier training for the cameratile pipeline."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")


@main.command("extract-tiles")
@click.option("--frames", "frames_path", required=True, type=click.Path(exists=True))
@click.option("--truth", "truth_path", required=True, type=click.Path(exists=True),
              help="Canonical annotation CSV.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--source", default="default", show_default=True, help="Source video id tag.")
def extract_tiles_cmd(frames_path, truth_path, out_dir, source):
    """Cut labeled 168x28 tiles out of annotated frames."""
    records = dataset.extract_tiles(frames_path, truth_path, out_dir, source=source)
    click.echo(f"wrote {len(records)} tile records to {out_dir}")


@main.command("train")
@click.option("--tiles", "records_path", required=True, type=click.Path(exists=True),
              help="tiles.csv written by extract-tiles.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--epochs", default=100, show_default=True, type=int)
@click.option("--batch-size", default=128, show_default=True, type=int)
@click.option("--max-lr", default=1e-3, show_default=True, type=float)
@click.option("--no-pretrained", is_flag=True, help="Skip ImageNet initialization.")
@click.option("--stop-on-perfect-f1", is_flag=True,
              help="Stop as soon as held-out macro F1 reaches 1.0.")
def train_cmd(records_path, out_dir, epochs, batch_size, max_lr, no_pretrained, stop_on_perfect_f1):
    """Fine-tune the classifier and export model.pt + metrics.jsonl."""
    records = dataset.load_records(records_path)
    cfg = train_mod.TrainConfig(
        epochs=epochs,
        batch_size=batch_size,
        max_lr=max_lr,
        pretrained=not no_pretrained,
        stop_on_perfect_f1=stop_on_perfect_f1,
    )
    summary = train_mod.train(records, cfg, out_dir)
    click.echo(
        f"trained {summary['epochs_run']} epochs; "
        f"first perfect F1 epoch: {summary['first_perfect_epoch']}; "
        f"final macro F1 {summary['final_macro_f1']:.4f}; model at {summary['model_path']}"
    )


if __name__ == "__main__":
    sys.exit(main())
