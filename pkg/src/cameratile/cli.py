"""Command-line front door: extract, eval, synth."""

from __future__ import annotations

import sys

import click

from . import pipeline, synth
from .config import PipelineConfig


@click.group()
def main():
    """Camera-tile activation metadata extraction for Da Vinci Xi UI video."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="Directory of numerically ordered frames, or an 'index path' list file.")
@click.option("--config", "config_path", type=click.Path(exists=True), help="Pipeline config YAML.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Output directory.")
@click.option("--backend", type=click.Choice(["template", "model"]), help="Override configured backend.")
@click.option("--workers", type=int, help="Override worker count.")
@click.option("--emit-scores", is_flag=True, help="Include raw tile scores in the JSON.")
@click.option("--csv", "emit_csv", is_flag=True, help="Also write a flat per-frame CSV.")
def extract(input_path, config_path, out_dir, backend, workers, emit_scores, emit_csv):
    """Run the detection pipeline over a frame sequence."""
    cfg = PipelineConfig.from_yaml(config_path) if config_path else PipelineConfig()
    if backend:
        cfg.backend = backend
    if workers:
        cfg.workers = workers
    if emit_scores:
        cfg.emit_scores = True
    output = pipeline.run_extract(input_path, cfg, out_dir=out_dir)
    if emit_csv:
        from pathlib import Path

        pipeline.write_frames_csv(output, Path(out_dir) / "frames.csv")
    s = output.summary
    click.echo(
        f"{s['frame_count']} frames, {len(output.segments)} active segments, "
        f"{s['decode_errors']} decode errors, {s['throughput_fps']:.1f} FPS"
    )


@main.command("eval")
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True),
              help="Extraction output JSON.")
@click.option("--truth", "truth_path", required=True, type=click.Path(exists=True),
              help="Canonical annotation CSV.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Output directory.")
def eval_cmd(pred_path, truth_path, out_dir):
    """Score predictions against frame-wise annotations."""
    metrics = pipeline.run_eval(pred_path, truth_path, out_dir)
    for scope, m in metrics["binary"].items():
        click.echo(
            f"binary [{scope}]  acc {m['accuracy']:.4f}  prec {m['precision']:.4f}  "
            f"rec {m['recall']:.4f}  f1 {m['f1']:.4f}  (n={m['support']})"
        )
    click.echo(f"tile macro F1: {metrics['tile_macro_f1']:.4f}")


@main.command("synth")
@click.option("--n", required=True, type=int, help="Number of frames to render.")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--mix", "mix_spec", help="Class mix, e.g. 'none=0.4,inactive=0.35,active=0.25'.")
def synth_cmd(n, seed, out_dir, mix_spec):
    """Render a deterministic synthetic corpus with annotations."""
    mix = None
    if mix_spec:
        mix = {}
        for part in mix_spec.split(","):
            k, v = part.split("=")
            if k.strip() not in ("none", "inactive", "active"):
                raise click.BadParameter(f"unknown class {k!r}")
            mix[k.strip()] = float(v)
    frames = synth.render_corpus(n, seed, class_mix=mix, out_dir=out_dir)
    click.echo(f"wrote {len(frames)} frames + annotations.csv to {out_dir}")


if __name__ == "__main__":
    sys.exit(main())
