"""Declarative pipeline configuration, loadable from one YAML document."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml
from PIL import Image

from .classify import ModelBackend, ModelBackendConfig, TemplateBackend, TemplateBackendConfig
from .geometry import GeometryConfig
from .temporal import SmoothingConfig


@dataclass
class PipelineConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    backend: str = "template"
    template: TemplateBackendConfig = field(default_factory=TemplateBackendConfig)
    model: ModelBackendConfig = field(default_factory=ModelBackendConfig)
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    workers: int = 1
    emit_scores: bool = False

    def __post_init__(self):
        if self.backend not in ("template", "model"):
            raise ValueError("backend must be 'template' or 'model'")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def make_backend(self):
        if self.backend == "model":
            return ModelBackend(self.model)
        return TemplateBackend(self.template)

    @classmethod
    def from_dict(cls, d: dict | None, base_dir: Path | None = None) -> "PipelineConfig":
        d = dict(d or {})
        base = Path(base_dir) if base_dir else Path(".")

        tmpl_d = dict(d.pop("template", {}) or {})
        paths = tmpl_d.pop("templates", None)
        if paths:
            tmpl_d["templates"] = [_load_template(base / p) for p in paths]
        if "highlight_hue_range" in tmpl_d:
            tmpl_d["highlight_hue_range"] = tuple(tmpl_d["highlight_hue_range"])

        model_d = dict(d.pop("model", {}) or {})
        if "model_path" in model_d:
            model_d["model_path"] = str(base / model_d["model_path"])
        for k in ("mean", "std"):
            if k in model_d:
                model_d[k] = tuple(model_d[k])

        return cls(
            geometry=GeometryConfig.from_dict(d.pop("geometry", None)),
            template=TemplateBackendConfig(**tmpl_d),
            model=ModelBackendConfig(**model_d),
            smoothing=SmoothingConfig.from_dict(d.pop("smoothing", None)),
            **d,
        )

    @classmethod
    def from_yaml(cls, path) -> "PipelineConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
        return cls.from_dict(data, base_dir=path.parent)


def _load_template(path: Path) -> np.ndarray:
    return np.asarray(Image.open(path).convert("L"))
