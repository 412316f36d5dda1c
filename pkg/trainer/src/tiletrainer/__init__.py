"""Training side of the camera-tile pipeline: tile extraction from
annotated frames, classifier fine-tuning, and model export."""

__version__ = "0.1.0"
