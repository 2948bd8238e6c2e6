"""Deterministic image augmentation with mixtures of max-entropy transformations."""

__version__ = "0.1.0"

from .config import PipelineConfig, PRESET_NAMES, load_config, preset
from .core import RngStream, clamp_image, sample_beta, sample_dirichlet
from .mixer import AugmentationRecord, compose_branch, replay, transform_image
from .pipeline import (
    ManifestEntry,
    balanced_weights,
    load_manifest,
    run_augment,
    run_bench,
    run_sweep,
)

__all__ = [
    "AugmentationRecord",
    "ManifestEntry",
    "PipelineConfig",
    "PRESET_NAMES",
    "RngStream",
    "balanced_weights",
    "clamp_image",
    "compose_branch",
    "load_config",
    "load_manifest",
    "preset",
    "replay",
    "run_augment",
    "run_bench",
    "run_sweep",
    "sample_beta",
    "sample_dirichlet",
    "transform_image",
]
