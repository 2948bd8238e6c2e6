"""In-process bindings for training loops: arrays in, arrays out.

A :class:`BoundPipeline` pins a validated configuration and a root seed;
:func:`augment_array` then augments caller-provided images without any file
round-trips. Results are element-exact with the core engine for the same
(seed, stream_id), and independent of the order in which stream ids are
used, so data-loader workers can process shards in any order.

BoundPipeline is immutable and safe to share across threads; each
augment_array call derives its own random stream and touches no shared
state. The heavy per-pixel loops run in compiled kernels that do not hold
the interpreter lock.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

import maxentaug
from maxentaug import PipelineConfig, RngStream, transform_image
from maxentaug.config import PRESET_NAMES, loads_config, preset

__version__ = maxentaug.__version__

__all__ = [
    "BoundPipeline",
    "PRESET_NAMES",
    "augment_array",
    "make_pipeline",
    "__version__",
]


@dataclass(frozen=True)
class BoundPipeline:
    """A validated configuration bound to a root seed."""

    config: PipelineConfig
    seed: int


def make_pipeline(preset_or_config: str, seed: int) -> BoundPipeline:
    """Build a pipeline from a preset name or config text.

    Anything that is not a known preset name is parsed as the flat
    ``key = value`` config format; parse and validation errors carry the
    same key-level diagnostics as the file loader.
    """
    if not isinstance(preset_or_config, str):
        raise TypeError("preset_or_config must be a string")
    if preset_or_config in PRESET_NAMES:
        cfg = preset(preset_or_config)
    elif "=" in preset_or_config or preset_or_config.strip() == "":
        cfg = loads_config(preset_or_config)
    else:
        # a bare word that is not a preset: give the preset error, which
        # lists the valid names
        cfg = preset(preset_or_config)
    return BoundPipeline(config=cfg, seed=int(seed))


def augment_array(pipeline: BoundPipeline, image, stream_id: int) -> np.ndarray:
    """Augment one (H, W, C) array in [0, 1]; returns a float32 array.

    The result depends only on (pipeline.seed, stream_id, pipeline.config)
    and the image, never on call order or thread interleaving.
    """
    out, _ = transform_image(
        RngStream(pipeline.seed, int(stream_id)), pipeline.config, image
    )
    return out
