"""PNG/JPEG decode and PNG encode between files and [0, 1] float images."""

from __future__ import annotations

import numpy as np
from PIL import Image

from .core import IMAGE_DTYPE
from .errors import InvalidParameterError


def load_image(path) -> np.ndarray:
    """Decode a PNG or JPEG into a (H, W, C) float32 image, C in {1, 3}."""
    try:
        with Image.open(path) as im:
            if im.format not in ("PNG", "JPEG"):
                raise InvalidParameterError(f"{path}: unsupported format {im.format}")
            im = im.convert("L") if im.mode in ("L", "I;16", "1") else im.convert("RGB")
            arr = np.asarray(im, dtype=IMAGE_DTYPE) / IMAGE_DTYPE(255.0)
    except (OSError, SyntaxError) as exc:
        raise InvalidParameterError(f"cannot decode {path}: {exc}") from exc
    if arr.ndim == 2:
        arr = arr[:, :, None]
    return arr


def save_png(path, x: np.ndarray) -> None:
    """Encode a [0, 1] float image as 8-bit PNG (round to nearest)."""
    arr = np.asarray(x)
    if arr.min() < 0 or arr.max() > 1:
        raise InvalidParameterError("image must be in [0, 1] before encoding")
    u8 = np.rint(arr * 255.0).astype(np.uint8)
    if u8.shape[2] == 1:
        Image.fromarray(u8[:, :, 0], mode="L").save(path, format="PNG")
    else:
        Image.fromarray(u8, mode="RGB").save(path, format="PNG")
