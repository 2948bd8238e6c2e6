"""Image container conventions, seeded RNG streams and the base distributions.

Images are numpy float32 arrays of shape (H, W, C) with C in {1, 3} and
intensities in [0, 1]. 8-bit inputs are divided by 255 on decode and
rounded to nearest on encode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NumericDomainError

IMAGE_DTYPE = np.float32


def as_image(data) -> np.ndarray:
    """Coerce ``data`` to a valid (H, W, C) float32 image, validating shape and range."""
    x = np.asarray(data, dtype=IMAGE_DTYPE)
    if x.ndim == 2:
        x = x[:, :, None]
    if x.ndim != 3 or x.shape[2] not in (1, 3):
        raise InvalidParameterError(
            f"expected (H, W, C) image with C in {{1, 3}}, got shape {x.shape}"
        )
    if not np.isfinite(x).all():
        raise NumericDomainError("image contains NaN or infinite values")
    if x.min() < 0.0 or x.max() > 1.0:
        raise InvalidParameterError("image intensities must lie in [0, 1]")
    return x


def clamp_image(x: np.ndarray) -> np.ndarray:
    """Clip every intensity into [0, 1]; in-range entries pass through unchanged."""
    x = np.asarray(x)
    if x.size and np.isnan(np.min(x)):  # np.min propagates NaN in one pass
        raise NumericDomainError("cannot clamp an image containing NaN")
    return np.clip(x, 0.0, 1.0)


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream, reproducible independently of worker count.

    Identical (root_seed, stream_id) pairs yield identical draw sequences no
    matter how many other streams are active; each image in a batch gets its
    own stream (typically keyed by image index).
    """

    root_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.root_seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(ss)

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.root_seed, stream_id)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return rng.generator()


def sample_dirichlet(rng, n: int, concentration: float = 1.0) -> np.ndarray:
    """Draw mixing weights from a symmetric Dirichlet by normalizing Gamma draws.

    Returns a non-negative vector of length ``n`` summing to 1.
    """
    if n < 1:
        raise InvalidParameterError("Dirichlet dimension n must be >= 1")
    if not concentration > 0:
        raise InvalidParameterError("Dirichlet concentration must be > 0")
    gen = _as_generator(rng)
    g = gen.gamma(concentration, 1.0, size=n)
    total = g.sum()
    while total <= 0.0:  # all-zero Gamma draws are possible at tiny concentration
        g = gen.gamma(concentration, 1.0, size=n)
        total = g.sum()
    return g / total


def sample_beta(rng, alpha: float, beta: float) -> float:
    """Draw the original/transformed mixing coefficient p ~ Beta(alpha, beta)."""
    if not alpha > 0 or not beta > 0:
        raise InvalidParameterError("Beta shape parameters must be > 0")
    gen = _as_generator(rng)
    return float(gen.beta(alpha, beta))
