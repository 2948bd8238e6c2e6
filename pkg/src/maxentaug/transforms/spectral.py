"""Random convolution filters perturbing the image's frequency content.

The kernel is the centered delta plus i.i.d. Gaussian noise of variance
strength / size^2 per tap, so it is the identity filter in expectation and
only slightly reshapes the spectrum at the intended strengths. Borders are
reflect-padded (edge not repeated).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.ndimage

from ..core import _as_generator, clamp_image
from ..errors import InvalidParameterError
from .._kernels import NUMBA_AVAILABLE, correlate_reflect


@dataclass(frozen=True)
class SpectralKernelParams:
    kernel_size: int = 3
    strength: float = 0.01


@dataclass(frozen=True)
class SpectralKernel:
    taps: np.ndarray  # (size, size) float64

    @property
    def size(self) -> int:
        return self.taps.shape[0]


def delta_kernel(size: int) -> np.ndarray:
    taps = np.zeros((size, size))
    taps[size // 2, size // 2] = 1.0
    return taps


def sample_spectral_kernel(rng, params: SpectralKernelParams) -> SpectralKernel:
    size = params.kernel_size
    if size < 1 or size % 2 == 0:
        raise InvalidParameterError("kernel size must be odd and >= 1")
    if params.strength < 0:
        raise InvalidParameterError("spectral strength must be >= 0")
    gen = _as_generator(rng)
    taps = delta_kernel(size)
    if params.strength > 0:
        taps = taps + gen.standard_normal((size, size)) * (
            np.sqrt(params.strength) / size
        )
    return SpectralKernel(taps)


def apply_spectral(x: np.ndarray, kernel: SpectralKernel) -> np.ndarray:
    """Per-channel sliding-window filtering with reflect padding, clamped float32."""
    size = kernel.size
    if size > min(x.shape[0], x.shape[1]):
        raise InvalidParameterError(
            f"kernel size {size} exceeds image {x.shape[0]}x{x.shape[1]}"
        )
    if NUMBA_AVAILABLE:
        out = correlate_reflect(
            np.ascontiguousarray(x, dtype=np.float32), np.ascontiguousarray(kernel.taps)
        )
    else:
        x64 = x.astype(np.float64, copy=False)
        out = np.empty(x.shape, dtype=np.float64)
        for c in range(x.shape[2]):
            scipy.ndimage.correlate(
                x64[:, :, c], kernel.taps, output=out[:, :, c], mode="mirror"
            )
    return clamp_image(out).astype(np.float32)
