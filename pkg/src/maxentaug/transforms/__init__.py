from .color import ColorMap, ColorMapParams, apply_color_map, sample_color_map
from .spatial import (
    DiffeoParams,
    DisplacementField,
    apply_diffeo,
    bijective_strength_interval,
    jacobian_determinant,
    mode_projection,
    sample_diffeo,
)
from .spectral import (
    SpectralKernel,
    SpectralKernelParams,
    apply_spectral,
    delta_kernel,
    sample_spectral_kernel,
)

__all__ = [
    "ColorMap",
    "ColorMapParams",
    "DiffeoParams",
    "DisplacementField",
    "SpectralKernel",
    "SpectralKernelParams",
    "apply_color_map",
    "apply_diffeo",
    "apply_spectral",
    "bijective_strength_interval",
    "delta_kernel",
    "jacobian_determinant",
    "mode_projection",
    "sample_color_map",
    "sample_diffeo",
    "sample_spectral_kernel",
]
