"""Width/depth augmentation mixing.

A transformed image is a Dirichlet-weighted convex combination of ``width``
branches, each branch a composition of ``depth`` randomly chosen primitive
transforms. The final image blends the original with the transformed one
using a Beta-distributed coefficient p:

    x_hat = (1 - p) * x + p * sum_i mu_i * branch_i(x)
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .config import PipelineConfig, config_from_dict, config_to_dict
from .core import RngStream, as_image, clamp_image, sample_beta, sample_dirichlet
from .errors import InvalidParameterError, NumericDomainError
from .transforms.color import ColorMapParams, apply_color_map, sample_color_map
from .transforms.spatial import DiffeoParams, apply_diffeo, sample_diffeo
from .transforms.spectral import SpectralKernelParams, apply_spectral, sample_spectral_kernel


def _digest(arr) -> str:
    return hashlib.sha256(np.ascontiguousarray(arr, dtype=np.float64).tobytes()).hexdigest()[:16]


def _diffeo_params(cfg: PipelineConfig) -> DiffeoParams:
    return DiffeoParams(cfg.k_tau, cfg.sigma_tau_sq, cfg.tau_strength_interval)


def _apply_one(gen, cfg, family, x):
    """Sample one transform of ``family`` and apply it; returns (image, digest)."""
    if family == "spatial":
        f = sample_diffeo(gen, _diffeo_params(cfg), x.shape[0], x.shape[1])
        coeffs = f.dx if f.ax is None else np.stack([f.ax, f.ay])
        return apply_diffeo(x, f), _digest(coeffs)
    if family == "color":
        cm = sample_color_map(gen, ColorMapParams(cfg.k_gamma, cfg.sigma_gamma_sq), x.shape[2])
        return apply_color_map(x, cm), _digest(cm.coeffs)
    if family == "spectral":
        k = sample_spectral_kernel(gen, SpectralKernelParams(cfg.k_omega, cfg.sigma_omega_sq))
        return apply_spectral(x, k), _digest(k.taps)
    raise InvalidParameterError(f"unknown transform family {family!r}")


def _compose_branch(gen, cfg: PipelineConfig, x):
    """One branch: depth transforms drawn uniformly from the family pool."""
    pool = cfg.family_pool
    depth = cfg.depth
    if cfg.depth_mode == "uniform":
        depth = int(gen.integers(1, cfg.depth + 1))
    steps = []
    out = x
    for _ in range(depth):
        family = pool[int(gen.integers(len(pool)))]
        out, digest = _apply_one(gen, cfg, family, out)
        steps.append({"family": family, "digest": digest})
    return out, steps


def compose_branch(rng, cfg: PipelineConfig, x) -> np.ndarray:
    """Public single-branch entry point (families and parameters freshly sampled)."""
    from .core import _as_generator

    cfg.validate()
    out, _ = _compose_branch(_as_generator(rng), cfg, as_image(x))
    return out


@dataclass
class AugmentationRecord:
    """Replayable audit record of one augmentation call."""

    root_seed: int
    stream_id: int
    height: int
    width: int
    channels: int
    config: dict
    mix_weights: List[float]
    mix_coefficient: float
    branches: List[List[dict]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AugmentationRecord":
        return cls(**json.loads(text))


def transform_image(
    rng: RngStream,
    cfg: PipelineConfig,
    x,
    force_mu: Optional[np.ndarray] = None,
    force_p: Optional[float] = None,
    branch_fn=None,
):
    """Full augmentation of one image; returns (image, record).

    ``force_mu``, ``force_p`` and ``branch_fn`` are test hooks overriding the
    Dirichlet weights, the Beta coefficient and the branch computation.
    """
    cfg.validate()
    x = as_image(x)
    gen = rng.generator()

    if force_mu is not None:
        mu = np.asarray(force_mu, dtype=np.float64)
        if mu.shape != (cfg.width,) or mu.min() < 0 or abs(mu.sum() - 1.0) > 1e-9:
            raise InvalidParameterError("forced weights must be a length-n simplex vector")
    else:
        mu = sample_dirichlet(gen, cfg.width, cfg.dirichlet_concentration)
    p = force_p if force_p is not None else sample_beta(gen, cfg.beta_alpha, cfg.beta_beta)
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError("mix coefficient must lie in [0, 1]")

    x64 = x.astype(np.float64)
    x_t = np.zeros_like(x64)
    branch_meta = []
    for i in range(cfg.width):
        if branch_fn is not None:
            branch = np.asarray(branch_fn(i, x), dtype=np.float64)
            steps = [{"family": "stub", "digest": ""}]
        else:
            out, steps = _compose_branch(gen, cfg, x)
            branch = out.astype(np.float64)
        if np.isnan(branch).any():
            raise NumericDomainError(f"branch {i} produced NaN values")
        x_t += mu[i] * branch
        branch_meta.append(steps)

    mixed = (1.0 - p) * x64 + p * x_t
    record = AugmentationRecord(
        root_seed=rng.root_seed,
        stream_id=rng.stream_id,
        height=x.shape[0],
        width=x.shape[1],
        channels=x.shape[2],
        config=config_to_dict(cfg),
        mix_weights=[float(v) for v in mu],
        mix_coefficient=float(p),
        branches=branch_meta,
    )
    return clamp_image(mixed).astype(np.float32), record


def replay(record: AugmentationRecord, x) -> np.ndarray:
    """Re-run a recorded augmentation; bit-identical for the original image.

    The record pins (seed, stream, config), so replaying against a different
    image of the same size applies the same sampled parameters to it.
    """
    x = as_image(x)
    if x.shape != (record.height, record.width, record.channels):
        raise InvalidParameterError(
            f"record is for {record.height}x{record.width}x{record.channels}, "
            f"image is {x.shape}"
        )
    cfg = config_from_dict(record.config)
    out, rec = transform_image(RngStream(record.root_seed, record.stream_id), cfg, x)
    if rec.mix_weights != record.mix_weights or rec.mix_coefficient != record.mix_coefficient:
        raise InvalidParameterError("record does not match the current sampling scheme")
    return out
