"""Pipeline configuration, named presets and the flat key/value config format.

The S1/S2/S3 presets target the three distribution-shift splits of the
filling-level task: S1 and S2 lean on strong smooth warps for unseen
container shapes, S3 on color/spectral changes for unseen colors.
"""

from __future__ import annotations

from dataclasses import dataclass, replace, asdict, fields
from typing import Optional, Tuple

from .errors import ConfigError

FAMILIES = ("spatial", "color", "spectral")
DEPTH_MODES = ("fixed", "uniform")


@dataclass(frozen=True)
class PipelineConfig:
    width: int = 3
    depth: int = 3
    depth_mode: str = "fixed"
    dirichlet_concentration: float = 1.0
    beta_alpha: float = 1.0
    beta_beta: float = 1.0
    family_pool: Tuple[str, ...] = FAMILIES
    k_tau: int = 10
    sigma_tau_sq: Optional[float] = None  # None: sample from the interval
    tau_strength_interval: Optional[Tuple[float, float]] = None  # None: calibrated
    k_gamma: int = 500
    sigma_gamma_sq: float = 0.001
    k_omega: int = 3
    sigma_omega_sq: float = 0.01

    def validate(self) -> "PipelineConfig":
        if self.width < 1:
            raise ConfigError("width must be >= 1", key="width")
        if self.depth < 1:
            raise ConfigError("depth must be >= 1", key="depth")
        if self.depth_mode not in DEPTH_MODES:
            raise ConfigError(
                f"depth_mode must be one of {DEPTH_MODES}", key="depth_mode"
            )
        if not self.dirichlet_concentration > 0:
            raise ConfigError(
                "dirichlet_concentration must be > 0", key="dirichlet_concentration"
            )
        if not self.beta_alpha > 0:
            raise ConfigError("beta_alpha must be > 0", key="beta_alpha")
        if not self.beta_beta > 0:
            raise ConfigError("beta_beta must be > 0", key="beta_beta")
        if not self.family_pool:
            raise ConfigError("family_pool must be non-empty", key="family_pool")
        for fam in self.family_pool:
            if fam not in FAMILIES:
                raise ConfigError(f"unknown family {fam!r}", key="family_pool")
        if self.k_tau < 1:
            raise ConfigError("k_tau must be >= 1", key="k_tau")
        if self.sigma_tau_sq is not None and self.sigma_tau_sq < 0:
            raise ConfigError("sigma_tau_sq must be >= 0", key="sigma_tau_sq")
        if self.tau_strength_interval is not None:
            lo, hi = self.tau_strength_interval
            if lo < 0 or hi < lo:
                raise ConfigError(
                    "tau_strength_interval must be 0 <= low <= high",
                    key="tau_strength_interval",
                )
        if self.k_gamma < 1:
            raise ConfigError("k_gamma must be >= 1", key="k_gamma")
        if self.sigma_gamma_sq < 0:
            raise ConfigError("sigma_gamma_sq must be >= 0", key="sigma_gamma_sq")
        if self.k_omega < 1 or self.k_omega % 2 == 0:
            raise ConfigError("k_omega must be odd and >= 1", key="k_omega")
        if self.sigma_omega_sq < 0:
            raise ConfigError("sigma_omega_sq must be >= 0", key="sigma_omega_sq")
        return self


_S_BASE = PipelineConfig(
    width=3,
    depth=3,
    beta_alpha=5.0,
    beta_beta=1.0,
)

PRESETS = {
    "S1": _S_BASE,
    "S2": replace(_S_BASE, depth=1),
    "S3": replace(_S_BASE, beta_alpha=6.0, beta_beta=2.0),
    # S1 base with uniform mixing, the sensitivity-analysis starting point
    "default": replace(_S_BASE, beta_alpha=1.0, beta_beta=1.0),
}

PRESET_NAMES = tuple(PRESETS)


def preset(name: str) -> PipelineConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None


def _format_value(key, value):
    if value is None:
        return ""
    if key == "family_pool":
        return ",".join(value)
    if key == "tau_strength_interval":
        return f"{value[0]!r},{value[1]!r}"
    return repr(value) if isinstance(value, float) else str(value)


def dumps_config(cfg: PipelineConfig) -> str:
    lines = [f"{f.name} = {_format_value(f.name, getattr(cfg, f.name))}" for f in fields(cfg)]
    return "\n".join(lines) + "\n"


_INT_KEYS = {"width", "depth", "k_tau", "k_gamma", "k_omega"}
_FLOAT_KEYS = {
    "dirichlet_concentration",
    "beta_alpha",
    "beta_beta",
    "sigma_gamma_sq",
    "sigma_omega_sq",
}


def _parse_value(key, raw, line_no):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key == "sigma_tau_sq":
            return None if raw == "" else float(raw)
        if key == "tau_strength_interval":
            if raw == "":
                return None
            lo, hi = raw.split(",")
            return (float(lo), float(hi))
        if key == "family_pool":
            return tuple(p.strip() for p in raw.split(",") if p.strip())
        if key == "depth_mode":
            return raw
    except (ValueError, TypeError) as exc:
        raise ConfigError(
            f"line {line_no}: cannot parse {key} value {raw!r}: {exc}", key=key
        ) from None
    raise AssertionError(key)


def loads_config(text: str) -> PipelineConfig:
    """Parse the flat ``key = value`` format; unknown keys are rejected."""
    known = {f.name for f in fields(PipelineConfig)}
    values = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in known:
            raise ConfigError(f"line {line_no}: unknown config key {key!r}", key=key)
        if key in values:
            raise ConfigError(f"line {line_no}: duplicate key {key!r}", key=key)
        values[key] = _parse_value(key, raw, line_no)
    return PipelineConfig(**values).validate()


def load_config(path) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_config(fh.read())


def config_to_dict(cfg: PipelineConfig) -> dict:
    d = asdict(cfg)
    d["family_pool"] = list(cfg.family_pool)
    if cfg.tau_strength_interval is not None:
        d["tau_strength_interval"] = list(cfg.tau_strength_interval)
    return d


def config_from_dict(d: dict) -> PipelineConfig:
    d = dict(d)
    d["family_pool"] = tuple(d["family_pool"])
    if d.get("tau_strength_interval") is not None:
        d["tau_strength_interval"] = tuple(d["tau_strength_interval"])
    return PipelineConfig(**d).validate()
